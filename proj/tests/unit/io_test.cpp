#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <string>
#include <vector>

#include "hkt/config.hpp"
#include "hkt/expression.hpp"
#include "hkt/field_io.hpp"
#include "hkt/reports.hpp"

namespace fs = std::filesystem;

namespace hkt {
namespace {

std::string scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "hkt_io_test";
  fs::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out << bytes;
}

TEST(Config, ParsesCommentsListsAndWhitespace) {
  const auto c = Config::parse("# header\n n = 3 \n\nF = 0.5 * sin(2 * pi * x1)  # trailing\np = 4, 8,16\n");
  EXPECT_EQ(c.get_int("n"), 3);
  EXPECT_EQ(c.get_string("F"), "0.5 * sin(2 * pi * x1)");
  EXPECT_EQ(c.get_doubles("p"), (std::vector<double>{4, 8, 16}));
  EXPECT_EQ(c.get_int("missing", 7), 7);
  EXPECT_THROW(c.get_int("missing"), ConfigError);
  EXPECT_THROW(c.get_int("F"), ConfigError);
  EXPECT_THROW(c.require_only({"n", "F"}), ConfigError);
  EXPECT_NO_THROW(c.require_only({"n", "F", "p"}));
}

TEST(Config, RejectsMalformedLines) {
  EXPECT_THROW(Config::parse("n = 1\nn = 2\n"), ConfigError);
  EXPECT_THROW(Config::parse("just words\n"), ConfigError);
  EXPECT_THROW(Config::parse(" = 3\n"), ConfigError);
  EXPECT_THROW(Config::load(scratch("does_not_exist.cfg")), ConfigError);
  EXPECT_THROW(parse_double("1.5x", "v"), ConfigError);
  EXPECT_THROW(parse_int("2.5", "v"), ConfigError);
}

TEST(Expression, EvaluatesGrammar) {
  const std::vector<double> x{0.25, 2.0, 0, 0};
  EXPECT_NEAR(Expression("sin(2 * pi * x1)", 4)(x), 1.0, 1e-15);
  EXPECT_EQ(Expression("2 ^ 3 ^ 2", 4)(x), 512.0);
  EXPECT_EQ(Expression("-x2 ^ 2", 4)(x), -4.0);
  EXPECT_EQ(Expression("(1 + x2) * 3 - 4 / 2", 4)(x), 7.0);
  EXPECT_NEAR(Expression("exp(log(3)) + sqrt(4) + abs(-1) + tanh(0) + cos(0) + tan(0)", 4)(x), 7.0, 1e-14);
  EXPECT_EQ(Expression("1e-1 * 10", 4)(x), 1.0);
  EXPECT_TRUE(Expression("x3 + 1", 4).uses(3));
  EXPECT_FALSE(Expression("x3 + 1", 4).uses(1));
}

TEST(Expression, RejectsMalformedInput) {
  for (const char* bad : {"", "sin(", "1 +", "x0", "x5", "foo(1)", "1 2", "(1", "1)", "x"}) {
    EXPECT_THROW(Expression(bad, 4), ParseError) << bad;
  }
}

TEST(FieldIo, RoundTripIsBitExact) {
  const TorusGrid g(2, {0, 5}, 6);
  const auto f = sample_field(g, [](const std::vector<double>& x) {
    return std::sin(2 * std::numbers::pi * x[0]) / 3 + x[5] * 1e-17;
  });
  const auto path = scratch("rt.bin");
  write_field(path, f);
  const auto back = read_field(path);
  EXPECT_TRUE(back.grid == g);
  EXPECT_EQ(back.values, f.values);
  EXPECT_EQ(slurp(path).size(), 4u + 4 * 3 + 4 * 2 + 8 + 8 * 36);
}

TEST(FieldIo, RejectsCorruptFiles) {
  const TorusGrid g(1, {0}, 4);
  const auto path = scratch("ok.bin");
  write_field(path, ScalarField(g, 1.0));
  const std::string good = slurp(path);

  const auto expect_bad = [](const std::string& name, const std::string& bytes) {
    const auto p = scratch(name);
    spit(p, bytes);
    EXPECT_THROW(read_field(p), FieldFormatError) << name;
  };
  std::string magic = good;
  magic[0] = 'X';
  expect_bad("magic.bin", magic);
  expect_bad("trunc.bin", good.substr(0, good.size() - 3));
  expect_bad("trailing.bin", good + "x");
  expect_bad("empty.bin", "");
  EXPECT_THROW(read_field(scratch("absent.bin")), FieldFormatError);
}

TEST(FieldIo, CsvHeaderUsesOneBasedAxes) {
  const TorusGrid g(2, {1, 4}, 4);
  const auto path = scratch("f.csv");
  write_field_csv(path, ScalarField(g, 0.5));
  const auto text = slurp(path);
  EXPECT_EQ(text.substr(0, text.find('\n')), "x2,x5,value");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 17);
}

TEST(Reports, CherrierCsvAndDeterminism) {
  ProbeReport r;
  r.problem_id = "x";
  r.cherrier.push_back({4, 1.5, 2.0, 0.1875, 0, 0});
  EXPECT_EQ(cherrier_csv(r), "p,E,M,C\n4,1.5,2,0.1875\n");
  r.cherrier_growth = std::numeric_limits<double>::infinity();
  const auto j = probe_json(r);
  EXPECT_EQ(j, probe_json(r));
  EXPECT_NE(j.find("\"cherrier_growth\": null"), std::string::npos);
}

}  // namespace
}  // namespace hkt
