// hktq: oracle verification, solves and estimate probes on the flat quaternionic torus.
//
// Exit codes: 0 success, 1 mathematical failure, 2 usage or configuration error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hkt/config.hpp"
#include "hkt/expression.hpp"
#include "hkt/field_io.hpp"
#include "hkt/oracle.hpp"
#include "hkt/probe.hpp"
#include "hkt/reports.hpp"
#include "hkt/solver.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kMathFailure = 1;
constexpr int kUsageError = 2;

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

// Raised for anything that should end with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void note(const Options& o, const std::string& msg) {
  if (!o.quiet) std::cout << msg << "\n";
}

std::string out_path(const Options& o, const std::string& name) {
  fs::create_directories(o.out);
  return (fs::path(o.out) / name).string();
}

hkt::SolverConfig load_solver_config(const std::string& path) {
  return hkt::SolverConfig::from_config(hkt::Config::load(path));
}

int run_verify(const Options& o) {
  const auto cfg = hkt::Config::load(o.config);
  cfg.require_only({"n", "k", "count", "seed", "scale"});
  const auto ns = cfg.get_ints("n", std::vector<long>{1, 2, 3, 4, 5});
  const std::string k_list = cfg.get_string("k", std::string("all"));
  hkt::SampleSpec base;
  base.count = static_cast<int>(cfg.get_int("count", 10000));
  base.seed = o.seed ? *o.seed : static_cast<std::uint64_t>(cfg.get_int("seed", static_cast<long>(base.seed)));
  base.scale = cfg.get_double("scale", base.scale);

  std::vector<hkt::SampleSpec> specs;
  for (long n : ns) {
    std::vector<long> ks;
    if (k_list == "all") {
      for (long k = 1; k <= n; ++k) ks.push_back(k);
    } else {
      for (const auto& item : hkt::split_list(k_list)) {
        const long k = hkt::parse_int(item, "k");
        if (k <= n) ks.push_back(k);
      }
    }
    for (long k : ks) {
      hkt::SampleSpec s = base;
      s.n = static_cast<int>(n);
      s.k = static_cast<int>(k);
      s.validate();
      specs.push_back(s);
    }
  }
  if (specs.empty()) throw UsageError("verify: no admissible (n, k) pairs");

  std::vector<hkt::VerificationReport> reports;
  long failures = 0;
  for (const auto& s : specs) {
    for (auto& r : hkt::verify_all(s)) {
      failures += r.failures;
      if (!o.quiet) {
        std::printf("%-28s n=%d k=%d samples=%-6ld failures=%ld min_slack=%.3e\n", r.proposition.c_str(), s.n, s.k,
                    r.samples, r.failures, r.min_slack);
      }
      reports.push_back(std::move(r));
    }
  }
  hkt::write_text(out_path(o, "verification.json"), hkt::verification_json(reports));
  note(o, failures == 0 ? "verify: all checks passed" : "verify: " + std::to_string(failures) + " failures");
  return failures == 0 ? kOk : kMathFailure;
}

int run_solve(const Options& o) {
  const auto cfg = load_solver_config(o.config);
  cfg.validate();
  const auto prob = cfg.build();
  const std::string summary = out_path(o, "summary.json");
  const auto write_state = [&](const hkt::SolveResult& r, const std::string& status) {
    if (!r.u.values.empty()) {
      hkt::write_field(out_path(o, "u.bin"), r.u);
      hkt::write_field_csv(out_path(o, "u.csv"), r.u);
    }
    hkt::write_text(summary, hkt::solve_summary_json(cfg, r, status));
  };
  try {
    const auto r = hkt::solve(prob, cfg.options);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    write_state(r, "converged");
    if (!o.quiet) {
      std::printf("solve: converged in %d iterations, residual %.3e, b = %.17g\n", r.iterations,
                  r.residual_history.back(), r.b);
    }
    return kOk;
  } catch (const hkt::SolverError& e) {
    std::cerr << "solve failed: " << e.what() << "\n";
    if (const auto* partial = e.partial()) {
      for (const auto& w : partial->warnings) std::cerr << "warning: " << w << "\n";
      write_state(*partial, e.what());
    } else {
      write_state(hkt::SolveResult{}, e.what());
    }
    return kMathFailure;
  } catch (const hkt::ConeViolation& e) {
    std::cerr << "solve failed: " << e.what() << "\n";
    write_state(hkt::SolveResult{}, e.what());
    return kMathFailure;
  }
}

int run_cone_check(const Options& o) {
  const auto cfg = load_solver_config(o.config);
  cfg.validate();
  const auto prob = cfg.build();
  const double b = 0.0 - prob.F.mean();
  const auto inside = hkt::in_gamma_k_field(prob.omega0, prob.k);
  hkt::ConeConditionReport cone;
  hkt::EpsilonMeasure eps;
  if (inside.inside) {
    cone = hkt::check_cone_condition(prob.omega0, prob.F, prob.k, prob.l, b);
    eps = hkt::measure_epsilon(prob.omega0, prob.k);
  } else {
    cone.holds = false;
  }
  hkt::write_text(out_path(o, "cone_check.json"), hkt::cone_check_json(cfg, b, cone, inside, eps));
  if (!inside.inside) {
    std::cerr << "cone-check: omega0 is not in Gamma_" << prob.k << "\n";
  } else if (!o.quiet) {
    std::printf("cone-check: %s (min margin %.6e, delta %.6e)\n", cone.holds ? "holds" : "fails", cone.min_margin,
                cone.delta);
  }
  return inside.inside && cone.holds ? kOk : kMathFailure;
}

int run_probe(const Options& o) {
  const auto cfg = hkt::Config::load(o.config);
  cfg.require_only({"result", "p", "id"});
  fs::path result = cfg.get_string("result");
  if (result.is_relative()) result = fs::path(o.config).parent_path() / result;
  const auto ps = cfg.get_doubles("p", std::vector<double>{4, 8, 16, 32, 64});
  for (double p : ps) {
    if (!(p > 0)) throw UsageError("probe: p values must be positive");
  }

  std::ifstream in(result / "summary.json");
  if (!in) throw UsageError("probe: cannot open " + (result / "summary.json").string());
  nlohmann::json summary;
  try {
    in >> summary;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("probe: malformed summary.json: ") + e.what());
  }
  if (!summary.contains("config") || !summary["config"].is_object() || !summary.contains("b") ||
      !summary["b"].is_number()) {
    throw UsageError("probe: summary.json lacks config or b");
  }
  hkt::Config solved;
  for (const auto& [key, value] : summary["config"].items()) solved.set(key, value.get<std::string>());
  const auto scfg = hkt::SolverConfig::from_config(solved);
  scfg.validate();
  const auto prob = scfg.build();
  const auto u = hkt::read_field((result / "u.bin").string());
  if (!(u.grid == prob.grid)) throw UsageError("probe: u.bin grid does not match the solve configuration");
  const double b = summary["b"].get<double>();
  const std::string id = cfg.get_string("id", result.filename().string());

  const auto report = hkt::probe(prob, u, b, ps, id);
  hkt::write_text(out_path(o, "probe.json"), hkt::probe_json(report));
  hkt::write_text(out_path(o, "cherrier.csv"), hkt::cherrier_csv(report));
  if (!o.quiet) {
    for (const auto& m : report.lemma.margins) {
      std::printf("%-16s min margin %.6e  failures %ld\n", m.name.c_str(), m.min_margin, m.failures);
    }
    for (const auto& c : report.cherrier) std::printf("p=%-6g C(p)=%.6e\n", c.p, c.ratio);
    std::printf("cherrier growth %.3f (%s)\n", report.cherrier_growth,
                report.cherrier_bounded ? "bounded" : "not within 2x");
  }
  if (!report.cherrier_bounded) std::cerr << "warning: Cherrier ratio grows beyond 2x of its first value\n";
  return report.mandatory_passed() ? kOk : kMathFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hessian quotient equations on the flat quaternionic torus"};
  app.require_subcommand(1);
  Options o;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--seed", o.seed, "Seed override");
    sub->add_flag("--quiet", o.quiet, "Only errors and warnings");
  };
  auto* verify = app.add_subcommand("verify", "Randomized inequality oracle");
  auto* solve = app.add_subcommand("solve", "Damped Newton solve");
  auto* cone = app.add_subcommand("cone-check", "Cone condition of the initial data");
  auto* probe = app.add_subcommand("probe", "Estimate-chain probe on a solved state");
  for (auto* sub : {verify, solve, cone, probe}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (verify->parsed()) return run_verify(o);
    if (solve->parsed()) return run_solve(o);
    if (cone->parsed()) return run_cone_check(o);
    return run_probe(o);
  } catch (const hkt::ConeViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMathFailure;
  } catch (const hkt::SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMathFailure;
  } catch (const hkt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const hkt::ParseError& e) {
    std::cerr << "expression error: " << e.what() << "\n";
    return kUsageError;
  } catch (const hkt::FieldFormatError& e) {
    std::cerr << "field error: " << e.what() << "\n";
    return kUsageError;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsageError;
  } catch (const hkt::EigenError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMathFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
}
