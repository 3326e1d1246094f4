#include "hkt/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace hkt {

namespace {

constexpr char kMagic[4] = {'H', 'Q', 'F', '1'};

template <class T>
void put(std::ofstream& out, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get(std::ifstream& in, const std::string& path) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw FieldFormatError(path + ": truncated field file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T v;
  std::memcpy(&v, bytes, sizeof(T));
  return v;
}

}  // namespace

void write_field(const std::string& path, const ScalarField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write(kMagic, 4);
  const TorusGrid& g = f.grid;
  put<std::int32_t>(out, g.n());
  put<std::int32_t>(out, g.points_per_axis());
  put<std::int32_t>(out, g.active_count());
  for (int a : g.active_axes()) put<std::int32_t>(out, a);
  put<std::uint64_t>(out, static_cast<std::uint64_t>(g.size()));
  for (double v : f.values) put<double>(out, v);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

ScalarField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FieldFormatError("cannot open field file '" + path + "'");
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw FieldFormatError(path + ": bad magic");
  const int n = get<std::int32_t>(in, path);
  const int N = get<std::int32_t>(in, path);
  const int d = get<std::int32_t>(in, path);
  if (d < 0 || d > TorusGrid::kMaxActiveAxes) throw FieldFormatError(path + ": bad axis count");
  std::vector<int> axes(static_cast<size_t>(d));
  for (auto& a : axes) a = get<std::int32_t>(in, path);
  TorusGrid grid;
  try {
    grid = TorusGrid(n, axes, N);
  } catch (const std::invalid_argument& e) {
    throw FieldFormatError(path + ": " + e.what());
  }
  if (grid.active_axes() != axes) throw FieldFormatError(path + ": axes not ascending");
  const auto count = get<std::uint64_t>(in, path);
  if (count != static_cast<std::uint64_t>(grid.size())) throw FieldFormatError(path + ": point count mismatch");
  ScalarField f(grid);
  for (auto& v : f.values) {
    v = get<double>(in, path);
    if (!std::isfinite(v)) throw FieldFormatError(path + ": non-finite value");
  }
  if (in.peek() != std::char_traits<char>::eof()) throw FieldFormatError(path + ": trailing bytes");
  return f;
}

void write_field_csv(const std::string& path, const ScalarField& f) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  const TorusGrid& g = f.grid;
  for (int a : g.active_axes()) std::fprintf(out, "x%d,", a + 1);
  std::fprintf(out, "value\n");
  for (long p = 0; p < g.size(); ++p) {
    for (int s = 0; s < g.active_count(); ++s) std::fprintf(out, "%.17g,", g.index(p, s) * g.spacing());
    std::fprintf(out, "%.17g\n", f[p]);
  }
  std::fclose(out);
}

}  // namespace hkt
