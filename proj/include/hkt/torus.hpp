#pragma once

#include <array>
#include <vector>

#include "hkt/hyperhermitian.hpp"

namespace hkt {

// Period-1 torus H^n / Z^{4n} sampled on N points along each active real axis.
// Real axis r = 4 a + m is component m (1, i, j, k) of the quaternionic
// coordinate q_a. Inactive axes carry constant fields.
class TorusGrid {
 public:
  static constexpr int kMaxActiveAxes = 4;

  TorusGrid() = default;
  TorusGrid(int n, std::vector<int> active_axes, int points_per_axis);

  int n() const { return n_; }
  int real_dim() const { return 4 * n_; }
  const std::vector<int>& active_axes() const { return axes_; }
  int active_count() const { return static_cast<int>(axes_.size()); }
  int points_per_axis() const { return N_; }
  double spacing() const { return 1.0 / N_; }
  long size() const { return size_; }
  double cell_volume() const { return 1.0 / static_cast<double>(size_); }

  // Slot of real axis r among the active axes, or -1.
  int slot_of(int axis) const;
  // Grid index along active slot s of flat point index p (last slot fastest).
  int index(long p, int slot) const;
  // Flat index of p moved by `delta` cells along active slot s (periodic).
  long shift(long p, int slot, int delta) const;
  // All 4n real coordinates of point p, inactive ones 0.
  std::vector<double> coordinates(long p) const;

  bool operator==(const TorusGrid& o) const { return n_ == o.n_ && axes_ == o.axes_ && N_ == o.N_; }

 private:
  int n_ = 0;
  std::vector<int> axes_;
  int N_ = 0;
  long size_ = 0;
  std::array<long, kMaxActiveAxes> stride_{};
};

struct ScalarField {
  TorusGrid grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(TorusGrid g, double fill = 0.0)
      : grid(std::move(g)), values(static_cast<size_t>(grid.size()), fill) {}

  long size() const { return grid.size(); }
  double& operator[](long p) { return values[static_cast<size_t>(p)]; }
  double operator[](long p) const { return values[static_cast<size_t>(p)]; }

  double max() const;
  double min() const;
  long argmax() const;
  double sup_norm() const;
  double mean() const;
};

struct FormField {
  TorusGrid grid;
  std::vector<HyperhermitianMatrix> values;

  FormField() = default;
  FormField(TorusGrid g, const HyperhermitianMatrix& fill)
      : grid(std::move(g)), values(static_cast<size_t>(grid.size()), fill) {}

  static FormField identity(const TorusGrid& g) { return FormField(g, HyperhermitianMatrix::identity(g.n())); }

  long size() const { return grid.size(); }
  HyperhermitianMatrix& operator[](long p) { return values[static_cast<size_t>(p)]; }
  const HyperhermitianMatrix& operator[](long p) const { return values[static_cast<size_t>(p)]; }
};

// Per point, the n quaternions g_a = sum_m e_m du/dx_{4a+m}.
struct GradientField {
  TorusGrid grid;
  std::vector<Quaternion> values;  // point-major, n entries per point

  GradientField() = default;
  explicit GradientField(TorusGrid g)
      : grid(std::move(g)), values(static_cast<size_t>(grid.size()) * grid.n()) {}

  Quaternion& at(long p, int a) { return values[static_cast<size_t>(p) * grid.n() + a]; }
  const Quaternion& at(long p, int a) const { return values[static_cast<size_t>(p) * grid.n() + a]; }
};

// Samples f at every grid point; f receives the 4n real coordinates.
template <class Fn>
ScalarField sample_field(const TorusGrid& g, Fn&& f) {
  ScalarField s(g);
  for (long p = 0; p < g.size(); ++p) s[p] = f(g.coordinates(p));
  return s;
}

}  // namespace hkt
