#include "hkt/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace hkt {

TorusGrid::TorusGrid(int n, std::vector<int> active_axes, int points_per_axis)
    : n_(n), axes_(std::move(active_axes)), N_(points_per_axis) {
  if (n < 1) throw std::invalid_argument("TorusGrid: n must be >= 1");
  if (N_ < 4 || N_ % 2 != 0) throw std::invalid_argument("TorusGrid: points per axis must be even and >= 4");
  if (axes_.size() > static_cast<size_t>(kMaxActiveAxes)) {
    throw std::invalid_argument("TorusGrid: at most " + std::to_string(kMaxActiveAxes) + " active axes");
  }
  std::sort(axes_.begin(), axes_.end());
  if (std::adjacent_find(axes_.begin(), axes_.end()) != axes_.end()) {
    throw std::invalid_argument("TorusGrid: repeated active axis");
  }
  for (int a : axes_) {
    if (a < 0 || a >= 4 * n) throw std::invalid_argument("TorusGrid: axis " + std::to_string(a) + " out of range");
  }
  size_ = 1;
  for (int s = active_count() - 1; s >= 0; --s) {
    stride_[static_cast<size_t>(s)] = size_;
    size_ *= N_;
  }
}

int TorusGrid::slot_of(int axis) const {
  const auto it = std::find(axes_.begin(), axes_.end(), axis);
  return it == axes_.end() ? -1 : static_cast<int>(it - axes_.begin());
}

int TorusGrid::index(long p, int slot) const {
  return static_cast<int>((p / stride_[static_cast<size_t>(slot)]) % N_);
}

long TorusGrid::shift(long p, int slot, int delta) const {
  const int i = index(p, slot);
  const int j = ((i + delta) % N_ + N_) % N_;
  return p + static_cast<long>(j - i) * stride_[static_cast<size_t>(slot)];
}

std::vector<double> TorusGrid::coordinates(long p) const {
  std::vector<double> x(static_cast<size_t>(real_dim()), 0.0);
  for (int s = 0; s < active_count(); ++s) x[static_cast<size_t>(axes_[static_cast<size_t>(s)])] = index(p, s) * spacing();
  return x;
}

double ScalarField::max() const { return *std::max_element(values.begin(), values.end()); }
double ScalarField::min() const { return *std::min_element(values.begin(), values.end()); }
long ScalarField::argmax() const { return std::max_element(values.begin(), values.end()) - values.begin(); }

double ScalarField::sup_norm() const {
  double s = 0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

double ScalarField::mean() const {
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace hkt
