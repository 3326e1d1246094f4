#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hkt/torus.hpp"

namespace hkt {

enum class DerivativeBackend { Spectral, Central };

const char* to_string(DerivativeBackend b);
DerivativeBackend backend_from_string(const std::string& s);

// Real partial derivatives along the active axes of a grid.
struct Derivatives {
  int slots = 0;
  std::vector<std::vector<double>> first;   // first[s]
  std::vector<std::vector<double>> second;  // packed upper triangle, see d2

  const std::vector<double>& d2(int s, int t) const;
};

namespace detail {
struct FourierPlan;
}

// Reusable differentiation context. The spectral backend keeps FFTW plans and
// work buffers, so one instance must not be shared between threads.
class Differentiator {
 public:
  Differentiator(const TorusGrid& grid, DerivativeBackend backend);
  ~Differentiator();
  Differentiator(const Differentiator&) = delete;
  Differentiator& operator=(const Differentiator&) = delete;

  const TorusGrid& grid() const { return grid_; }
  DerivativeBackend backend() const { return backend_; }

  Derivatives operator()(const std::vector<double>& f, bool with_second = true);

 private:
  TorusGrid grid_;
  DerivativeBackend backend_;
  std::unique_ptr<detail::FourierPlan> spectral_;
};

// Diagonal Fourier-space operator on real periodic fields. The symbol sees the
// signed wavenumber and a Nyquist flag per active slot and must be even in k.
class FourierMultiplier {
 public:
  using Symbol = std::function<double(std::span<const int> k, std::span<const char> nyquist)>;

  FourierMultiplier(const TorusGrid& grid, const Symbol& symbol);
  ~FourierMultiplier();
  FourierMultiplier(const FourierMultiplier&) = delete;
  FourierMultiplier& operator=(const FourierMultiplier&) = delete;

  std::vector<double> operator()(const std::vector<double>& f);

 private:
  std::unique_ptr<detail::FourierPlan> plan_;
  std::vector<double> symbol_;
};

}  // namespace hkt
