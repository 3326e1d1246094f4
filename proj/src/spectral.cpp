#include "hkt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <fftw3.h>

namespace hkt {

namespace {

size_t packed(int s, int t, int d) {
  if (s > t) std::swap(s, t);
  return static_cast<size_t>(s * d - s * (s - 1) / 2 + (t - s));
}

}  // namespace

const char* to_string(DerivativeBackend b) { return b == DerivativeBackend::Spectral ? "spectral" : "central"; }

DerivativeBackend backend_from_string(const std::string& s) {
  if (s == "spectral") return DerivativeBackend::Spectral;
  if (s == "central") return DerivativeBackend::Central;
  throw std::invalid_argument("unknown derivative backend '" + s + "'");
}

const std::vector<double>& Derivatives::d2(int s, int t) const { return second[packed(s, t, slots)]; }

struct detail::FourierPlan {
  int d = 0;
  long real_size = 0;
  long complex_size = 0;
  double* real = nullptr;
  fftw_complex* coeffs = nullptr;
  fftw_complex* work = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::vector<std::vector<int>> wavenumber;  // per slot, per complex index
  std::vector<std::vector<char>> nyquist;

  explicit FourierPlan(const TorusGrid& g) : d(g.active_count()), real_size(g.size()) {
    const int N = g.points_per_axis();
    complex_size = real_size / N * (N / 2 + 1);
    real = fftw_alloc_real(static_cast<size_t>(real_size));
    coeffs = fftw_alloc_complex(static_cast<size_t>(complex_size));
    work = fftw_alloc_complex(static_cast<size_t>(complex_size));
    std::vector<int> dims(static_cast<size_t>(d), N);
    forward = fftw_plan_dft_r2c(d, dims.data(), real, coeffs, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r(d, dims.data(), work, real, FFTW_ESTIMATE);
    if (!forward || !backward) throw std::runtime_error("FFTW plan creation failed");

    wavenumber.assign(static_cast<size_t>(d), std::vector<int>(static_cast<size_t>(complex_size)));
    nyquist.assign(static_cast<size_t>(d), std::vector<char>(static_cast<size_t>(complex_size)));
    for (long c = 0; c < complex_size; ++c) {
      long rest = c;
      for (int s = d - 1; s >= 0; --s) {
        const int len = (s == d - 1) ? N / 2 + 1 : N;
        const int i = static_cast<int>(rest % len);
        rest /= len;
        wavenumber[static_cast<size_t>(s)][static_cast<size_t>(c)] = i <= N / 2 ? i : i - N;
        nyquist[static_cast<size_t>(s)][static_cast<size_t>(c)] = (i == N / 2);
      }
    }
  }

  ~FourierPlan() {
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(coeffs);
    fftw_free(work);
  }

  void transform(const std::vector<double>& f) {
    std::copy(f.begin(), f.end(), real);
    fftw_execute(forward);
  }

  // Inverse transform of coeffs * factor(c) into out.
  template <class Factor>
  void apply(Factor&& factor, std::vector<double>& out) {
    for (long c = 0; c < complex_size; ++c) {
      const std::complex<double> z(coeffs[c][0], coeffs[c][1]);
      const std::complex<double> w = z * factor(c);
      work[c][0] = w.real();
      work[c][1] = w.imag();
    }
    fftw_execute(backward);
    out.resize(static_cast<size_t>(real_size));
    const double scale = 1.0 / static_cast<double>(real_size);
    for (long p = 0; p < real_size; ++p) out[static_cast<size_t>(p)] = real[p] * scale;
  }
};

Differentiator::Differentiator(const TorusGrid& grid, DerivativeBackend backend)
    : grid_(grid), backend_(backend) {
  if (backend_ == DerivativeBackend::Spectral && grid_.active_count() > 0) {
    spectral_ = std::make_unique<detail::FourierPlan>(grid_);
  }
}

Differentiator::~Differentiator() = default;

Derivatives Differentiator::operator()(const std::vector<double>& f, bool with_second) {
  const int d = grid_.active_count();
  const long P = grid_.size();
  if (static_cast<long>(f.size()) != P) throw std::invalid_argument("Differentiator: field size does not match grid");
  Derivatives out;
  out.slots = d;
  out.first.resize(static_cast<size_t>(d));
  if (with_second) out.second.resize(static_cast<size_t>(d * (d + 1) / 2));
  if (d == 0) return out;

  if (backend_ == DerivativeBackend::Spectral) {
    auto& sp = *spectral_;
    sp.transform(f);
    const double two_pi = 2.0 * std::numbers::pi;
    for (int s = 0; s < d; ++s) {
      const auto& ks = sp.wavenumber[static_cast<size_t>(s)];
      const auto& ns = sp.nyquist[static_cast<size_t>(s)];
      sp.apply(
          [&](long c) {
            return ns[static_cast<size_t>(c)] ? std::complex<double>(0.0)
                                              : std::complex<double>(0.0, two_pi * ks[static_cast<size_t>(c)]);
          },
          out.first[static_cast<size_t>(s)]);
      if (!with_second) continue;
      for (int t = s; t < d; ++t) {
        const auto& kt = sp.wavenumber[static_cast<size_t>(t)];
        const auto& nt = sp.nyquist[static_cast<size_t>(t)];
        sp.apply(
            [&](long c) {
              const auto i = static_cast<size_t>(c);
              // The Nyquist mode survives only in pure second derivatives.
              if (s != t && (ns[i] || nt[i])) return std::complex<double>(0.0);
              return std::complex<double>(-two_pi * two_pi * ks[i] * kt[i], 0.0);
            },
            out.second[packed(s, t, d)]);
      }
    }
    return out;
  }

  const double h = grid_.spacing();
  for (int s = 0; s < d; ++s) {
    auto& fs = out.first[static_cast<size_t>(s)];
    fs.resize(static_cast<size_t>(P));
    for (long p = 0; p < P; ++p) {
      fs[static_cast<size_t>(p)] =
          (f[static_cast<size_t>(grid_.shift(p, s, 1))] - f[static_cast<size_t>(grid_.shift(p, s, -1))]) / (2 * h);
    }
    if (!with_second) continue;
    for (int t = s; t < d; ++t) {
      auto& fst = out.second[packed(s, t, d)];
      fst.resize(static_cast<size_t>(P));
      for (long p = 0; p < P; ++p) {
        double v;
        if (s == t) {
          v = (f[static_cast<size_t>(grid_.shift(p, s, 1))] - 2 * f[static_cast<size_t>(p)] +
               f[static_cast<size_t>(grid_.shift(p, s, -1))]) /
              (h * h);
        } else {
          const long pp = grid_.shift(grid_.shift(p, s, 1), t, 1);
          const long pm = grid_.shift(grid_.shift(p, s, 1), t, -1);
          const long mp = grid_.shift(grid_.shift(p, s, -1), t, 1);
          const long mm = grid_.shift(grid_.shift(p, s, -1), t, -1);
          v = (f[static_cast<size_t>(pp)] - f[static_cast<size_t>(pm)] - f[static_cast<size_t>(mp)] +
               f[static_cast<size_t>(mm)]) /
              (4 * h * h);
        }
        fst[static_cast<size_t>(p)] = v;
      }
    }
  }
  return out;
}

FourierMultiplier::FourierMultiplier(const TorusGrid& grid, const Symbol& symbol) {
  if (grid.active_count() == 0) throw std::invalid_argument("FourierMultiplier: grid has no active axes");
  plan_ = std::make_unique<detail::FourierPlan>(grid);
  const int d = grid.active_count();
  symbol_.resize(static_cast<size_t>(plan_->complex_size));
  std::vector<int> k(static_cast<size_t>(d));
  std::vector<char> nyq(static_cast<size_t>(d));
  for (long c = 0; c < plan_->complex_size; ++c) {
    for (int s = 0; s < d; ++s) {
      k[static_cast<size_t>(s)] = plan_->wavenumber[static_cast<size_t>(s)][static_cast<size_t>(c)];
      nyq[static_cast<size_t>(s)] = plan_->nyquist[static_cast<size_t>(s)][static_cast<size_t>(c)];
    }
    symbol_[static_cast<size_t>(c)] = symbol(k, nyq);
  }
}

FourierMultiplier::~FourierMultiplier() = default;

std::vector<double> FourierMultiplier::operator()(const std::vector<double>& f) {
  if (static_cast<long>(f.size()) != plan_->real_size) throw std::invalid_argument("FourierMultiplier: size mismatch");
  plan_->transform(f);
  std::vector<double> out;
  plan_->apply([&](long c) { return std::complex<double>(symbol_[static_cast<size_t>(c)], 0.0); }, out);
  return out;
}

}  // namespace hkt
