#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hkt/flat_model.hpp"
#include "hkt/oracle.hpp"

namespace hkt {
namespace {

constexpr double kPi = std::numbers::pi;

double form_distance(const HyperhermitianMatrix& a, const HyperhermitianMatrix& b) { return (a - b).norm(); }

TEST(Hessian, QuadraticPatchGivesFourEaa) {
  // u = |q_a|^2 has real Hessian 2 on the four axes of q_a.
  for (int n = 1; n <= 3; ++n) {
    for (int a = 0; a < n; ++a) {
      Eigen::MatrixXd d = Eigen::MatrixXd::Zero(4 * n, 4 * n);
      for (int m = 0; m < 4; ++m) d(4 * a + m, 4 * a + m) = 2.0;
      const auto h = hessian_from_real(d);
      HyperhermitianMatrix want(n);
      want.set_diagonal(a, 4.0);
      EXPECT_EQ(form_distance(h, want), 0.0);
    }
  }
}

TEST(Hessian, TraceIsHalfLaplacian) {
  Rng rng(23);
  std::normal_distribution<double> g;
  Eigen::MatrixXd d(8, 8);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j <= i; ++j) d(i, j) = d(j, i) = g(rng);
  }
  EXPECT_NEAR(sigma_k_matrix(hessian_from_real(d), 1), 0.5 * d.trace(), 1e-12);
}

TEST(Hessian, PeriodicCosinePatchSpectral) {
  // sum_m (1 - cos 2 pi x_{4+m}) / (2 pi^2) has real Hessian 2 Id on q_1 at the origin.
  const TorusGrid g(2, {4, 5, 6, 7}, 16);
  const auto u = sample_field(g, [](const std::vector<double>& x) {
    double s = 0;
    for (int m = 0; m < 4; ++m) s += (1 - std::cos(2 * kPi * x[static_cast<size_t>(4 + m)])) / (2 * kPi * kPi);
    return s;
  });
  const auto h = quaternionic_hessian(u, DerivativeBackend::Spectral);
  HyperhermitianMatrix want(2);
  want.set_diagonal(1, 4.0);
  EXPECT_LT(form_distance(h[0], want), 1e-12);
}

TEST(Hessian, CentralConvergesAtSecondOrder) {
  const auto fn = [](const std::vector<double>& x) {
    return 0.1 * std::sin(2 * kPi * x[0]) * std::cos(2 * kPi * x[5]) + 0.05 * std::sin(2 * kPi * (x[0] + x[1]));
  };
  std::vector<double> err;
  for (int N : {8, 16, 32}) {
    const TorusGrid g(2, {0, 1, 5}, N);
    const auto u = sample_field(g, fn);
    const auto hs = quaternionic_hessian(u, DerivativeBackend::Spectral);
    const auto hc = quaternionic_hessian(u, DerivativeBackend::Central);
    double e = 0;
    for (long p = 0; p < g.size(); ++p) e = std::max(e, form_distance(hs[p], hc[p]));
    err.push_back(e);
  }
  EXPECT_NEAR(std::log2(err[0] / err[1]), 2.0, 0.1);
  EXPECT_NEAR(std::log2(err[1] / err[2]), 2.0, 0.1);
}

TEST(Gradient, PairingWithIdentityIsHalfGradientSquaredOverN) {
  const TorusGrid g(2, {0, 5}, 16);
  const auto u = sample_field(g, [](const std::vector<double>& x) {
    return 0.2 * std::sin(2 * kPi * x[0]) + 0.1 * std::cos(2 * kPi * x[5]);
  });
  const auto gp = gradient_pairing(u, FormField::identity(g), 1);
  for (long p = 0; p < g.size(); ++p) {
    const auto x = g.coordinates(p);
    const double ux = 0.4 * kPi * std::cos(2 * kPi * x[0]);
    const double uy = -0.2 * kPi * std::sin(2 * kPi * x[5]);
    EXPECT_NEAR(gp[p], (ux * ux + uy * uy) / 4.0, 1e-12);
  }
}

TEST(Gradient, PairingRequiresCone) {
  const TorusGrid g(1, {0}, 8);
  FormField w(g, HyperhermitianMatrix::identity(1));
  w[3] = -1.0 * HyperhermitianMatrix::identity(1);
  EXPECT_THROW(gradient_pairing(ScalarField(g), w, 1), ConeViolation);
}

TEST(Gradient, PairingIsFrameIndependent) {
  // The pairing of a constant gradient with W = U D U* equals the one computed in
  // the eigenframe directly: c * sum_l 1/2 |(U* g)_l|^2 sigma_{i-1}(D|l).
  Rng rng(29);
  const int n = 3;
  const auto uni = random_unitary(n, rng);
  const std::vector<double> d{0.5, 1.5, 2.5};
  const auto w = HyperhermitianMatrix::diagonal(d).congruence(uni.adjoint());
  std::vector<Quaternion> g{{1, 0.5, 0, 0}, {0, 0, -1, 0.25}, {0.3, 0, 0, 0.7}};
  for (int i = 1; i <= n; ++i) {
    double want = 0;
    for (int l = 0; l < n; ++l) {
      Quaternion c;
      for (int a = 0; a < n; ++a) c += uni(a, l).conj() * g[static_cast<size_t>(a)];
      want += 0.5 * c.norm2() * sigma_excl(d, i - 1, l);
    }
    want *= std::tgamma(i) * std::tgamma(n - i + 1) / std::tgamma(n + 1);
    EXPECT_NEAR(gradient_pairing_point(eigen_decompose(w), g, i), want, 1e-12);
  }
}

TEST(Cone, FieldAndCondition) {
  const TorusGrid g(2, {0}, 8);
  const auto omega0 = FormField::identity(g);
  const ScalarField F(g, 0.0);
  const auto r = check_cone_condition(omega0, F, 2, 1);
  // sigma_1(1|j) - 1/2 sigma_0(1|j) = 1/2
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.min_margin, 0.5, 1e-15);
  EXPECT_NEAR(r.delta, 0.5, 1e-15);
  const auto m = check_cone_condition(omega0, F, 2, 0);
  EXPECT_EQ(m.delta, std::numeric_limits<double>::infinity());

  const std::vector<double> d{0.1, 3};
  const FormField skew(g, HyperhermitianMatrix::diagonal(d));
  const auto bad = check_cone_condition(skew, F, 2, 1);
  // j = 1 leaves 0.1 - 1/2.
  EXPECT_FALSE(bad.holds);
  EXPECT_NEAR(bad.min_margin, -0.4, 1e-15);
  EXPECT_EQ(bad.worst_index, 1);

  const std::vector<double> out{-1, 0.5};
  const FormField outside(g, HyperhermitianMatrix::diagonal(out));
  EXPECT_FALSE(in_gamma_k_field(outside, 1).inside);
  EXPECT_THROW(check_cone_condition(outside, F, 1, 0), ConeViolation);
}

TEST(Frame, SimultaneousDiagonalization) {
  Rng rng(31);
  const auto w1 = sample_hyperhermitian_gamma_k({3, 3, 1, 77}).front().matrix;
  const auto w2 = random_hyperhermitian(3, rng);
  const auto f = simultaneous_diagonalize(w1, w2);
  EXPECT_LT(f.reconstruction_error, 1e-12);
  EXPECT_THROW(simultaneous_diagonalize(-1.0 * w1, w2), std::domain_error);
}

TEST(Wedge, IdentityRatiosAreOne) {
  const std::vector<double> ones{1, 1, 1, 1};
  for (int m = 0; m <= 4; ++m) EXPECT_NEAR(wedge_power_ratio(ones, m), 1.0, 1e-15);
  const std::vector<double> d{1, 2, 3};
  EXPECT_EQ(wedge_coeff_excl(d, 2, 0), 5.0);
  EXPECT_EQ(wedge_coeff_excl(HyperhermitianMatrix::diagonal(d), 3, 2), 2.0);
}

TEST(MixedBound, HoldsForRangeOfDelta) {
  const TorusGrid g(2, {0, 5}, 8);
  const auto u = sample_field(g, [](const std::vector<double>& x) {
    return 0.05 * std::sin(2 * kPi * x[0]) * std::cos(2 * kPi * x[5]);
  });
  Differentiator diff(g, DerivativeBackend::Spectral);
  const auto w = omega_u(FormField::identity(g), u, 1.0);
  const std::vector<Quaternion> alpha{{0.3, -1, 0, 0.2}, {0, 0.5, 2, 0}};
  for (int i = 1; i <= 2; ++i) {
    for (double delta : {0.1, 1.0, 10.0}) {
      const auto r = mixed_term_bound(gradient(u, diff), w, i, alpha, delta);
      EXPECT_EQ(r.failures, 0) << "i=" << i << " delta=" << delta;
      EXPECT_GT(r.max_lhs, 0.0);
    }
  }
}

TEST(Integrate, MeanOverTorus) {
  const TorusGrid g(1, {0, 1}, 8);
  const auto f = sample_field(g, [](const std::vector<double>& x) { return 2 + std::sin(2 * kPi * x[0]); });
  EXPECT_NEAR(integrate(f), 2.0, 1e-15);
}

}  // namespace
}  // namespace hkt
