#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hkt/hyperhermitian.hpp"
#include "hkt/oracle.hpp"

namespace hkt {
namespace {

TEST(Quaternion, Products) {
  const auto i = Quaternion::i(), j = Quaternion::j(), k = Quaternion::k();
  EXPECT_EQ(i * j, k);
  EXPECT_EQ(j * i, -k);
  EXPECT_EQ(i * i, Quaternion(-1.0));
  EXPECT_EQ(i * j * k, Quaternion(-1.0));
  const Quaternion q{1, 2, -3, 0.5};
  EXPECT_NEAR(distance(q * inverse(q), Quaternion(1.0)), 0.0, 1e-15);
  EXPECT_EQ(Quaternion::from_split(q.z1(), q.z2()), q);
}

TEST(Hyperhermitian, SetKeepsInvariant) {
  HyperhermitianMatrix a(2);
  a.set(0, 1, {1, 2, 3, 4});
  EXPECT_EQ(a(1, 0), Quaternion(1, -2, -3, -4));
  EXPECT_EQ(a.matrix().hyperhermitian_deviation(), 0.0);
}

TEST(Hyperhermitian, RejectsNonHyperhermitianInput) {
  QuatMatrix m(2);
  m(0, 1) = Quaternion{0, 1, 0, 0};
  m(1, 0) = Quaternion{0, 1, 0, 0};
  EXPECT_THROW(HyperhermitianMatrix{m}, std::invalid_argument);
  QuatMatrix diag(1);
  diag(0, 0) = Quaternion{1, 0, 0.5, 0};
  EXPECT_THROW(HyperhermitianMatrix{diag}, std::invalid_argument);
}

TEST(MooreDet, IdentityIsExactlyOne) {
  for (int n = 1; n <= 6; ++n) EXPECT_EQ(moore_det(HyperhermitianMatrix::identity(n)), 1.0);
}

TEST(MooreDet, TwoByTwoClosedForm) {
  // det [[a, q], [conj q, b]] = a b - |q|^2
  HyperhermitianMatrix m(2);
  m.set_diagonal(0, 3.0);
  m.set_diagonal(1, -2.0);
  const Quaternion q{0.5, -1.0, 2.0, 0.25};
  m.set(0, 1, q);
  EXPECT_NEAR(moore_det(m), -6.0 - q.norm2(), 1e-12);
}

TEST(MooreDet, FourthPowerIsRealizationDeterminant) {
  Rng rng(3);
  for (int n = 1; n <= 5; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = random_hyperhermitian(n, rng);
      const double p = moore_det(a);
      const double d = realize(a).determinant();
      EXPECT_NEAR(std::pow(p, 4), d, 1e-9 * std::max(1.0, std::abs(d)));
    }
  }
}

TEST(MooreDet, RealizationOfProductIsProduct) {
  Rng rng(5);
  const auto a = random_unitary(3, rng);
  const auto b = random_unitary(3, rng);
  EXPECT_LT((realize(a * b) - realize(a) * realize(b)).norm(), 1e-12);
}

TEST(Eigen, DecompositionDiagonalizes) {
  Rng rng(9);
  for (int n = 1; n <= 5; ++n) {
    const auto a = random_hyperhermitian(n, rng);
    const auto e = eigen_decompose(a);
    const auto d = a.congruence(e.vectors);
    const auto id = e.vectors.adjoint() * e.vectors;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Quaternion want = i == j ? Quaternion(e.values[i]) : Quaternion(0.0);
        EXPECT_NEAR(distance(d(i, j), want), 0.0, 1e-12);
        EXPECT_NEAR(distance(id(i, j), Quaternion(i == j ? 1.0 : 0.0)), 0.0, 1e-12);
      }
    }
    const auto v = eigenvalues(a, EigenRoute::Realization);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(v[i], e.values[i], 1e-10);
  }
}

TEST(Eigen, MooreDetIsEigenvalueProduct) {
  Rng rng(13);
  const auto a = random_hyperhermitian(4, rng);
  const auto lam = eigenvalues(a);
  double prod = 1;
  for (double x : lam.values()) prod *= x;
  EXPECT_NEAR(moore_det(a), prod, 1e-11);
}

TEST(SigmaK, ThreeRoutesAgree) {
  Rng rng(17);
  for (int n = 1; n <= 5; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto a = random_hyperhermitian(n, rng);
      const auto lam = eigenvalues(a);
      for (int k = 0; k <= n; ++k) {
        const double by_eig = sigma_k_matrix(a, k);
        const double tol = 1e-10 * (1 + sigma_scale(lam, k));
        EXPECT_NEAR(sigma_k_by_minors(a, k), by_eig, tol);
        EXPECT_NEAR(sigma_k_by_char_poly(a, k), by_eig, tol);
      }
    }
  }
}

TEST(SigmaK, PrincipalMinorEdges) {
  const auto a = HyperhermitianMatrix::identity(3);
  const std::vector<int> all{0, 1, 2};
  EXPECT_EQ(principal_minor_det(a, all), 1.0);
  const std::vector<int> bad{3};
  EXPECT_THROW(a.delete_indices(bad), std::out_of_range);
}

TEST(SigmaK, CharExpansion) {
  // sum_I t^|I| det(A with I removed) = det(A + t Id)
  Rng rng(19);
  const auto a = random_hyperhermitian(3, rng);
  const double t = 0.7;
  EXPECT_NEAR(char_expansion(a, t), moore_det(a + t * HyperhermitianMatrix::identity(3)), 1e-11);
}

}  // namespace
}  // namespace hkt
