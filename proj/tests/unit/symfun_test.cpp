#include <gtest/gtest.h>

#include <stdexcept>

#include <cmath>
#include <random>
#include <vector>

#include "hkt/symfun.hpp"

namespace hkt {
namespace {

// Subset enumeration, independent of the recurrence.
double sigma_brute(const std::vector<double>& lam, int k) {
  const int n = static_cast<int>(lam.size());
  if (k < 0 || k > n) return 0.0;
  double s = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    double prod = 1;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) prod *= lam[static_cast<size_t>(i)];
    }
    s += prod;
  }
  return s;
}

TEST(Symfun, SmallTuple) {
  const std::vector<double> lam{1, 2, 3};
  EXPECT_EQ(sigma(lam, 0), 1.0);
  EXPECT_EQ(sigma(lam, 1), 6.0);
  EXPECT_EQ(sigma(lam, 2), 11.0);
  EXPECT_EQ(sigma(lam, 3), 6.0);
  EXPECT_EQ(sigma(lam, -1), 0.0);
  EXPECT_THROW(sigma(lam, 4), std::out_of_range);
}

TEST(Symfun, MatchesSubsetEnumeration) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 7;
    std::vector<double> lam(static_cast<size_t>(n));
    for (auto& x : lam) x = u(rng);
    const auto all = sigma_all(lam);
    ASSERT_EQ(all.size(), static_cast<size_t>(n + 1));
    for (int k = 0; k <= n; ++k) {
      EXPECT_NEAR(all[static_cast<size_t>(k)], sigma_brute(lam, k), 1e-12 * (1 + sigma_scale(lam, k)));
    }
    for (int i = 0; i < n; ++i) {
      auto rest = lam;
      rest.erase(rest.begin() + i);
      for (int k = 0; k < n; ++k) {
        EXPECT_NEAR(sigma_excl(lam, k, i), sigma_brute(rest, k), 1e-12 * (1 + sigma_scale(lam, k)));
      }
    }
  }
}

TEST(Symfun, ExclusionEdges) {
  const std::vector<double> lam{2, 5};
  EXPECT_EQ(sigma_excl(lam, -1, 0), 0.0);
  EXPECT_EQ(sigma_excl(lam, 0, 1), 1.0);
  EXPECT_EQ(sigma_excl(lam, 1, 0), 5.0);
  EXPECT_EQ(sigma_excl(lam, 2, 0), 0.0);
}

TEST(Symfun, Binomial) {
  EXPECT_EQ(binomial(5, 0), 1.0);
  EXPECT_EQ(binomial(5, 2), 10.0);
  EXPECT_EQ(binomial(6, 3), 20.0);
  EXPECT_EQ(binomial(3, 4), 0.0);
}

TEST(Symfun, GardingCone) {
  const std::vector<double> lam{1, 1, -0.4};
  EXPECT_TRUE(in_gamma_k(lam, 1));
  EXPECT_TRUE(in_gamma_k(lam, 2));
  EXPECT_FALSE(in_gamma_k(lam, 3));
  EXPECT_NEAR(gamma_k_slack(lam, 2), 0.2, 1e-15);
  // Boundary is excluded.
  const std::vector<double> edge{1, -1};
  EXPECT_FALSE(in_gamma_k(edge, 1));
}

TEST(Symfun, QuotientOutsideConeThrows) {
  const std::vector<double> lam{1, 1, -0.4};
  EXPECT_THROW(quotient(lam, 3, 1), ConeViolation);
  EXPECT_NEAR(quotient(lam, 2, 1), 0.2 / 1.6, 1e-15);
  EXPECT_NEAR(quotient(lam, 2, 0), 0.2, 1e-15);
}

TEST(Symfun, QuotientRootOfIdentity) {
  const std::vector<double> ones{1, 1, 1, 1};
  // (C(4,3) / C(4,1))^(1/2) = 1
  EXPECT_NEAR(quotient_root(ones, 3, 1), 1.0, 1e-15);
  EXPECT_NEAR(quotient_root(ones, 2, 0), std::sqrt(6.0), 1e-14);
}

TEST(Symfun, GardingPairingEulerIdentity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.2, 2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> lam(4);
    for (auto& x : lam) x = u(rng);
    for (int k = 1; k <= 4; ++k) {
      EXPECT_NEAR(garding_pairing(lam, lam, k), k * sigma(lam, k), 1e-12 * sigma_scale(lam, k) * k);
    }
  }
}

TEST(Symfun, EigenTupleSorts) {
  const EigenTuple t{3.0, -1.0, 2.0};
  EXPECT_EQ(t[0], -1.0);
  EXPECT_EQ(t[2], 3.0);
}

}  // namespace
}  // namespace hkt
