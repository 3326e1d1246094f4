#include <gtest/gtest.h>

#include "hkt/oracle.hpp"

namespace hkt {
namespace {

TEST(Oracle, NormalizedSlack) {
  EXPECT_EQ(normalized_slack(2, 1), 0.25);
  EXPECT_LT(normalized_slack(1, 2), 0);
}

TEST(Oracle, ReportRecordsWorstCase) {
  VerificationReport r;
  r.record(2, 1);
  r.record(1, 1 + 1e-12);  // inside the margin
  EXPECT_TRUE(r.passed());
  r.record(1, 1.1);
  EXPECT_EQ(r.failures, 1);
  EXPECT_EQ(r.checks, 3);
  EXPECT_NEAR(r.worst_margin, -0.1, 1e-15);
}

TEST(Oracle, SampleSpecValidation) {
  SampleSpec s;
  s.count = 0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = SampleSpec{};
  s.k = 4;
  s.n = 3;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = SampleSpec{};
  s.scale = -1;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Oracle, SamplesLieInCone) {
  SampleSpec s{4, 2, 300};
  for (const auto& lam : sample_gamma_k(s)) EXPECT_TRUE(in_gamma_k(lam, 2));
  for (const auto& h : sample_hyperhermitian_gamma_k(s)) {
    const auto lam = eigenvalues(h.matrix);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(lam[i], h.eigenvalues[i], 1e-10);
  }
}

TEST(Oracle, BoundaryPushStaysInside) {
  SampleSpec s{3, 3, 100};
  for (const auto& lam : sample_gamma_k(s)) {
    const auto pushed = push_toward_boundary(lam, 3, 0.999);
    EXPECT_TRUE(in_gamma_k(pushed, 3));
    EXPECT_LT(sigma(pushed, 3), sigma(lam, 3));
  }
  const std::vector<double> outside{1, -2};
  EXPECT_THROW(push_toward_boundary(outside, 1, 0.5), ConeViolation);
}

TEST(Oracle, Deterministic) {
  SampleSpec s{3, 2, 200, 42};
  const auto a = verify_all(s);
  const auto b = verify_all(s);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].proposition, b[i].proposition);
    EXPECT_EQ(a[i].checks, b[i].checks);
    EXPECT_EQ(a[i].min_slack, b[i].min_slack);
  }
}

class OracleSweep : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(OracleSweep, NoFailures) {
  const auto [n, k] = GetParam();
  SampleSpec s{n, k, 500};
  for (const auto& r : verify_all(s)) {
    EXPECT_TRUE(r.passed()) << r.proposition << " n=" << n << " k=" << k << " min slack " << r.min_slack;
  }
}

INSTANTIATE_TEST_SUITE_P(Small, OracleSweep,
                         ::testing::Values(std::pair{1, 1}, std::pair{2, 1}, std::pair{2, 2}, std::pair{3, 2},
                                           std::pair{3, 3}, std::pair{4, 2}, std::pair{4, 4}, std::pair{5, 3}));

}  // namespace
}  // namespace hkt
