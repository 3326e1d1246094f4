#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "hkt/hyperhermitian.hpp"
#include "hkt/symfun.hpp"

namespace hkt {

struct SampleSpec {
  int n = 3;
  int k = 2;
  int count = 1000;
  std::uint64_t seed = 0x5eed;
  double scale = 1.5;  // radius of the sampling ball around (1, ..., 1)

  void validate() const;
};

// Normalized slack of "lhs >= rhs": (lhs - rhs) / (|lhs| + |rhs| + 1).
double normalized_slack(double lhs, double rhs);
// A (strict or weak) inequality lhs >= rhs passes at this normalized slack.
inline constexpr double kStrictnessMargin = 1e-10;

struct VerificationReport {
  std::string proposition;
  SampleSpec spec;
  long samples = 0;
  long checks = 0;
  long failures = 0;
  double worst_margin = std::numeric_limits<double>::infinity();  // min raw lhs - rhs
  double min_slack = std::numeric_limits<double>::infinity();     // min normalized slack

  // Records one check of lhs >= rhs (or lhs > rhs).
  void record(double lhs, double rhs);
  void merge(const VerificationReport& other);
  bool passed() const { return failures == 0; }
};

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Rng = std::mt19937_64;

Quaternion random_quaternion(Rng& rng);
// Haar-like random C with C* C = Id (Gram-Schmidt of Gaussian columns).
QuatMatrix random_unitary(int n, Rng& rng);
// Entries uniform in [-amplitude, amplitude], hyperhermitian by construction.
HyperhermitianMatrix random_hyperhermitian(int n, Rng& rng, double amplitude = 1.0);

// Rejection sampling from the ball of radius spec.scale around (1, ..., 1).
std::vector<EigenTuple> sample_gamma_k(const SampleSpec& spec);

struct HyperhermitianSample {
  HyperhermitianMatrix matrix;
  EigenTuple eigenvalues;  // the seeded diagonal
};
// U diag(lambda) U* for lambda from sample_gamma_k and random unitary U.
std::vector<HyperhermitianSample> sample_hyperhermitian_gamma_k(const SampleSpec& spec);

// lambda - s (1, ..., 1) with s a fraction `depth` of the way to the boundary of Gamma_k.
std::vector<double> push_toward_boundary(std::span<const double> lambda, int k, double depth);

// Tuple-level propositions.
VerificationReport verify_identities(const SampleSpec& spec);
VerificationReport verify_newton_maclaurin(const SampleSpec& spec);
VerificationReport verify_monotonicity(const SampleSpec& spec);
VerificationReport verify_concavity(const SampleSpec& spec);
VerificationReport verify_garding(const SampleSpec& spec);
VerificationReport verify_minor_quotient_tuple(const SampleSpec& spec);

// Matrix-level propositions.
VerificationReport verify_deletion_cone(const SampleSpec& spec);
VerificationReport verify_minor_quotient(const SampleSpec& spec);
VerificationReport verify_matrix_concavity(const SampleSpec& spec);
VerificationReport verify_schur_pairing(const SampleSpec& spec);

// Every verification above for one spec, in a fixed order.
std::vector<VerificationReport> verify_all(const SampleSpec& spec);

}  // namespace hkt
