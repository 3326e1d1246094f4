#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hkt/flat_model.hpp"

namespace hkt {

struct SolverProblem;

// Quadrature nodes for every t-integral below (composite Simpson).
inline constexpr int kSimpsonNodes = 33;

// Relative slack (rhs - lhs) / max(|lhs|, |rhs|); 0 when both vanish.
double relative_slack(double lhs, double rhs);

// Integrals of e^{-p u} are evaluated with u shifted by min(u). The physical
// values are E * exp(log_shift) and M * exp(log_shift); the ratio is exact.
struct CherrierValue {
  double p = 0;
  double energy = 0;     // int |d e^{-p w/2}|^2 with |df|^2 = |grad f|^2 / 2, w = u - min u
  double mass = 0;       // int e^{-p w}
  double ratio = 0;      // energy / (p mass)
  double log_shift = 0;  // -p min(u)
  // p int e^{-pu} du ^ d_J u ^ Omega^{n-1} / int e^{-pu} Omega^n. With or
  // without the t-integral over [0, 1] the value is the same.
  double displayed = 0;
};
CherrierValue cherrier_ratio(const ScalarField& u, double p,
                             DerivativeBackend backend = DerivativeBackend::Spectral);
CherrierValue cherrier_ratio(const ScalarField& u, const GradientField& g, double p);

// Largest eps with omega0 - eps Id and Id - eps omega0 in Gamma_k at every
// point, by bisection. The working value is fraction * sup.
struct EpsilonMeasure {
  double sup = 0;
  double value = 0;
};
EpsilonMeasure measure_epsilon(const FormField& omega0, int k, double fraction = 0.9);

struct SlackRecord {
  int i = 0;
  double lhs = 0;
  double rhs = 0;
  double slack = 0;  // relative_slack(lhs, rhs)
};

// Homotopy-integral inequalities for 1 <= i < k, with the eps^{k-i} power the
// iterated one-step bound produces:
//   pointwise:  eps^{k-i} int_0^a W_i(t) dt <= (k/i) int_0^a W_k(t) dt,
//               W_i(t) = sigma_{i-1}(Omega_tu) / C(n, i-1)   (worst point reported)
//   weighted:   eps^{k-i} int_0^{1/2} int e^{-pu} GP_i(Omega_tu)
//                 <= (k/i) int_0^{1/2} int e^{-pu} GP_k(Omega_tu)
// GP_i is gradient_pairing. `displayed` repeats the pointwise form with a
// single power of eps, the stronger of the two when eps < 1.
struct HomotopyReport {
  double p = 0, a = 0, epsilon = 0;
  std::vector<SlackRecord> pointwise;
  std::vector<SlackRecord> displayed;
  std::vector<SlackRecord> weighted;
  double min_slack() const;  // over all three lists
};

// int_0^{1/2} int e^{-pu} W_k(t) <= C p int_0^{1/2} int e^{-pu} GP_k(Omega_tu) + C int e^{-pu}.
// c_min is the smallest C for which it holds, c_ref = max(k / (2 eps), max W_k(0) / 2)
// the constant the integration-by-parts argument gives; slack uses c_ref.
// The identity fields compare lhs with
//   1/2 int e^{-pu} W_k(0) + p (k-1) int_0^{1/2} (1/2 - s) int e^{-pu} GP_{k-1}(Omega_su) ds.
// All integrals carry the common factor exp(-p min u).
struct WeightedEnergyReport {
  double p = 0;
  double lhs = 0;
  double gradient_term = 0;  // p int_0^{1/2} int e^{-pu} GP_k
  double mass = 0;           // int e^{-pu}
  double c_min = 0;
  double c_ref = 0;
  double slack = 0;
  double identity_rhs = 0;
  double identity_defect = 0;  // relative
};

// Evaluates the homotopy and weighted-energy checks for every p in one pass
// over the t-nodes.
struct IntegralChecks {
  std::vector<HomotopyReport> homotopy;
  std::vector<WeightedEnergyReport> energy;
};
IntegralChecks integral_checks(const ScalarField& u, const FormField& omega0, int k, std::span<const double> ps,
                               double a, double epsilon,
                               DerivativeBackend backend = DerivativeBackend::Spectral);

HomotopyReport homotopy_integral_check(const ScalarField& u, const FormField& omega0, int k, double p, double a,
                                       double epsilon, DerivativeBackend backend = DerivativeBackend::Spectral);
WeightedEnergyReport weighted_energy_check(const ScalarField& u, const FormField& omega0, int k, double p,
                                           double epsilon,
                                           DerivativeBackend backend = DerivativeBackend::Spectral);

// Worst margin of one pointwise inequality over points, t, indices and frames.
struct LemmaMargin {
  std::string name;
  double min_margin = std::numeric_limits<double>::infinity();
  double worst_t = 0;
  long worst_point = -1;
  long checks = 0;
  long failures = 0;  // margin <= 0
};

// Pointwise inequalities along Omega_tu, t in {0, 0.1, ..., 1}, with every
// deletion taken both in the coordinate frame and in the eigenframe of Omega_tu:
//   tu-minor-lower  sigma_{i-1}(Omega_tu|j) >= (1-t)^{i-1} eps^{i-1} C(n-1, i-1),  2 <= i <= k
//   tu-scaling      t^i sigma_i(Omega_u) <= sigma_i(Omega_tu),  0 < t < 1, 1 <= i <= k
//   tu-cone         sigma_{k-1}(Omega_tu|j) - Ft sigma_{l-1}(Omega_tu|j) > d(z) (1-t) sigma_{l-1}(Omega_tu|j)
//   tu-cone-lower   sigma_{k-1}(Omega_tu|j) - Ft sigma_{l-1}(Omega_tu|j)
//                     > d(z) (1-t)^l eps^{l-1} C(n-1, l-1)
// with Ft = kappa exp(F + b) and d(z) = m Ft^{(m-1)/m} ((Ft + delta)^{1/m} - Ft^{1/m}),
// m = k - l, which is delta when m = 1. delta is delta_fraction times the
// measured cone-condition gap, so the t = 0 margins stay strict. The excluded
// cases (i = 1, t = 1 for the scaling) are identities.
struct LemmaSweepReport {
  double epsilon = 0;
  double delta_sup = 0;  // ConeConditionReport::delta
  double delta = 0;
  double delta_effective = 0;  // min over points of d(z)
  double best_constant = std::numeric_limits<double>::infinity();
  std::vector<LemmaMargin> margins;
  bool passed() const;
};
LemmaSweepReport pointwise_lemma_sweep(const ScalarField& u, const FormField& omega0, const ScalarField& F, int k,
                                       int l, double b, double epsilon,
                                       DerivativeBackend backend = DerivativeBackend::Spectral,
                                       double delta_fraction = 0.9);

struct ProbeReport {
  std::string problem_id;
  int n = 0, k = 0, l = 0;
  double b = 0;
  EpsilonMeasure epsilon;
  double delta = 0;  // measured cone-condition gap
  bool cone_condition = false;
  std::vector<CherrierValue> cherrier;
  // max over p of ratio(p) / ratio(p_0); bounded means <= 2.
  double cherrier_growth = 0;
  bool cherrier_bounded = false;
  IntegralChecks integrals;
  LemmaSweepReport lemma;

  // Inequalities the estimate chain guarantees: lemma margins, homotopy and
  // weighted-energy slacks >= -1e-6. Cherrier boundedness is reported separately.
  bool mandatory_passed() const;
};

inline constexpr double kQuadratureTolerance = 1e-6;

ProbeReport probe(const SolverProblem& prob, const ScalarField& u, double b, std::span<const double> ps,
                  const std::string& problem_id = "");

}  // namespace hkt
