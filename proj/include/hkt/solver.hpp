#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "hkt/config.hpp"
#include "hkt/flat_model.hpp"

namespace hkt {

struct SolveResult;

// Iteration failure. Carries the last accepted state when one exists.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what, std::shared_ptr<const SolveResult> partial = nullptr)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const SolveResult* partial() const { return partial_.get(); }

 private:
  std::shared_ptr<const SolveResult> partial_;
};

// Resolved problem data for sigma_k(Omega_u) = C(n,k)/C(n,l) exp(F + b) sigma_l(Omega_u)
// with Omega_u = Omega0 + quaternionic Hessian of u.
struct SolverProblem {
  int n = 1, k = 1, l = 0;
  TorusGrid grid;
  ScalarField F;
  FormField omega0;
  DerivativeBackend backend = DerivativeBackend::Spectral;

  double kappa() const { return binomial(n, k) / binomial(n, l); }
  void validate() const;
};

struct SolverOptions {
  double tolerance = 1e-9;       // sup-norm of the residual
  int max_iterations = 50;
  double initial_step = 1.0;
  double backtrack = 0.5;
  double min_step = 1e-12;
  double cone_safeguard = 0.0;   // trial iterates need min sigma_i > safeguard
  double linear_tolerance = 1e-12;
  int gmres_restart = 40;
  int max_linear_iterations = 400;

  void validate() const;
};

// Key-value description of a solve; see README for the schema.
struct SolverConfig {
  int n = 1, k = 1, l = 0;
  std::vector<int> axes{0, 1, 2, 3};  // 0-based real axes
  int points_per_axis = 16;
  std::string F = "0";
  std::string omega0 = "identity";    // identity | scale:c | diag:d1,...,dn
  DerivativeBackend backend = DerivativeBackend::Spectral;
  SolverOptions options;

  static SolverConfig from_config(const Config& c);
  // The canonical key-value form (round-trips through from_config).
  Config to_config() const;
  void validate() const;
  SolverProblem build() const;
};

// Constant form field parsed from the omega0 syntax above.
HyperhermitianMatrix parse_omega0(const std::string& spec, int n);

// sigma_k(Omega_u) - kappa exp(F + b) sigma_l(Omega_u) pointwise.
// Throws ConeViolation if Omega_u leaves Gamma_k at some point.
ScalarField residual(const SolverProblem& prob, const ScalarField& u, double b);

// Linearization of the residual at (u, b):
//   L[v] = Re tr(G(z) H(v)(z)),  G = T_{k-1} - Ft T_{l-1},
// with T_m = P diag(sigma_m(lambda|i)) P* the Newton tensors in the eigenframe
// P of Omega_u, H the quaternionic Hessian and Ft = kappa exp(F + b). In real
// coordinates this is sum_{s,t} A_st(z) d_s d_t v over the active axes.
class LinearizedOperator {
 public:
  LinearizedOperator(const SolverProblem& prob, const ScalarField& u, double b);
  // From an already assembled Omega_u.
  LinearizedOperator(const SolverProblem& prob, const FormField& omega_u, double b);

  ScalarField apply(const ScalarField& v) const;
  // d residual / d b = -Ft sigma_l(Omega_u).
  const ScalarField& b_column() const { return b_column_; }
  // Min over the grid of the eigenvalues sigma_{k-1}(lambda|i) - Ft sigma_{l-1}(lambda|i) of G.
  double ellipticity() const { return ellipticity_; }
  // Per point d x d coefficient matrices over the active axes.
  const std::vector<Eigen::MatrixXd>& coefficients() const { return coeffs_; }
  Eigen::MatrixXd mean_coefficients() const;
  const SolverProblem& problem() const { return *prob_; }

 private:
  const SolverProblem* prob_;
  std::vector<Eigen::MatrixXd> coeffs_;
  ScalarField b_column_;
  double ellipticity_ = 0;
  mutable std::unique_ptr<Differentiator> diff_;
};

struct SolveResult {
  ScalarField u;  // sup u = 0
  double b = 0;
  std::vector<double> residual_history;  // sup-norms, one per iterate
  std::vector<int> linear_iterations;
  std::vector<double> step_lengths;
  int iterations = 0;
  bool converged = false;
  ConeFieldReport cone;  // final Omega_u
  double ellipticity = 0;
  ConeConditionReport cone_condition_initial;  // at b = -mean F
  ConeConditionReport cone_condition_final;    // at the final b
  // Amplitudes s of F_s = mean F + s (F - mean F) solved in turn when the direct
  // iteration broke down; empty otherwise.
  std::vector<double> continuation;
  std::vector<std::string> warnings;
};

// Damped Newton iteration from u = 0, b = -mean(F) with the mean-zero gauge on u.
// If it breaks down (loss of ellipticity or damping underflow) and F is not
// constant, continuation in the amplitude of F is tried from the same start.
// Throws SolverError on failure, ConeViolation if Omega0 is not in Gamma_k.
SolveResult solve(const SolverProblem& prob, const SolverOptions& opts = {});
SolveResult solve(const SolverConfig& cfg);

// u - max(u).
ScalarField normalize_sup(const ScalarField& u);

}  // namespace hkt
