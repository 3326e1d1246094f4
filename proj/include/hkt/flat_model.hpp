#pragma once

#include <limits>
#include <span>

#include "hkt/spectral.hpp"
#include "hkt/torus.hpp"

namespace hkt {

// Quaternionic Hessian of a symmetric 4n x 4n real Hessian D:
//   H_ab = 1/2 sum_{m,m'} e_m conj(e_m') D(4a+m, 4b+m'),  e = (1, i, j, k).
// With this normalization |q_a|^2 maps to 4 E_aa and sigma_1(H) = Laplacian / 2.
HyperhermitianMatrix hessian_from_real(const Eigen::MatrixXd& real_hessian);

FormField quaternionic_hessian(const ScalarField& u, Differentiator& diff);
FormField quaternionic_hessian(const ScalarField& u, DerivativeBackend backend = DerivativeBackend::Spectral);

GradientField gradient(const ScalarField& u, Differentiator& diff);

// omega0 + t * hessian, pointwise.
FormField add_scaled(const FormField& omega0, const FormField& hessian, double t);
FormField omega_u(const FormField& omega0, const ScalarField& u, double t,
                  DerivativeBackend backend = DerivativeBackend::Spectral);

ScalarField sigma_field(const FormField& w, int k);

struct ConeFieldReport {
  bool inside = true;
  double min_slack = std::numeric_limits<double>::infinity();  // min over points and 1 <= i <= k of sigma_i
  long worst_point = -1;
  int worst_order = 0;
};
ConeFieldReport in_gamma_k_field(const FormField& w, int k);

struct ConeConditionReport {
  bool holds = true;
  // min over points and j of sigma_{k-1}(omega0|j) - Ft sigma_{l-1}(omega0|j)
  double min_margin = std::numeric_limits<double>::infinity();
  // min over points and j of sigma_{k-1}(omega0|j) / sigma_{l-1}(omega0|j) - Ft; +inf when l = 0
  double delta = std::numeric_limits<double>::infinity();
  long worst_point = -1;
  int worst_index = -1;
  ScalarField margin;  // pointwise minimum over j
};

// Ft = C(n,k)/C(n,l) exp(F + b). Throws ConeViolation if omega0 leaves Gamma_k anywhere.
ConeConditionReport check_cone_condition(const FormField& omega0, const ScalarField& F, int k, int l,
                                         double b = 0.0);

struct SimultaneousFrame {
  QuatMatrix basis;         // C with C* W1 C = diag(d1), C* W2 C = diag(d2)
  std::vector<double> d1;   // all ones: the frame is W1-orthonormal
  std::vector<double> d2;   // ascending
  double reconstruction_error = 0;  // max off-diagonal or diagonal mismatch
};
// Throws std::domain_error unless w1 is positive definite.
SimultaneousFrame simultaneous_diagonalize(const HyperhermitianMatrix& w1, const HyperhermitianMatrix& w2);

// sigma_{i-1}(W|l) for W diagonal in the working frame (0-based l, 1 <= i <= n).
double wedge_coeff_excl(std::span<const double> diag, int i, int l);
double wedge_coeff_excl(const HyperhermitianMatrix& w, int i, int l);

// W^m ^ Omega^{n-m} / Omega^n = sigma_m(W) / C(n, m).
double wedge_power_ratio(std::span<const double> eig, int m);

// (du ^ d_J u ^ W^{i-1} ^ Omega^{n-i}) / Omega^n at one point, from the
// coordinate gradient quaternions g (see GradientField):
//   ((i-1)!(n-i)!/n!) sum_l 1/2 |(P* g)_l|^2 sigma_{i-1}(W|l)
// with P the unitary eigenframe of W. Requires W in Gamma_i.
double gradient_pairing_point(const SymplecticEigen& w, std::span<const Quaternion> g, int i);
ScalarField gradient_pairing(const GradientField& g, const FormField& w, int i);
ScalarField gradient_pairing(const ScalarField& u, const FormField& w, int i,
                             DerivativeBackend backend = DerivativeBackend::Spectral);

// Cauchy-Schwarz bound for the mixed term with a constant synthetic (1,0)-form
// alpha (coordinate-frame quaternions): |LHS| <= (C/delta) GP + C delta sigma_{i-1}(W)/C(n,i-1),
// with C = max(1, |alpha|^2) / 2.
struct MixedBoundReport {
  double constant = 0;
  double min_slack = std::numeric_limits<double>::infinity();  // min normalized (rhs - |lhs|)
  double max_lhs = 0;
  long failures = 0;
};
MixedBoundReport mixed_term_bound(const GradientField& g, const FormField& w, int i,
                                  std::span<const Quaternion> alpha, double delta);

// Torus average: sum f * cell volume (total volume 1).
double integrate(const ScalarField& f);

}  // namespace hkt
