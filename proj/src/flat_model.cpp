#include "hkt/flat_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "hkt/oracle.hpp"

namespace hkt {

namespace {

struct HessianTerm {
  int a, b;
  Quaternion coeff;
  int s, t;  // active slots
};

std::vector<HessianTerm> hessian_terms(const TorusGrid& g) {
  std::vector<HessianTerm> terms;
  const auto& axes = g.active_axes();
  for (int s = 0; s < g.active_count(); ++s) {
    for (int t = 0; t < g.active_count(); ++t) {
      const int r = axes[static_cast<size_t>(s)], rp = axes[static_cast<size_t>(t)];
      const Quaternion c = 0.5 * (Quaternion::unit(r % 4) * Quaternion::unit(rp % 4).conj());
      terms.push_back({r / 4, rp / 4, c, s, t});
    }
  }
  return terms;
}

Quaternion frame_component(const QuatMatrix& p, std::span<const Quaternion> v, int l) {
  Quaternion s;
  for (int a = 0; a < p.size(); ++a) s += p(a, l).conj() * v[static_cast<size_t>(a)];
  return s;
}

void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

}  // namespace

HyperhermitianMatrix hessian_from_real(const Eigen::MatrixXd& d) {
  if (d.rows() != d.cols() || d.rows() % 4 != 0 || d.rows() == 0) {
    throw std::invalid_argument("hessian_from_real: expected a 4n x 4n matrix");
  }
  const int n = static_cast<int>(d.rows() / 4);
  QuatMatrix h(n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      Quaternion s;
      for (int m = 0; m < 4; ++m) {
        for (int mp = 0; mp < 4; ++mp) {
          s += d(4 * a + m, 4 * b + mp) * (Quaternion::unit(m) * Quaternion::unit(mp).conj());
        }
      }
      h(a, b) = 0.5 * s;
    }
  }
  return HyperhermitianMatrix(h, 1e-10);
}

FormField quaternionic_hessian(const ScalarField& u, Differentiator& diff) {
  const TorusGrid& g = u.grid;
  require_same_grid(g, diff.grid(), "quaternionic_hessian");
  const auto der = diff(u.values, true);
  const auto terms = hessian_terms(g);
  FormField out(g, HyperhermitianMatrix(g.n()));
  QuatMatrix h(g.n());
  for (long p = 0; p < g.size(); ++p) {
    for (int a = 0; a < g.n(); ++a) {
      for (int b = 0; b < g.n(); ++b) h(a, b) = Quaternion{};
    }
    for (const auto& term : terms) {
      h(term.a, term.b) += term.coeff * der.d2(term.s, term.t)[static_cast<size_t>(p)];
    }
    out[p] = HyperhermitianMatrix(h, 1e-6);
  }
  return out;
}

FormField quaternionic_hessian(const ScalarField& u, DerivativeBackend backend) {
  Differentiator diff(u.grid, backend);
  return quaternionic_hessian(u, diff);
}

GradientField gradient(const ScalarField& u, Differentiator& diff) {
  const TorusGrid& g = u.grid;
  require_same_grid(g, diff.grid(), "gradient");
  const auto der = diff(u.values, false);
  GradientField out(g);
  for (int s = 0; s < g.active_count(); ++s) {
    const int r = g.active_axes()[static_cast<size_t>(s)];
    const Quaternion e = Quaternion::unit(r % 4);
    for (long p = 0; p < g.size(); ++p) out.at(p, r / 4) += e * der.first[static_cast<size_t>(s)][static_cast<size_t>(p)];
  }
  return out;
}

FormField add_scaled(const FormField& omega0, const FormField& hessian, double t) {
  require_same_grid(omega0.grid, hessian.grid, "add_scaled");
  FormField out = omega0;
  for (long p = 0; p < out.size(); ++p) out[p] += t * hessian[p];
  return out;
}

FormField omega_u(const FormField& omega0, const ScalarField& u, double t, DerivativeBackend backend) {
  return add_scaled(omega0, quaternionic_hessian(u, backend), t);
}

ScalarField sigma_field(const FormField& w, int k) {
  ScalarField out(w.grid);
  for (long p = 0; p < w.size(); ++p) out[p] = sigma(eigenvalues(w[p]).span(), k);
  return out;
}

ConeFieldReport in_gamma_k_field(const FormField& w, int k) {
  ConeFieldReport r;
  for (long p = 0; p < w.size(); ++p) {
    const auto e = sigma_all(eigenvalues(w[p]).span());
    if (k < 1 || k >= static_cast<int>(e.size())) throw std::out_of_range("in_gamma_k_field: bad order");
    for (int i = 1; i <= k; ++i) {
      if (e[static_cast<size_t>(i)] < r.min_slack) {
        r.min_slack = e[static_cast<size_t>(i)];
        r.worst_point = p;
        r.worst_order = i;
      }
    }
  }
  r.inside = r.min_slack > 0.0;
  return r;
}

ConeConditionReport check_cone_condition(const FormField& omega0, const ScalarField& F, int k, int l, double b) {
  require_same_grid(omega0.grid, F.grid, "check_cone_condition");
  const int n = omega0.grid.n();
  if (!(0 <= l && l < k && k <= n)) throw std::invalid_argument("check_cone_condition: need 0 <= l < k <= n");
  const double kappa = binomial(n, k) / binomial(n, l);
  ConeConditionReport r;
  r.margin = ScalarField(omega0.grid);
  for (long p = 0; p < omega0.size(); ++p) {
    const auto lam = eigenvalues(omega0[p]);
    if (!in_gamma_k(lam.span(), k)) {
      throw ConeViolation("check_cone_condition: omega0 not in Gamma_k at point " + std::to_string(p));
    }
    const double ft = kappa * std::exp(F[p] + b);
    double local = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      const double top = sigma_excl(lam.span(), k - 1, j);
      const double bottom = sigma_excl(lam.span(), l - 1, j);
      const double m = top - ft * bottom;
      if (m < local) {
        local = m;
        if (m < r.min_margin) {
          r.min_margin = m;
          r.worst_point = p;
          r.worst_index = j;
        }
      }
      if (l > 0) r.delta = std::min(r.delta, top / bottom - ft);
    }
    r.margin[p] = local;
  }
  r.holds = r.min_margin > 0.0;
  return r;
}

SimultaneousFrame simultaneous_diagonalize(const HyperhermitianMatrix& w1, const HyperhermitianMatrix& w2) {
  const int n = w1.size();
  if (w2.size() != n) throw std::invalid_argument("simultaneous_diagonalize: size mismatch");
  const auto e1 = eigen_decompose(w1);
  if (!(e1.values[0] > 0.0)) throw std::domain_error("simultaneous_diagonalize: first form not positive definite");
  std::vector<double> inv_sqrt(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) inv_sqrt[static_cast<size_t>(i)] = 1.0 / std::sqrt(e1.values[i]);
  const QuatMatrix s = e1.vectors * QuatMatrix::diagonal(inv_sqrt) * e1.vectors.adjoint();
  const auto e2 = eigen_decompose(w2.congruence(s));
  SimultaneousFrame f;
  f.basis = s * e2.vectors;
  f.d1.assign(static_cast<size_t>(n), 1.0);
  f.d2 = e2.values.values();
  const auto c1 = w1.congruence(f.basis);
  const auto c2 = w2.congruence(f.basis);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double t1 = i == j ? distance(c1(i, i), Quaternion{1.0}) : c1(i, j).abs();
      const double t2 = i == j ? distance(c2(i, i), Quaternion{f.d2[static_cast<size_t>(i)]}) : c2(i, j).abs();
      f.reconstruction_error = std::max({f.reconstruction_error, t1, t2});
    }
  }
  return f;
}

double wedge_coeff_excl(std::span<const double> diag, int i, int l) {
  const int n = static_cast<int>(diag.size());
  if (i < 1 || i > n) throw std::out_of_range("wedge_coeff_excl: i outside [1, n]");
  return sigma_excl(diag, i - 1, l);
}

double wedge_coeff_excl(const HyperhermitianMatrix& w, int i, int l) {
  const int n = w.size();
  std::vector<double> d(static_cast<size_t>(n));
  const double tol = 1e-12 * (1.0 + w.norm());
  for (int a = 0; a < n; ++a) {
    d[static_cast<size_t>(a)] = w(a, a).w;
    for (int b = 0; b < n; ++b) {
      if (a != b && w(a, b).abs() > tol) throw std::invalid_argument("wedge_coeff_excl: matrix not diagonal");
    }
  }
  return wedge_coeff_excl(d, i, l);
}

double wedge_power_ratio(std::span<const double> eig, int m) {
  const int n = static_cast<int>(eig.size());
  return sigma(eig, m) / binomial(n, m);
}

double gradient_pairing_point(const SymplecticEigen& w, std::span<const Quaternion> g, int i) {
  const int n = w.values.size();
  if (i < 1 || i > n) throw std::out_of_range("gradient_pairing: i outside [1, n]");
  if (!in_gamma_k(w.values.span(), i)) throw ConeViolation("gradient_pairing: W not in Gamma_i");
  double s = 0;
  for (int l = 0; l < n; ++l) {
    s += 0.5 * frame_component(w.vectors, g, l).norm2() * sigma_excl(w.values.span(), i - 1, l);
  }
  return s / (n * binomial(n - 1, i - 1));
}

ScalarField gradient_pairing(const GradientField& g, const FormField& w, int i) {
  require_same_grid(g.grid, w.grid, "gradient_pairing");
  const int n = w.grid.n();
  ScalarField out(w.grid);
  for (long p = 0; p < w.size(); ++p) {
    const std::span<const Quaternion> gp(&g.values[static_cast<size_t>(p) * n], static_cast<size_t>(n));
    out[p] = gradient_pairing_point(eigen_decompose(w[p]), gp, i);
  }
  return out;
}

ScalarField gradient_pairing(const ScalarField& u, const FormField& w, int i, DerivativeBackend backend) {
  Differentiator diff(u.grid, backend);
  return gradient_pairing(gradient(u, diff), w, i);
}

MixedBoundReport mixed_term_bound(const GradientField& g, const FormField& w, int i,
                                  std::span<const Quaternion> alpha, double delta) {
  require_same_grid(g.grid, w.grid, "mixed_term_bound");
  const int n = w.grid.n();
  if (static_cast<int>(alpha.size()) != n) throw std::invalid_argument("mixed_term_bound: alpha size mismatch");
  if (!(delta > 0.0)) throw std::invalid_argument("mixed_term_bound: delta must be positive");
  double alpha2 = 0;
  for (const auto& q : alpha) alpha2 += q.norm2();
  MixedBoundReport r;
  r.constant = 0.5 * std::max(1.0, alpha2);
  const double c = 1.0 / (n * binomial(n - 1, i - 1));
  for (long p = 0; p < w.size(); ++p) {
    const auto e = eigen_decompose(w[p]);
    if (!in_gamma_k(e.values.span(), i)) throw ConeViolation("mixed_term_bound: W not in Gamma_i");
    const std::span<const Quaternion> gp(&g.values[static_cast<size_t>(p) * n], static_cast<size_t>(n));
    std::complex<double> pair = 0;
    double energy = 0;
    for (int l = 0; l < n; ++l) {
      const double wl = sigma_excl(e.values.span(), i - 1, l);
      const Quaternion h = frame_component(e.vectors, gp, l) * std::sqrt(0.5);
      const Quaternion a = frame_component(e.vectors, alpha, l);
      pair += (-std::conj(h.z1()) * a.z1() - std::conj(h.z2()) * a.z2()) * wl;
      energy += h.norm2() * wl;
    }
    const double lhs = c * std::abs(pair);
    const double rhs = r.constant / delta * c * energy +
                       r.constant * delta * wedge_power_ratio(e.values.span(), i - 1);
    r.max_lhs = std::max(r.max_lhs, lhs);
    const double slack = normalized_slack(rhs, lhs);
    r.min_slack = std::min(r.min_slack, slack);
    if (!(slack > -kStrictnessMargin)) ++r.failures;
  }
  return r;
}

double integrate(const ScalarField& f) {
  double s = 0;
  for (double v : f.values) s += v;
  return s * f.grid.cell_volume();
}

}  // namespace hkt
