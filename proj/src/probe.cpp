#include "hkt/probe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hkt/solver.hpp"

namespace hkt {

namespace {

struct Nodes {
  std::vector<double> t;
  std::vector<double> w;
};

Nodes simpson(double a) {
  Nodes q;
  const int intervals = kSimpsonNodes - 1;
  const double h = a / intervals;
  for (int j = 0; j <= intervals; ++j) {
    q.t.push_back(a * j / intervals);
    const double c = (j == 0 || j == intervals) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    q.w.push_back(c * h / 3.0);
  }
  return q;
}

// e^{-p (u - min u)} at every point.
std::vector<double> shifted_weight(const ScalarField& u, double p) {
  const double lo = u.min();
  std::vector<double> w(static_cast<size_t>(u.size()));
  for (long i = 0; i < u.size(); ++i) w[static_cast<size_t>(i)] = std::exp(-p * (u[i] - lo));
  return w;
}

std::span<const Quaternion> point_gradient(const GradientField& g, long p) {
  const int n = g.grid.n();
  return {&g.values[static_cast<size_t>(p) * n], static_cast<size_t>(n)};
}

void require_positive(std::span<const double> ps) {
  if (ps.empty()) throw std::invalid_argument("probe: no p values");
  for (double p : ps) {
    if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("probe: p must be positive and finite");
  }
}

}  // namespace

double relative_slack(double lhs, double rhs) {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale == 0.0 ? 0.0 : (rhs - lhs) / scale;
}

CherrierValue cherrier_ratio(const ScalarField& u, const GradientField& g, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("cherrier_ratio: p must be positive");
  if (!(u.grid == g.grid)) throw std::invalid_argument("cherrier_ratio: grid mismatch");
  const int n = u.grid.n();
  const auto w = shifted_weight(u, p);
  double mass = 0, grad2 = 0;
  for (long i = 0; i < u.size(); ++i) {
    double s = 0;
    for (int a = 0; a < n; ++a) s += g.at(i, a).norm2();
    mass += w[static_cast<size_t>(i)];
    grad2 += w[static_cast<size_t>(i)] * s;
  }
  const double vol = u.grid.cell_volume();
  CherrierValue c;
  c.p = p;
  c.mass = mass * vol;
  // grad e^{-pw/2} = -(p/2) e^{-pw/2} grad u
  c.energy = 0.5 * 0.25 * p * p * grad2 * vol;
  c.ratio = c.energy / (p * c.mass);
  c.log_shift = -p * u.min();
  // du ^ d_J u ^ Omega^{n-1} / Omega^n = |grad u|^2 / (2n)
  c.displayed = p * grad2 * vol / (2.0 * n) / c.mass;
  return c;
}

CherrierValue cherrier_ratio(const ScalarField& u, double p, DerivativeBackend backend) {
  Differentiator diff(u.grid, backend);
  return cherrier_ratio(u, gradient(u, diff), p);
}

EpsilonMeasure measure_epsilon(const FormField& omega0, int k, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("measure_epsilon: fraction outside (0, 1]");
  std::vector<EigenTuple> eig;
  eig.reserve(omega0.values.size());
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& m : omega0.values) {
    eig.push_back(eigenvalues(m));
    const auto& lam = eig.back();
    if (!in_gamma_k(lam.span(), k)) throw ConeViolation("measure_epsilon: omega0 not in Gamma_k");
    hi = std::min(hi, sigma(lam.span(), 1) / lam.size());
  }
  std::vector<double> shifted;
  const auto admissible = [&](double eps) {
    for (const auto& lam : eig) {
      shifted.assign(lam.values().begin(), lam.values().end());
      for (auto& x : shifted) x -= eps;
      if (!in_gamma_k(shifted, k)) return false;
      for (size_t i = 0; i < shifted.size(); ++i) shifted[i] = 1.0 - eps * lam.values()[i];
      if (!in_gamma_k(shifted, k)) return false;
    }
    return true;
  };
  double lo = 0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (admissible(mid) ? lo : hi) = mid;
  }
  return {lo, fraction * lo};
}

double HomotopyReport::min_slack() const {
  double s = std::numeric_limits<double>::infinity();
  for (const auto& r : pointwise) s = std::min(s, r.slack);
  for (const auto& r : displayed) s = std::min(s, r.slack);
  for (const auto& r : weighted) s = std::min(s, r.slack);
  return s;
}

IntegralChecks integral_checks(const ScalarField& u, const FormField& omega0, int k, std::span<const double> ps,
                               double a, double epsilon, DerivativeBackend backend) {
  require_positive(ps);
  if (!(u.grid == omega0.grid)) throw std::invalid_argument("integral_checks: grid mismatch");
  const int n = u.grid.n();
  if (k < 1 || k > n) throw std::invalid_argument("integral_checks: k outside [1, n]");
  if (!(a > 0.0)) throw std::invalid_argument("integral_checks: a must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("integral_checks: epsilon must be positive");

  Differentiator diff(u.grid, backend);
  const FormField hess = quaternionic_hessian(u, diff);
  const GradientField grad = gradient(u, diff);
  const long P = u.size();
  const double vol = u.grid.cell_volume();
  const size_t np = ps.size();

  // Pointwise form: per point and order, int_0^a W_i(t) dt.
  std::vector<double> pointwise(static_cast<size_t>(P * k), 0.0);
  const Nodes q1 = simpson(a);
  for (size_t j = 0; j < q1.t.size(); ++j) {
    const FormField w = add_scaled(omega0, hess, q1.t[j]);
    for (long p = 0; p < P; ++p) {
      const auto lam = eigenvalues(w[p]);
      if (!in_gamma_k(lam.span(), k)) throw ConeViolation("integral_checks: Omega_tu left Gamma_k");
      const auto s = sigma_all(lam.span());
      for (int i = 1; i <= k; ++i) {
        pointwise[static_cast<size_t>(p * k + i - 1)] += q1.w[j] * s[static_cast<size_t>(i - 1)] / binomial(n, i - 1);
      }
    }
  }

  // Weighted integrals over [0, 1/2], all p at once.
  std::vector<std::vector<double>> weight;
  for (double p : ps) weight.push_back(shifted_weight(u, p));
  std::vector<double> pair(np * static_cast<size_t>(k), 0.0);  // int int e^{-pu} GP_i
  std::vector<double> lhs(np, 0.0), ibp(np, 0.0), start(np, 0.0), mass(np, 0.0);
  double start_max = 0;
  const Nodes q2 = simpson(0.5);
  std::vector<double> gp(static_cast<size_t>(k));
  for (size_t j = 0; j < q2.t.size(); ++j) {
    const double t = q2.t[j];
    const FormField w = add_scaled(omega0, hess, t);
    for (long p = 0; p < P; ++p) {
      const auto e = eigen_decompose(w[p]);
      if (!in_gamma_k(e.values.span(), k)) throw ConeViolation("integral_checks: Omega_tu left Gamma_k");
      for (int i = 1; i <= k; ++i) gp[static_cast<size_t>(i - 1)] = gradient_pairing_point(e, point_gradient(grad, p), i);
      const double wk = sigma(e.values.span(), k - 1) / binomial(n, k - 1);
      if (j == 0) start_max = std::max(start_max, wk);
      for (size_t r = 0; r < np; ++r) {
        const double ew = weight[r][static_cast<size_t>(p)] * vol;
        for (int i = 0; i < k; ++i) pair[r * k + i] += q2.w[j] * ew * gp[static_cast<size_t>(i)];
        lhs[r] += q2.w[j] * ew * wk;
        if (k >= 2) ibp[r] += q2.w[j] * (0.5 - t) * ew * gp[static_cast<size_t>(k - 2)];
        if (j == 0) {
          start[r] += ew * wk;
          mass[r] += ew;
        }
      }
    }
  }

  IntegralChecks out;
  for (size_t r = 0; r < np; ++r) {
    const double p = ps[r];
    HomotopyReport h;
    h.p = p;
    h.a = a;
    h.epsilon = epsilon;
    for (int i = 1; i < k; ++i) {
      SlackRecord worst{i, 0, 0, std::numeric_limits<double>::infinity()};
      SlackRecord worst_displayed = worst;
      for (long z = 0; z < P; ++z) {
        const double li = pointwise[static_cast<size_t>(z * k + i - 1)];
        const double rhs = static_cast<double>(k) / i * pointwise[static_cast<size_t>(z * k + k - 1)];
        const double lhs_i = std::pow(epsilon, k - i) * li;
        const double s = relative_slack(lhs_i, rhs);
        if (s < worst.slack) worst = {i, lhs_i, rhs, s};
        const double sd = relative_slack(epsilon * li, rhs);
        if (sd < worst_displayed.slack) worst_displayed = {i, epsilon * li, rhs, sd};
      }
      h.pointwise.push_back(worst);
      h.displayed.push_back(worst_displayed);
      const double wl = std::pow(epsilon, k - i) * pair[r * k + i - 1];
      const double wr = static_cast<double>(k) / i * pair[r * k + k - 1];
      h.weighted.push_back({i, wl, wr, relative_slack(wl, wr)});
    }
    out.homotopy.push_back(std::move(h));

    WeightedEnergyReport e;
    e.p = p;
    e.lhs = lhs[r];
    e.gradient_term = p * pair[r * k + k - 1];
    e.mass = mass[r];
    e.c_min = e.lhs / (e.gradient_term + e.mass);
    e.c_ref = std::max(k / (2.0 * epsilon), 0.5 * start_max);
    e.slack = relative_slack(e.lhs, e.c_ref * (e.gradient_term + e.mass));
    e.identity_rhs = 0.5 * start[r] + p * (k - 1) * ibp[r];
    e.identity_defect = -relative_slack(e.lhs, e.identity_rhs);
    out.energy.push_back(e);
  }
  return out;
}

HomotopyReport homotopy_integral_check(const ScalarField& u, const FormField& omega0, int k, double p, double a,
                                       double epsilon, DerivativeBackend backend) {
  const double ps[] = {p};
  return integral_checks(u, omega0, k, ps, a, epsilon, backend).homotopy.front();
}

WeightedEnergyReport weighted_energy_check(const ScalarField& u, const FormField& omega0, int k, double p,
                                           double epsilon, DerivativeBackend backend) {
  const double ps[] = {p};
  return integral_checks(u, omega0, k, ps, 0.5, epsilon, backend).energy.front();
}

bool LemmaSweepReport::passed() const {
  return std::all_of(margins.begin(), margins.end(), [](const LemmaMargin& m) { return m.failures == 0; });
}

LemmaSweepReport pointwise_lemma_sweep(const ScalarField& u, const FormField& omega0, const ScalarField& F, int k,
                                       int l, double b, double epsilon, DerivativeBackend backend,
                                       double delta_fraction) {
  if (!(u.grid == omega0.grid) || !(u.grid == F.grid)) throw std::invalid_argument("pointwise_lemma_sweep: grid mismatch");
  const int n = u.grid.n();
  if (!(0 <= l && l < k && k <= n)) throw std::invalid_argument("pointwise_lemma_sweep: need 0 <= l < k <= n");
  if (!(epsilon > 0.0)) throw std::invalid_argument("pointwise_lemma_sweep: epsilon must be positive");
  if (!(delta_fraction > 0.0 && delta_fraction <= 1.0)) {
    throw std::invalid_argument("pointwise_lemma_sweep: delta_fraction outside (0, 1]");
  }

  LemmaSweepReport r;
  r.epsilon = epsilon;
  const auto cone = check_cone_condition(omega0, F, k, l, b);
  r.delta_sup = cone.delta;
  r.delta = delta_fraction * cone.delta;
  r.margins = {{"tu-minor-lower"}, {"tu-scaling"}, {"tu-cone"}, {"tu-cone-lower"}};
  auto& minor_lower = r.margins[0];
  auto& scaling = r.margins[1];
  auto& cone_margin = r.margins[2];
  auto& cone_lower = r.margins[3];
  const auto record = [](LemmaMargin& m, double margin, double t, long p) {
    ++m.checks;
    if (!(margin > 0.0)) ++m.failures;
    if (margin < m.min_margin || m.worst_point < 0) {
      m.min_margin = margin;
      m.worst_t = t;
      m.worst_point = p;
    }
  };

  const long P = u.size();
  const double kappa = binomial(n, k) / binomial(n, l);
  const int m = k - l;
  std::vector<double> ft(static_cast<size_t>(P)), d(static_cast<size_t>(P), 0.0);
  r.delta_effective = std::numeric_limits<double>::infinity();
  for (long p = 0; p < P; ++p) {
    const double f = kappa * std::exp(F[p] + b);
    ft[static_cast<size_t>(p)] = f;
    if (l == 0) continue;
    const double dz = m == 1 ? r.delta
                             : m * std::pow(f, (m - 1.0) / m) * (std::pow(f + r.delta, 1.0 / m) - std::pow(f, 1.0 / m));
    d[static_cast<size_t>(p)] = dz;
    r.delta_effective = std::min(r.delta_effective, dz);
  }

  Differentiator diff(u.grid, backend);
  const FormField hess = quaternionic_hessian(u, diff);
  std::vector<std::vector<double>> final_sigma(static_cast<size_t>(P));
  {
    const FormField w1 = add_scaled(omega0, hess, 1.0);
    for (long p = 0; p < P; ++p) final_sigma[static_cast<size_t>(p)] = sigma_all(eigenvalues(w1[p]).span());
  }

  const double lower_l = l >= 1 ? std::pow(epsilon, l - 1) * binomial(n - 1, l - 1) : 0.0;
  std::vector<std::vector<double>> deleted(static_cast<size_t>(n));  // sigma_* per deleted index
  for (int step = 0; step <= 10; ++step) {
    const double t = step / 10.0;
    const FormField w = add_scaled(omega0, hess, t);
    for (long p = 0; p < P; ++p) {
      const auto lam = eigenvalues(w[p]);
      if (!in_gamma_k(lam.span(), k)) throw ConeViolation("pointwise_lemma_sweep: Omega_tu left Gamma_k");
      const auto s = sigma_all(lam.span());

      if (step > 0 && step < 10) {
        for (int i = 1; i <= k; ++i) {
          const double full = final_sigma[static_cast<size_t>(p)][static_cast<size_t>(i)];
          record(scaling, s[static_cast<size_t>(i)] - std::pow(t, i) * full, t, p);
        }
      }

      // Eigenframe deletions, then coordinate deletions.
      const int frames = n > 1 ? 2 : 1;
      for (int frame = 0; frame < frames; ++frame) {
        for (int j = 0; j < n; ++j) {
          std::vector<double> sj;
          if (frame == 0) {
            sj.resize(static_cast<size_t>(n));
            for (int o = 0; o < n; ++o) sj[static_cast<size_t>(o)] = sigma_excl(lam.span(), o, j);
          } else {
            const int removed[] = {j};
            sj = sigma_all(eigenvalues(w[p].delete_indices(removed)).span());
          }
          const auto sig = [&](int o) { return o < 0 ? 0.0 : sj[static_cast<size_t>(o)]; };
          for (int i = 2; i <= k; ++i) {
            const double rhs = std::pow((1 - t) * epsilon, i - 1) * binomial(n - 1, i - 1);
            record(minor_lower, sig(i - 1) - rhs, t, p);
          }
          const double gap = sig(k - 1) - ft[static_cast<size_t>(p)] * sig(l - 1);
          const double dz = d[static_cast<size_t>(p)];
          record(cone_margin, gap - dz * (1 - t) * sig(l - 1), t, p);
          record(cone_lower, gap - dz * std::pow(1 - t, l) * lower_l, t, p);
          if (l >= 1 && step < 10) r.best_constant = std::min(r.best_constant, gap / ((1 - t) * sig(l - 1)));
        }
      }
    }
  }
  return r;
}

bool ProbeReport::mandatory_passed() const {
  if (!lemma.passed()) return false;
  for (const auto& h : integrals.homotopy) {
    if (h.min_slack() < -kQuadratureTolerance) return false;
  }
  for (const auto& e : integrals.energy) {
    if (e.slack < -kQuadratureTolerance) return false;
  }
  return true;
}

ProbeReport probe(const SolverProblem& prob, const ScalarField& u, double b, std::span<const double> ps,
                  const std::string& problem_id) {
  prob.validate();
  require_positive(ps);
  if (!(u.grid == prob.grid)) throw std::invalid_argument("probe: field grid does not match the problem");
  ProbeReport r;
  r.problem_id = problem_id;
  r.n = prob.n;
  r.k = prob.k;
  r.l = prob.l;
  r.b = b;
  r.epsilon = measure_epsilon(prob.omega0, prob.k);
  const auto cone = check_cone_condition(prob.omega0, prob.F, prob.k, prob.l, b);
  r.cone_condition = cone.holds;
  r.delta = cone.delta;

  Differentiator diff(u.grid, prob.backend);
  const GradientField g = gradient(u, diff);
  for (double p : ps) r.cherrier.push_back(cherrier_ratio(u, g, p));
  const double base = r.cherrier.front().ratio;
  r.cherrier_growth = 1.0;
  for (const auto& c : r.cherrier) {
    if (base > 0.0) r.cherrier_growth = std::max(r.cherrier_growth, c.ratio / base);
    else if (c.ratio > 0.0) r.cherrier_growth = std::numeric_limits<double>::infinity();
  }
  r.cherrier_bounded = r.cherrier_growth <= 2.0;

  r.integrals = integral_checks(u, prob.omega0, prob.k, ps, 1.0, r.epsilon.value, prob.backend);
  r.lemma = pointwise_lemma_sweep(u, prob.omega0, prob.F, prob.k, prob.l, b, r.epsilon.value, prob.backend);
  return r;
}

}  // namespace hkt
