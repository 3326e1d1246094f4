#include "hkt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <unsupported/Eigen/IterativeSolvers>

#include "hkt/expression.hpp"

namespace hkt {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join_ints(const std::vector<int>& v, int offset) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i] + offset);
  return s;
}

// Pointwise quantities of a trial state that need only the eigenvalues.
struct TrialEval {
  ScalarField residual;
  double sup = 0;
  double cone_slack = std::numeric_limits<double>::infinity();
  double ellipticity = std::numeric_limits<double>::infinity();
};

TrialEval evaluate(const SolverProblem& prob, const FormField& omega, double b) {
  TrialEval e;
  e.residual = ScalarField(prob.grid);
  const double kappa = prob.kappa();
  for (long p = 0; p < omega.size(); ++p) {
    const auto lam = eigenvalues(omega[p]);
    const auto s = sigma_all(lam.span());
    for (int i = 1; i <= prob.k; ++i) e.cone_slack = std::min(e.cone_slack, s[static_cast<size_t>(i)]);
    const double ft = kappa * std::exp(prob.F[p] + b);
    e.residual[p] = s[static_cast<size_t>(prob.k)] - ft * s[static_cast<size_t>(prob.l)];
    for (int i = 0; i < prob.n; ++i) {
      const double g = sigma_excl(lam.span(), prob.k - 1, i) - ft * sigma_excl(lam.span(), prob.l - 1, i);
      e.ellipticity = std::min(e.ellipticity, g);
    }
  }
  e.sup = e.residual.sup_norm();
  return e;
}

}  // namespace

// ---------------------------------------------------------------------------
// Matrix-free bordered Newton system for Eigen's GMRES:
//   [ L   c ] [ v  ]   [ r1 ]
//   [ m^T 0 ] [ db ] = [ r2 ]     m^T v = mean(v).
class BorderedSystem;

}  // namespace hkt

namespace Eigen::internal {
template <>
struct traits<hkt::BorderedSystem> : public Eigen::internal::traits<Eigen::SparseMatrix<double>> {};
}  // namespace Eigen::internal

namespace hkt {

class BorderedSystem : public Eigen::EigenBase<BorderedSystem> {
 public:
  using Scalar = double;
  using RealScalar = double;
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic, IsRowMajor = false };

  explicit BorderedSystem(const LinearizedOperator& op) : op_(&op), size_(op.problem().grid.size()) {}

  Eigen::Index rows() const { return size_ + 1; }
  Eigen::Index cols() const { return size_ + 1; }

  template <typename Rhs>
  Eigen::Product<BorderedSystem, Rhs, Eigen::AliasFreeProduct> operator*(const Eigen::MatrixBase<Rhs>& x) const {
    return Eigen::Product<BorderedSystem, Rhs, Eigen::AliasFreeProduct>(*this, x.derived());
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    ScalarField v(op_->problem().grid);
    std::copy(x.data(), x.data() + size_, v.values.begin());
    const ScalarField lv = op_->apply(v);
    const auto& c = op_->b_column();
    Eigen::VectorXd y(size_ + 1);
    for (long p = 0; p < size_; ++p) y[p] = lv[p] + c[p] * x[size_];
    y[size_] = v.mean();
    return y;
  }

  const LinearizedOperator& op() const { return *op_; }

 private:
  const LinearizedOperator* op_;
  long size_;
};

// Inverse of the constant-coefficient operator built from the grid mean of the
// coefficients, with the bordered rows eliminated exactly.
class MeanCoefficientPreconditioner {
 public:
  MeanCoefficientPreconditioner() = default;

  template <typename M>
  MeanCoefficientPreconditioner& analyzePattern(const M&) { return *this; }
  template <typename M>
  MeanCoefficientPreconditioner& factorize(const M& m) { return compute(m); }

  MeanCoefficientPreconditioner& compute(const BorderedSystem& sys) {
    const auto& op = sys.op();
    const auto& prob = op.problem();
    grid_ = prob.grid;
    const Eigen::MatrixXd a = op.mean_coefficients();
    c_mean_ = op.b_column().mean();
    const int d = grid_.active_count();
    const int N = grid_.points_per_axis();
    const bool spectral = prob.backend == DerivativeBackend::Spectral;
    const double two_pi = 2.0 * std::numbers::pi;
    double scale = 0;
    for (int s = 0; s < d; ++s) scale = std::max(scale, std::abs(a(s, s)));
    const double floor = 1e-14 * (scale + 1e-300) * N * N;
    multiplier_ = std::make_shared<FourierMultiplier>(grid_, [&](std::span<const int> k, std::span<const char> nyq) {
      double sym = 0;
      for (int s = 0; s < d; ++s) {
        const double ks = k[static_cast<size_t>(s)];
        for (int t = s; t < d; ++t) {
          const double kt = k[static_cast<size_t>(t)];
          double f;
          if (spectral) {
            if (s != t && (nyq[static_cast<size_t>(s)] || nyq[static_cast<size_t>(t)])) continue;
            f = -two_pi * two_pi * ks * kt;
          } else if (s == t) {
            f = -(2.0 - 2.0 * std::cos(two_pi * ks / N)) * N * N;
          } else {
            f = -std::sin(two_pi * ks / N) * std::sin(two_pi * kt / N) * N * N;
          }
          sym += (s == t ? 1.0 : 2.0) * a(s, t) * f;
        }
      }
      return std::abs(sym) > floor ? 1.0 / sym : 0.0;
    });
    size_ = grid_.size();
    return *this;
  }

  Eigen::ComputationInfo info() const { return Eigen::Success; }

  template <typename Rhs>
  Eigen::VectorXd solve(const Eigen::MatrixBase<Rhs>& r) const {
    std::vector<double> r1(static_cast<size_t>(size_));
    double mean = 0;
    for (long p = 0; p < size_; ++p) {
      r1[static_cast<size_t>(p)] = r(p);
      mean += r(p);
    }
    mean /= static_cast<double>(size_);
    for (double& v : r1) v -= mean;
    const auto v = (*multiplier_)(r1);
    Eigen::VectorXd x(size_ + 1);
    for (long p = 0; p < size_; ++p) x[p] = v[static_cast<size_t>(p)] + r(size_);
    x[size_] = c_mean_ != 0.0 ? mean / c_mean_ : 0.0;
    return x;
  }

 private:
  TorusGrid grid_;
  long size_ = 0;
  double c_mean_ = 0;
  std::shared_ptr<FourierMultiplier> multiplier_;
};

}  // namespace hkt

namespace Eigen::internal {
template <typename Rhs>
struct generic_product_impl<hkt::BorderedSystem, Rhs, SparseShape, DenseShape, GemvProduct>
    : generic_product_impl_base<hkt::BorderedSystem, Rhs, generic_product_impl<hkt::BorderedSystem, Rhs>> {
  using Scalar = typename Product<hkt::BorderedSystem, Rhs>::Scalar;

  template <typename Dest>
  static void scaleAndAddTo(Dest& dst, const hkt::BorderedSystem& lhs, const Rhs& rhs, const Scalar& alpha) {
    const Eigen::VectorXd x = rhs;
    dst.noalias() += alpha * lhs.apply(x);
  }
};
}  // namespace Eigen::internal

namespace hkt {

void SolverProblem::validate() const {
  if (!(0 <= l && l < k && k <= n)) throw std::invalid_argument("solver: need 0 <= l < k <= n");
  if (grid.n() != n) throw std::invalid_argument("solver: grid dimension differs from n");
  if (grid.active_count() < 1) throw std::invalid_argument("solver: grid needs at least one active axis");
  if (!(F.grid == grid) || !(omega0.grid == grid)) throw std::invalid_argument("solver: field grids differ");
  for (double v : F.values) {
    if (!std::isfinite(v)) throw std::invalid_argument("solver: F is not finite");
  }
}

void SolverOptions::validate() const {
  if (!(tolerance > 0)) throw std::invalid_argument("solver: tolerance must be positive");
  if (max_iterations < 1) throw std::invalid_argument("solver: max_iterations must be >= 1");
  if (!(initial_step > 0 && initial_step <= 1)) throw std::invalid_argument("solver: initial_step must be in (0, 1]");
  if (!(backtrack > 0 && backtrack < 1)) throw std::invalid_argument("solver: backtrack must be in (0, 1)");
  if (!(min_step > 0)) throw std::invalid_argument("solver: min_step must be positive");
  if (!(cone_safeguard >= 0)) throw std::invalid_argument("solver: cone_safeguard must be >= 0");
  if (!(linear_tolerance > 0)) throw std::invalid_argument("solver: linear_tolerance must be positive");
  if (gmres_restart < 1 || max_linear_iterations < 1) throw std::invalid_argument("solver: bad GMRES limits");
}

HyperhermitianMatrix parse_omega0(const std::string& spec, int n) {
  if (spec == "identity") return HyperhermitianMatrix::identity(n);
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "scale") {
    const double c = parse_double(rest, "omega0 scale");
    return c * HyperhermitianMatrix::identity(n);
  }
  if (kind == "diag") {
    std::vector<double> d;
    for (const auto& s : split_list(rest)) d.push_back(parse_double(s, "omega0 diag"));
    if (static_cast<int>(d.size()) != n) throw ConfigError("omega0 diag needs exactly n entries");
    return HyperhermitianMatrix::diagonal(d);
  }
  throw ConfigError("omega0: expected identity, scale:c or diag:d1,...,dn, got '" + spec + "'");
}

SolverConfig SolverConfig::from_config(const Config& c) {
  c.require_only({"n", "k", "l", "axes", "N", "F", "omega0", "backend", "tolerance", "max_iterations",
                  "initial_step", "backtrack", "min_step", "cone_safeguard", "linear_tolerance",
                  "gmres_restart", "max_linear_iterations"});
  SolverConfig s;
  s.n = static_cast<int>(c.get_int("n"));
  s.k = static_cast<int>(c.get_int("k"));
  s.l = static_cast<int>(c.get_int("l", 0));
  if (c.has("axes")) {
    s.axes.clear();
    for (long a : c.get_ints("axes")) s.axes.push_back(static_cast<int>(a) - 1);
  }
  s.points_per_axis = static_cast<int>(c.get_int("N", 16));
  s.F = c.get_string("F", std::string("0"));
  s.omega0 = c.get_string("omega0", std::string("identity"));
  try {
    s.backend = backend_from_string(c.get_string("backend", std::string("spectral")));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  auto& o = s.options;
  o.tolerance = c.get_double("tolerance", o.tolerance);
  o.max_iterations = static_cast<int>(c.get_int("max_iterations", o.max_iterations));
  o.initial_step = c.get_double("initial_step", o.initial_step);
  o.backtrack = c.get_double("backtrack", o.backtrack);
  o.min_step = c.get_double("min_step", o.min_step);
  o.cone_safeguard = c.get_double("cone_safeguard", o.cone_safeguard);
  o.linear_tolerance = c.get_double("linear_tolerance", o.linear_tolerance);
  o.gmres_restart = static_cast<int>(c.get_int("gmres_restart", o.gmres_restart));
  o.max_linear_iterations = static_cast<int>(c.get_int("max_linear_iterations", o.max_linear_iterations));
  s.validate();
  return s;
}

Config SolverConfig::to_config() const {
  Config c;
  c.set("n", std::to_string(n));
  c.set("k", std::to_string(k));
  c.set("l", std::to_string(l));
  c.set("axes", join_ints(axes, 1));
  c.set("N", std::to_string(points_per_axis));
  c.set("F", F);
  c.set("omega0", omega0);
  c.set("backend", to_string(backend));
  c.set("tolerance", fmt(options.tolerance));
  c.set("max_iterations", std::to_string(options.max_iterations));
  c.set("initial_step", fmt(options.initial_step));
  c.set("backtrack", fmt(options.backtrack));
  c.set("min_step", fmt(options.min_step));
  c.set("cone_safeguard", fmt(options.cone_safeguard));
  c.set("linear_tolerance", fmt(options.linear_tolerance));
  c.set("gmres_restart", std::to_string(options.gmres_restart));
  c.set("max_linear_iterations", std::to_string(options.max_linear_iterations));
  return c;
}

void SolverConfig::validate() const {
  if (!(0 <= l && l < k && k <= n)) throw ConfigError("need 0 <= l < k <= n");
  if (axes.empty()) throw ConfigError("axes: at least one active axis required");
  try {
    TorusGrid(n, axes, points_per_axis);
    options.validate();
    Expression(F, 4 * n);
    parse_omega0(omega0, n);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

SolverProblem SolverConfig::build() const {
  validate();
  SolverProblem p;
  p.n = n;
  p.k = k;
  p.l = l;
  p.grid = TorusGrid(n, axes, points_per_axis);
  const Expression f(F, 4 * n);
  p.F = sample_field(p.grid, [&](const std::vector<double>& x) { return f(x); });
  p.omega0 = FormField(p.grid, parse_omega0(omega0, n));
  p.backend = backend;
  p.validate();
  return p;
}

ScalarField residual(const SolverProblem& prob, const ScalarField& u, double b) {
  const FormField omega = omega_u(prob.omega0, u, 1.0, prob.backend);
  ScalarField r(prob.grid);
  const double kappa = prob.kappa();
  for (long p = 0; p < omega.size(); ++p) {
    const auto s = sigma_all(eigenvalues(omega[p]).span());
    for (int i = 1; i <= prob.k; ++i) {
      if (!(s[static_cast<size_t>(i)] > 0.0)) {
        throw ConeViolation("residual: Omega_u leaves Gamma_k at point " + std::to_string(p));
      }
    }
    r[p] = s[static_cast<size_t>(prob.k)] - kappa * std::exp(prob.F[p] + b) * s[static_cast<size_t>(prob.l)];
  }
  return r;
}

LinearizedOperator::LinearizedOperator(const SolverProblem& prob, const ScalarField& u, double b)
    : LinearizedOperator(prob, omega_u(prob.omega0, u, 1.0, prob.backend), b) {}

LinearizedOperator::LinearizedOperator(const SolverProblem& prob, const FormField& omega, double b)
    : prob_(&prob), b_column_(prob.grid), ellipticity_(std::numeric_limits<double>::infinity()) {
  const TorusGrid& g = prob.grid;
  const int n = prob.n, d = g.active_count();
  const double kappa = prob.kappa();
  coeffs_.assign(static_cast<size_t>(g.size()), Eigen::MatrixXd::Zero(d, d));
  long worst = -1;
  for (long p = 0; p < g.size(); ++p) {
    const auto e = eigen_decompose(omega[p]);
    const auto lam = e.values.span();
    if (!in_gamma_k(lam, prob.k)) throw ConeViolation("linearize: Omega_u leaves Gamma_k at point " + std::to_string(p));
    const double ft = kappa * std::exp(prob.F[p] + b);
    std::vector<double> w(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      w[static_cast<size_t>(i)] = sigma_excl(lam, prob.k - 1, i) - ft * sigma_excl(lam, prob.l - 1, i);
      if (w[static_cast<size_t>(i)] < ellipticity_) {
        ellipticity_ = w[static_cast<size_t>(i)];
        worst = p;
      }
    }
    b_column_[p] = -ft * sigma(lam, prob.l);
    const QuatMatrix G = e.vectors * QuatMatrix::diagonal(w) * e.vectors.adjoint();
    auto& A = coeffs_[static_cast<size_t>(p)];
    for (int s = 0; s < d; ++s) {
      const int r = g.active_axes()[static_cast<size_t>(s)];
      for (int t = 0; t < d; ++t) {
        const int rp = g.active_axes()[static_cast<size_t>(t)];
        // Re tr(G H) = sum_{a,b} Re(G_ba H_ab), H_ab = 1/2 sum e_m conj(e_m') D(4a+m, 4b+m').
        const Quaternion q = G(rp / 4, r / 4) * (Quaternion::unit(r % 4) * Quaternion::unit(rp % 4).conj());
        A(s, t) = 0.5 * q.w;
      }
    }
    A = 0.5 * (A + A.transpose()).eval();
  }
  if (!(ellipticity_ > 0.0)) {
    throw SolverError("linearize: loss of ellipticity at point " + std::to_string(worst) +
                      " (min Newton tensor eigenvalue " + fmt(ellipticity_) + ")");
  }
  diff_ = std::make_unique<Differentiator>(g, prob.backend);
}

ScalarField LinearizedOperator::apply(const ScalarField& v) const {
  const TorusGrid& g = prob_->grid;
  const int d = g.active_count();
  const auto der = (*diff_)(v.values, true);
  ScalarField out(g);
  for (long p = 0; p < g.size(); ++p) {
    const auto& A = coeffs_[static_cast<size_t>(p)];
    double s = 0;
    for (int a = 0; a < d; ++a) {
      s += A(a, a) * der.d2(a, a)[static_cast<size_t>(p)];
      for (int b = a + 1; b < d; ++b) s += 2.0 * A(a, b) * der.d2(a, b)[static_cast<size_t>(p)];
    }
    out[p] = s;
  }
  return out;
}

Eigen::MatrixXd LinearizedOperator::mean_coefficients() const {
  const int d = prob_->grid.active_count();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (const auto& a : coeffs_) m += a;
  return m / static_cast<double>(coeffs_.size());
}

ScalarField normalize_sup(const ScalarField& u) {
  ScalarField out = u;
  const double m = u.max();
  for (double& v : out.values) v -= m;
  return out;
}

namespace {

struct NewtonState {
  ScalarField u;
  double b = 0;
  FormField omega;
  TrialEval cur;
};

struct StageLog {
  std::vector<double> residual_history;
  std::vector<int> linear_iterations;
  std::vector<double> step_lengths;
  int iterations = 0;
};

enum class NewtonStatus { Converged, Budget, Breakdown };

// Damped Newton from `st` until the residual is below `tol`. `st` always holds
// the last accepted iterate.
NewtonStatus newton(const SolverProblem& prob, const SolverOptions& opts, double tol, Differentiator& diff,
                    NewtonState& st, StageLog& log, std::string& msg) {
  const long P = prob.grid.size();
  while (st.cur.sup > tol) {
    if (log.iterations >= opts.max_iterations) {
      msg = "solve: no convergence after " + std::to_string(opts.max_iterations) + " iterations (residual " +
            fmt(st.cur.sup) + ")";
      return NewtonStatus::Budget;
    }
    std::unique_ptr<LinearizedOperator> op;
    try {
      op = std::make_unique<LinearizedOperator>(prob, st.omega, st.b);
    } catch (const SolverError& e) {
      msg = e.what();
      return NewtonStatus::Breakdown;
    } catch (const ConeViolation& e) {
      msg = e.what();
      return NewtonStatus::Breakdown;
    }
    const BorderedSystem sys(*op);
    Eigen::GMRES<BorderedSystem, MeanCoefficientPreconditioner> gmres;
    gmres.set_restart(opts.gmres_restart);
    gmres.setMaxIterations(opts.max_linear_iterations);
    gmres.setTolerance(opts.linear_tolerance);
    gmres.compute(sys);
    Eigen::VectorXd rhs(P + 1);
    for (long p = 0; p < P; ++p) rhs[p] = -st.cur.residual[p];
    rhs[P] = 0.0;
    const Eigen::VectorXd x = gmres.solve(rhs);
    log.linear_iterations.push_back(static_cast<int>(gmres.iterations()));

    ScalarField v(prob.grid);
    std::copy(x.data(), x.data() + P, v.values.begin());
    const double db = x[P];
    const FormField hv = quaternionic_hessian(v, diff);

    double step = opts.initial_step;
    for (;;) {
      FormField trial = add_scaled(st.omega, hv, step);
      TrialEval te = evaluate(prob, trial, st.b + step * db);
      const bool inside = te.cone_slack > opts.cone_safeguard && te.ellipticity > 0.0;
      if (inside && te.sup < (1.0 - 1e-4 * step) * st.cur.sup) {
        for (long p = 0; p < P; ++p) st.u[p] += step * v[p];
        st.b += step * db;
        st.omega = std::move(trial);
        st.cur = std::move(te);
        break;
      }
      step *= opts.backtrack;
      if (step < opts.min_step) {
        msg = "solve: damping underflow at iteration " + std::to_string(log.iterations + 1) + " (residual " +
              fmt(st.cur.sup) + ")";
        return NewtonStatus::Breakdown;
      }
    }
    ++log.iterations;
    log.step_lengths.push_back(step);
    log.residual_history.push_back(st.cur.sup);
  }
  return NewtonStatus::Converged;
}

void append(SolveResult& res, const StageLog& log) {
  res.residual_history.insert(res.residual_history.end(), log.residual_history.begin(), log.residual_history.end());
  res.linear_iterations.insert(res.linear_iterations.end(), log.linear_iterations.begin(),
                               log.linear_iterations.end());
  res.step_lengths.insert(res.step_lengths.end(), log.step_lengths.begin(), log.step_lengths.end());
  res.iterations += log.iterations;
}

// Stage tolerance of the intermediate continuation problems.
constexpr double kStageTolerance = 1e-6;
constexpr double kMinContinuationStep = 1.0 / 1024;

}  // namespace

SolveResult solve(const SolverProblem& prob, const SolverOptions& opts) {
  prob.validate();
  opts.validate();
  const TorusGrid& g = prob.grid;

  SolveResult res;
  const double b0 = 0.0 - prob.F.mean();
  res.cone_condition_initial = check_cone_condition(prob.omega0, prob.F, prob.k, prob.l, b0);
  if (!res.cone_condition_initial.holds) {
    res.warnings.push_back("cone condition fails at the initial constant b = " + fmt(b0) + " (min margin " +
                           fmt(res.cone_condition_initial.min_margin) + " at point " +
                           std::to_string(res.cone_condition_initial.worst_point) + ")");
  }

  Differentiator diff(g, prob.backend);
  const auto start = [&](const SolverProblem& q) {
    NewtonState st{ScalarField(g, 0.0), b0, prob.omega0, {}};
    st.cur = evaluate(q, st.omega, st.b);
    return st;
  };
  NewtonState st = start(prob);
  if (!(st.cur.cone_slack > 0.0)) throw ConeViolation("solve: Omega0 is not in Gamma_k");
  res.residual_history.push_back(st.cur.sup);

  auto finish = [&]() {
    res.u = normalize_sup(st.u);
    res.b = st.b;
    res.cone = in_gamma_k_field(st.omega, prob.k);
    res.ellipticity = st.cur.ellipticity;
    res.cone_condition_final = check_cone_condition(prob.omega0, prob.F, prob.k, prob.l, st.b);
  };
  auto fail = [&](const std::string& what) {
    finish();
    return SolverError(what, std::make_shared<const SolveResult>(res));
  };

  std::string msg;
  StageLog log;
  NewtonStatus status = newton(prob, opts, opts.tolerance, diff, st, log, msg);
  append(res, log);
  const bool constant_F = prob.F.max() == prob.F.min();
  if (status == NewtonStatus::Breakdown && !constant_F) {
    // Continuation in the amplitude of F about its mean, starting from the
    // same initial guess: F_s = mean F + s (F - mean F), s from 0 to 1.
    const auto stage_problem = [&](double s) {
      SolverProblem q = prob;
      for (long p = 0; p < g.size(); ++p) q.F[p] = -b0 + s * (prob.F[p] + b0);
      return q;
    };
    const std::string direct = msg;
    SolveResult cont;
    NewtonState accepted = start(stage_problem(0.0));
    cont.residual_history.push_back(accepted.cur.sup);
    double done = 0.0, ds = 0.5;
    bool ok = true;
    {
      StageLog l0;
      const auto q0 = stage_problem(0.0);
      ok = newton(q0, opts, kStageTolerance, diff, accepted, l0, msg) == NewtonStatus::Converged;
      if (ok) append(cont, l0);
    }
    while (ok && done < 1.0) {
      const double s = std::min(1.0, done + ds);
      const auto q = stage_problem(s);
      NewtonState trial = accepted;
      trial.cur = evaluate(q, trial.omega, trial.b);
      StageLog ls;
      if (trial.cur.cone_slack > 0.0 &&
          newton(q, opts, s < 1.0 ? kStageTolerance : opts.tolerance, diff, trial, ls, msg) ==
              NewtonStatus::Converged) {
        accepted = std::move(trial);
        append(cont, ls);
        cont.continuation.push_back(s);
        done = s;
        ds = std::min(0.5, 2 * ds);
      } else {
        ds *= 0.5;
        if (ds < kMinContinuationStep) {
          msg = "solve: continuation in F stalled at s = " + fmt(done) + " after direct Newton failed (" + direct + ")";
          ok = false;
        }
      }
    }
    if (ok) {
      cont.cone_condition_initial = res.cone_condition_initial;
      cont.warnings = res.warnings;
      cont.warnings.push_back("direct Newton failed (" + direct + "); solved by continuation in F over " +
                              std::to_string(cont.continuation.size()) + " stages");
      res = std::move(cont);
      st = std::move(accepted);
      status = NewtonStatus::Converged;
    } else if (done > 0.0) {
      msg = "solve: continuation in F stalled at s = " + fmt(done) + " after direct Newton failed (" + direct + ")";
    } else {
      msg = direct;
    }
  }
  if (status != NewtonStatus::Converged) throw fail(msg);

  res.converged = true;
  finish();
  if (!res.cone_condition_final.holds) {
    res.warnings.push_back("cone condition fails at the converged b = " + fmt(st.b));
  }
  return res;
}

SolveResult solve(const SolverConfig& cfg) { return solve(cfg.build(), cfg.options); }

}  // namespace hkt
