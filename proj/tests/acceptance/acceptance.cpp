// Acceptance run: one PASS/FAIL line per criterion, exit 0 only if all pass.
//
//   hkt_acceptance --hktq <path to hktq> [--work <scratch dir>]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <CLI11.hpp>

#include "hkt/flat_model.hpp"
#include "hkt/hyperhermitian.hpp"
#include "hkt/oracle.hpp"
#include "hkt/probe.hpp"
#include "hkt/solver.hpp"

namespace fs = std::filesystem;
using namespace hkt;

namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;

void report(int id, const std::string& title, const Outcome& o) {
  std::printf("[%s] criterion %d: %s -- %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

// 1. |P|^4 against det of the real 4n x 4n form.
Outcome moore_oracle() {
  const auto t0 = Clock::now();
  Rng rng(1001);
  double worst = 0;
  for (int s = 0; s < 1000; ++s) {
    const int n = 2 + s % 4;
    const auto a = random_hyperhermitian(n, rng);
    const double p = moore_det(a);
    const double det = realize(a).determinant();
    worst = std::max(worst, std::abs(std::pow(std::abs(p), 4) - det) / std::abs(det));
  }
  bool id_exact = true;
  for (int n = 1; n <= 5; ++n) id_exact = id_exact && moore_det(HyperhermitianMatrix::identity(n)) == 1.0;
  const double t = seconds_since(t0);
  return {worst <= 1e-8 && id_exact && t < 30,
          fmt("max rel err %.2e (tol 1e-8), P(Id) == 1 exactly: %s, %.2f s (limit 30 s)", worst,
              id_exact ? "yes" : "no", t)};
}

// 2. Eigenvalue, minor-sum and characteristic-polynomial routes for sigma_k.
Outcome sigma_routes() {
  Rng rng(1002);
  double worst = 0;
  for (int s = 0; s < 1000; ++s) {
    const int n = 1 + s % 5;
    const auto a = random_hyperhermitian(n, rng);
    const auto lam = eigenvalues(a);
    std::vector<double> abs_lam(lam.span().begin(), lam.span().end());
    for (double& v : abs_lam) v = std::abs(v);
    for (int k = 0; k <= n; ++k) {
      const double e = sigma_k_matrix(a, k);
      const double m = sigma_k_by_minors(a, k);
      const double c = sigma_k_by_char_poly(a, k);
      const double scale = std::max({std::abs(e), std::abs(m), std::abs(c), sigma_all(abs_lam)[static_cast<size_t>(k)]});
      const double err = std::max({std::abs(e - m), std::abs(e - c), std::abs(m - c)}) / scale;
      worst = std::max(worst, err);
    }
  }
  return {worst <= 1e-8, fmt("1000 samples, n = 1..5, all k: max rel disagreement %.2e (tol 1e-8)", worst)};
}

// 3. Randomized inequality oracle.
Outcome inequality_oracle() {
  const auto t0 = Clock::now();
  long checks = 0, fails = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  int reports = 0;
  for (int n = 1; n <= 5; ++n) {
    for (int k = 1; k <= n; ++k) {
      SampleSpec s;
      s.n = n;
      s.k = k;
      s.count = 10000;
      s.seed = 24301;
      for (const auto& r : verify_all(s)) {
        checks += r.checks;
        fails += r.failures;
        min_slack = std::min(min_slack, r.min_slack);
        ++reports;
      }
    }
  }
  const double t = seconds_since(t0);
  return {fails == 0 && t < 300,
          fmt("%d reports, %ld checks at 10^4 samples each, %ld failures, min normalized slack %.2e, %.1f s "
              "(limit 300 s)",
              reports, checks, fails, min_slack, t)};
}

// 4. Quadratic patch and backend convergence.
Outcome hessian_patch() {
  const TorusGrid g(2, {4, 5, 6, 7}, 16);
  const auto u = sample_field(g, [](const std::vector<double>& x) {
    double s = 0;
    for (int m = 0; m < 4; ++m) s += (1 - std::cos(2 * kPi * x[static_cast<size_t>(4 + m)])) / (2 * kPi * kPi);
    return s;
  });
  HyperhermitianMatrix want(2);
  want.set_diagonal(1, 4.0);
  const double patch = (quaternionic_hessian(u, DerivativeBackend::Spectral)[0] - want).norm();

  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(8, 8);
  for (int m = 0; m < 4; ++m) d(4 + m, 4 + m) = 2.0;
  const double exact = (hessian_from_real(d) - want).norm();

  const auto fn = [](const std::vector<double>& x) {
    return 0.1 * std::sin(2 * kPi * x[0]) * std::cos(2 * kPi * x[5]) + 0.05 * std::sin(2 * kPi * (x[0] + x[1]));
  };
  std::vector<double> err;
  for (int N : {8, 16, 32}) {
    const TorusGrid gg(2, {0, 1, 5}, N);
    const auto f = sample_field(gg, fn);
    const auto hs = quaternionic_hessian(f, DerivativeBackend::Spectral);
    const auto hc = quaternionic_hessian(f, DerivativeBackend::Central);
    double e = 0;
    for (long p = 0; p < gg.size(); ++p) e = std::max(e, (hs[p] - hc[p]).norm());
    err.push_back(e);
  }
  const double o1 = std::log2(err[0] / err[1]), o2 = std::log2(err[1] / err[2]);
  const bool pass = patch <= 1e-12 && exact == 0.0 && std::abs(o1 - 2) <= 0.1 && std::abs(o2 - 2) <= 0.1;
  return {pass, fmt("spectral patch err %.2e (tol 1e-12), exact map err %.1e, orders %.3f %.3f (2.0 +- 0.1)", patch,
                    exact, o1, o2)};
}

SolverConfig solver_case(int n, int k, int l, std::vector<int> axes, const std::string& F) {
  SolverConfig c;
  c.n = n;
  c.k = k;
  c.l = l;
  c.axes = std::move(axes);
  c.points_per_axis = 16;
  c.F = F;
  return c;
}

// 5. Constant right-hand side.
Outcome constant_solve() {
  double sup_u = 0, b_err = 0;
  int iters = 0;
  int cases = 0;
  for (const auto& [n, k, l] : std::vector<std::tuple<int, int, int>>{{1, 1, 0}, {2, 2, 1}, {3, 2, 0}, {3, 3, 2}}) {
    for (double c : {0.3, -1.2}) {
      const auto r = solve(solver_case(n, k, l, n == 1 ? std::vector<int>{0, 1} : std::vector<int>{0, 4}, fmt("%.17g", c)));
      sup_u = std::max(sup_u, r.u.sup_norm());
      b_err = std::max(b_err, std::abs(r.b + c));
      iters = std::max(iters, r.iterations);
      ++cases;
    }
  }
  return {sup_u <= 1e-12 && b_err <= 1e-12 && iters <= 2,
          fmt("%d cases: max sup|u| %.1e, max |b + c| %.1e (tol 1e-12), max iterations %d (limit 2)", cases, sup_u,
              b_err, iters)};
}

struct SolvedCase {
  std::string name;
  SolverConfig cfg;
  SolveResult result;
  bool ok = false;
};

// 6. Convergence on the sinusoidal family.
Outcome convergence(std::vector<SolvedCase>& solved) {
  std::vector<std::pair<std::string, SolverConfig>> cases;
  for (double A : {0.1, 0.5}) {
    const std::string F = fmt("%g * sin(2 * pi * x1)", A);
    cases.push_back({fmt("n=1 k=1 l=0 A=%g", A), solver_case(1, 1, 0, {0, 1, 2, 3}, F)});
    for (int k = 1; k <= 2; ++k) {
      for (int l = 0; l < k; ++l) {
        cases.push_back({fmt("n=2 k=%d l=%d A=%g", k, l, A), solver_case(2, k, l, {0, 1, 4, 5}, F)});
      }
    }
    for (int k = 1; k <= 3; ++k) {
      for (int l = 0; l < k; ++l) {
        cases.push_back({fmt("n=3 k=%d l=%d A=%g", k, l, A), solver_case(3, k, l, {0, 4, 8}, F)});
      }
    }
  }
  int passed = 0;
  double worst_res = 0, worst_ratio = 0, worst_time = 0, min_margin = std::numeric_limits<double>::infinity();
  std::string failed;
  for (auto& [name, cfg] : cases) {
    SolvedCase sc{name, cfg, {}, false};
    const auto t0 = Clock::now();
    try {
      sc.result = solve(cfg);
    } catch (const std::exception& e) {
      failed += " [" + name + ": " + e.what() + "]";
      solved.push_back(sc);
      continue;
    }
    const double t = seconds_since(t0);
    const auto& h = sc.result.residual_history;
    const double res = h.back();
    const double ratio = h.size() >= 2 ? h[h.size() - 1] / h[h.size() - 2] : 0.0;
    const bool ok = sc.result.converged && res <= 1e-9 && sc.result.cone.inside && sc.result.cone.min_slack > 0 &&
                    ratio <= 0.1 && t < 300;
    worst_res = std::max(worst_res, res);
    worst_ratio = std::max(worst_ratio, ratio);
    worst_time = std::max(worst_time, t);
    min_margin = std::min(min_margin, sc.result.cone.min_slack);
    sc.ok = ok;
    if (ok) {
      ++passed;
    } else {
      failed += " [" + name + fmt(": res %.2e ratio %.2e margin %.2e %.1f s]", res, ratio, sc.result.cone.min_slack, t);
    }
    solved.push_back(std::move(sc));
  }
  const int total = static_cast<int>(cases.size());
  return {passed == total,
          fmt("%d/%d cases at N=16: max residual %.2e (tol 1e-9), max tail ratio %.2e (limit 0.1), min cone "
              "margin %.2e, slowest %.1f s (limit 300 s)",
              passed, total, worst_res, worst_ratio, min_margin, worst_time) +
              failed};
}

// 7. Estimate-chain probe on the converged cases that satisfy the cone condition.
Outcome estimate_chain(const std::vector<SolvedCase>& solved) {
  const std::vector<double> ps{4, 8, 16, 32, 64};
  int probed = 0, mandatory_ok = 0, cherrier_ok = 0;
  double min_lemma = std::numeric_limits<double>::infinity();
  double min_hom = std::numeric_limits<double>::infinity(), min_energy = min_hom;
  double worst_growth = 0;
  std::string failed;
  for (const auto& sc : solved) {
    if (!sc.ok || !sc.result.cone_condition_final.holds) continue;
    ++probed;
    const auto rep = probe(sc.cfg.build(), sc.result.u, sc.result.b, ps, sc.name);
    bool lemma_ok = true;
    for (const auto& m : rep.lemma.margins) {
      min_lemma = std::min(min_lemma, m.min_margin);
      lemma_ok = lemma_ok && m.failures == 0 && m.min_margin > 0;
    }
    bool slack_ok = true;
    for (const auto& h : rep.integrals.homotopy) {
      min_hom = std::min(min_hom, h.min_slack());
      slack_ok = slack_ok && h.min_slack() >= -1e-6;
    }
    for (const auto& e : rep.integrals.energy) {
      min_energy = std::min(min_energy, e.slack);
      slack_ok = slack_ok && e.slack >= -1e-6;
    }
    if (lemma_ok && slack_ok) ++mandatory_ok;
    // Within a factor two of C(4) in either direction.
    const double c4 = rep.cherrier.front().ratio;
    double growth = 1.0;
    for (const auto& c : rep.cherrier) {
      growth = std::max({growth, c4 > 0 ? c.ratio / c4 : INFINITY, c.ratio > 0 ? c4 / c.ratio : INFINITY});
    }
    worst_growth = std::max(worst_growth, growth);
    if (growth <= 2.0) {
      ++cherrier_ok;
    } else {
      failed += " [" + sc.name + fmt(": C(64)/C(4) = %.2f]", rep.cherrier.back().ratio / c4);
    }
    if (!(lemma_ok && slack_ok)) failed += " [" + sc.name + ": lemma or integral slack]";
  }
  const bool pass = probed > 0 && mandatory_ok == probed && cherrier_ok == probed;
  return {pass, fmt("%d cases probed; lemma margins > 0 and slacks >= -1e-6 in %d/%d (min lemma margin %.2e, "
                    "min homotopy slack %.2e, min energy slack %.2e); Cherrier within 2x of C(4) in %d/%d "
                    "(worst factor %.2f)",
                    probed, mandatory_ok, probed, min_lemma, min_hom, min_energy, cherrier_ok, probed, worst_growth) +
                    failed};
}

int run(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// 8. Two runs of the same configuration tree give identical reports.
Outcome determinism(const std::string& hktq, const fs::path& work) {
  fs::remove_all(work);
  int bad_exit = 0;
  for (const char* run_dir : {"a", "b"}) {
    const fs::path dir = work / run_dir;
    fs::create_directories(dir);
    std::ofstream(dir / "solve.cfg") << "n = 2\nk = 2\nl = 1\naxes = 1,5\nN = 16\nF = 0.5 * sin(2 * pi * x1)\n";
    std::ofstream(dir / "probe.cfg") << "result = out/solve\np = 4,8,16\n";
    std::ofstream(dir / "verify.cfg") << "n = 1,2,3\nk = all\ncount = 500\nseed = 7\n";
    const std::string q = "\"" + hktq + "\" ";
    const auto cmd = [&](const std::string& sub, const std::string& cfg, const std::string& out) {
      return q + sub + " --quiet --seed 11 --config " + (dir / cfg).string() + " --out " + (dir / "out" / out).string();
    };
    bad_exit += run(cmd("solve", "solve.cfg", "solve")) != 0;
    bad_exit += run(cmd("probe", "probe.cfg", "probe")) != 0;
    bad_exit += run(cmd("verify", "verify.cfg", "verify")) != 0;
  }
  int compared = 0, differ = 0;
  std::vector<std::string> names;
  for (const auto& entry : fs::recursive_directory_iterator(work / "a" / "out")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), work / "a");
    ++compared;
    const auto other = work / "b" / rel;
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
      ++differ;
      names.push_back(rel.string());
    }
  }
  std::string detail = fmt("%d files compared (JSON, CSV, binary field), %d differ, %d nonzero exits", compared,
                           differ, bad_exit);
  for (const auto& n : names) detail += " " + n;
  return {compared == 6 && differ == 0 && bad_exit == 0, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string hktq;
  std::string work = (fs::temp_directory_path() / "hkt_acceptance").string();
  app.add_option("--hktq", hktq, "Path to the hktq executable")->required();
  app.add_option("--work", work, "Scratch directory");
  CLI11_PARSE(app, argc, argv);

  const auto t0 = Clock::now();
  report(1, "Moore determinant oracle", moore_oracle());
  report(2, "sigma_k triple agreement", sigma_routes());
  report(3, "inequality oracle", inequality_oracle());
  report(4, "Hessian patch and backend convergence", hessian_patch());
  report(5, "solver exactness on constant F", constant_solve());
  std::vector<SolvedCase> solved;
  report(6, "solver convergence", convergence(solved));
  report(7, "estimate-chain verification", estimate_chain(solved));
  report(8, "CLI determinism", determinism(hktq, work));
  std::printf("%d of 8 criteria failed (%.1f s)\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
