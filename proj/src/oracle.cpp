#include "hkt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hkt {

namespace {

constexpr std::uint64_t kStreamSalt = 0x9e3779b97f4a7c15ULL;
constexpr int kRejectionBudget = 1000;

std::vector<double> to_vec(const EigenTuple& t) { return t.values(); }

VerificationReport make_report(const std::string& id, const SampleSpec& spec) {
  spec.validate();
  VerificationReport r;
  r.proposition = id;
  r.spec = spec;
  return r;
}

SampleSpec with_seed(SampleSpec spec, std::uint64_t seed) {
  spec.seed = seed;
  return spec;
}

// Equality a == b recorded as a one-sided check on the scaled defect.
void record_equal(VerificationReport& r, double a, double b, double scale) {
  r.record(0.0, std::abs(a - b) / (scale + 1.0));
}

bool segment_in_cone(std::span<const double> a, std::span<const double> b, int k) {
  std::vector<double> p(a.size());
  for (int s = 0; s <= 10; ++s) {
    const double t = s / 10.0;
    for (size_t i = 0; i < a.size(); ++i) p[i] = (1 - t) * a[i] + t * b[i];
    if (!in_gamma_k(p, k)) return false;
  }
  return true;
}

EigenTuple deleted_eigenvalues(const HyperhermitianMatrix& a, int i) {
  const int idx[1] = {i};
  return eigenvalues(a.delete_indices(idx));
}

}  // namespace

void SampleSpec::validate() const {
  if (count < 1) throw std::invalid_argument("SampleSpec: count must be >= 1");
  if (n < 1 || k < 1 || k > n) throw std::invalid_argument("SampleSpec: need 1 <= k <= n");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("SampleSpec: scale must be positive");
}

double normalized_slack(double lhs, double rhs) {
  return (lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1.0);
}

void VerificationReport::record(double lhs, double rhs) {
  ++checks;
  const double slack = normalized_slack(lhs, rhs);
  worst_margin = std::min(worst_margin, lhs - rhs);
  min_slack = std::min(min_slack, slack);
  if (!(slack > -kStrictnessMargin)) ++failures;
}

void VerificationReport::merge(const VerificationReport& other) {
  samples += other.samples;
  checks += other.checks;
  failures += other.failures;
  worst_margin = std::min(worst_margin, other.worst_margin);
  min_slack = std::min(min_slack, other.min_slack);
}

Quaternion random_quaternion(Rng& rng) {
  std::normal_distribution<double> g;
  const double w = g(rng), x = g(rng), y = g(rng), z = g(rng);
  return {w, x, y, z};
}

QuatMatrix random_unitary(int n, Rng& rng) {
  QuatMatrix c(n);
  for (int col = 0; col < n; ++col) {
    for (int attempt = 0;; ++attempt) {
      std::vector<Quaternion> v(static_cast<size_t>(n));
      for (auto& q : v) q = random_quaternion(rng);
      for (int pass = 0; pass < 2; ++pass) {
        for (int p = 0; p < col; ++p) {
          Quaternion ip;
          for (int r = 0; r < n; ++r) ip += c(r, p).conj() * v[static_cast<size_t>(r)];
          for (int r = 0; r < n; ++r) v[static_cast<size_t>(r)] -= c(r, p) * ip;
        }
      }
      double nrm = 0;
      for (const auto& q : v) nrm += q.norm2();
      nrm = std::sqrt(nrm);
      if (nrm > 1e-6) {
        for (int r = 0; r < n; ++r) c(r, col) = v[static_cast<size_t>(r)] * (1.0 / nrm);
        break;
      }
      if (attempt > 100) throw SamplingError("random_unitary: degenerate Gaussian draws");
    }
  }
  return c;
}

HyperhermitianMatrix random_hyperhermitian(int n, Rng& rng, double amplitude) {
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  HyperhermitianMatrix a(n);
  for (int i = 0; i < n; ++i) {
    a.set_diagonal(i, u(rng));
    for (int j = i + 1; j < n; ++j) {
      const double w = u(rng), x = u(rng), y = u(rng), z = u(rng);
      a.set(i, j, {w, x, y, z});
    }
  }
  return a;
}

std::vector<EigenTuple> sample_gamma_k(const SampleSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<EigenTuple> out;
  out.reserve(static_cast<size_t>(spec.count));
  std::vector<double> v(static_cast<size_t>(spec.n));
  for (int s = 0; s < spec.count; ++s) {
    bool accepted = false;
    for (int attempt = 0; attempt < kRejectionBudget && !accepted; ++attempt) {
      double nrm = 0;
      for (double& x : v) {
        x = g(rng);
        nrm += x * x;
      }
      nrm = std::sqrt(nrm);
      const double radius = spec.scale * std::pow(unif(rng), 1.0 / spec.n);
      for (double& x : v) x = 1.0 + radius * x / nrm;
      if (in_gamma_k(v, spec.k)) accepted = true;
    }
    if (!accepted) throw SamplingError("sample_gamma_k: rejection budget exhausted");
    out.emplace_back(v);
  }
  return out;
}

std::vector<HyperhermitianSample> sample_hyperhermitian_gamma_k(const SampleSpec& spec) {
  const auto tuples = sample_gamma_k(spec);
  Rng rng(spec.seed ^ kStreamSalt);
  std::vector<HyperhermitianSample> out;
  out.reserve(tuples.size());
  for (const auto& t : tuples) {
    const QuatMatrix u = random_unitary(spec.n, rng);
    const QuatMatrix m = u * QuatMatrix::diagonal(t.span()) * u.adjoint();
    out.push_back({HyperhermitianMatrix(m, 1e-9), t});
  }
  return out;
}

std::vector<double> push_toward_boundary(std::span<const double> lambda, int k, double depth) {
  if (!in_gamma_k(lambda, k)) throw ConeViolation("push_toward_boundary: start outside Gamma_k");
  const int n = static_cast<int>(lambda.size());
  std::vector<double> p(lambda.begin(), lambda.end());
  auto shifted = [&](double s) {
    for (int i = 0; i < n; ++i) p[static_cast<size_t>(i)] = lambda[static_cast<size_t>(i)] - s;
    return in_gamma_k(p, k);
  };
  double lo = 0.0;
  double hi = sigma(lambda, 1) / n;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (shifted(mid) ? lo : hi) = mid;
  }
  shifted(depth * lo);
  return p;
}

VerificationReport verify_identities(const SampleSpec& spec) {
  auto r = make_report("sigma_identities", spec);
  Rng rng(spec.seed);
  std::uniform_real_distribution<double> u(-spec.scale, spec.scale);
  const int n = spec.n;
  std::vector<double> lam(static_cast<size_t>(n));
  for (int s = 0; s < spec.count; ++s) {
    for (double& x : lam) x = u(rng);
    ++r.samples;
    for (int k = 0; k <= n; ++k) {
      const double sk = sigma(lam, k);
      const double scale = n * sigma_scale(lam, k);
      double weighted = 0, excl_sum = 0;
      for (int i = 0; i < n; ++i) {
        const double li = lam[static_cast<size_t>(i)];
        const double lower = sigma_excl(lam, k - 1, i);
        record_equal(r, sk, sigma_excl(lam, k, i) + li * lower, scale);
        weighted += li * lower;
        excl_sum += sigma_excl(lam, k, i);
      }
      if (k >= 1) record_equal(r, weighted, k * sk, scale);
      record_equal(r, excl_sum, (n - k) * sk, scale);
    }
  }
  return r;
}

VerificationReport verify_newton_maclaurin(const SampleSpec& spec) {
  auto r = make_report("newton_maclaurin", spec);
  const int n = spec.n, k = spec.k;
  for (const auto& t : sample_gamma_k(spec)) {
    ++r.samples;
    const auto e = sigma_all(t.span());
    auto norm = [&](int m) { return e[static_cast<size_t>(m)] / binomial(n, m); };
    for (int l = 0; l < k; ++l) {
      const double lhs = std::pow(norm(k) / norm(l), 1.0 / (k - l));
      for (int rr = 1; rr <= k; ++rr) {
        for (int s = 0; s < rr && s <= l; ++s) {
          const double rhs = std::pow(norm(rr) / norm(s), 1.0 / (rr - s));
          r.record(rhs, lhs);
        }
      }
    }
  }
  return r;
}

VerificationReport verify_monotonicity(const SampleSpec& spec) {
  auto r = make_report("quotient_monotonicity", spec);
  const int n = spec.n, k = spec.k;
  for (const auto& t : sample_gamma_k(spec)) {
    ++r.samples;
    const auto lam = to_vec(t);
    const auto e = sigma_all(lam);
    for (int l = 0; l < k; ++l) {
      const double q0 = e[static_cast<size_t>(k)] / e[static_cast<size_t>(l)];
      for (int i = 0; i < n; ++i) {
        const double h = 1e-5 * (1.0 + std::abs(lam[static_cast<size_t>(i)]));
        auto plus = lam, minus = lam;
        plus[static_cast<size_t>(i)] += h;
        minus[static_cast<size_t>(i)] -= h;
        // Increasing lambda_i stays in the cone; decreasing may leave it.
        const double qp = quotient(plus, k, l);
        const double dq = in_gamma_k(minus, k) ? (qp - quotient(minus, k, l)) / (2 * h) : (qp - q0) / h;
        r.record(dq, 0.0);
        // Analytic numerator of the partial derivative.
        const double a = sigma_excl(lam, k - 1, i) * e[static_cast<size_t>(l)];
        const double b = e[static_cast<size_t>(k)] * sigma_excl(lam, l - 1, i);
        r.record(a, b);
      }
    }
  }
  return r;
}

VerificationReport verify_concavity(const SampleSpec& spec) {
  auto r = make_report("quotient_concavity", spec);
  const int k = spec.k;
  const auto pool = sample_gamma_k(with_seed(spec, spec.seed));
  const auto partners = sample_gamma_k(with_seed(spec, spec.seed ^ kStreamSalt));
  std::vector<double> mid(static_cast<size_t>(spec.n));
  for (size_t s = 0; s < pool.size(); ++s) {
    const auto& a = pool[s].values();
    // Partner candidates are cycled if a segment leaves the cone.
    const std::vector<double>* b = nullptr;
    for (size_t off = 0; off < partners.size(); ++off) {
      const auto& cand = partners[(s + off) % partners.size()].values();
      if (segment_in_cone(a, cand, k)) {
        b = &cand;
        break;
      }
    }
    if (!b) continue;
    ++r.samples;
    for (size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (a[i] + (*b)[i]);
    for (int l = 0; l < k; ++l) {
      const double fm = quotient_root(mid, k, l);
      const double avg = 0.5 * (quotient_root(a, k, l) + quotient_root(*b, k, l));
      r.record(fm, avg);
    }
  }
  return r;
}

VerificationReport verify_garding(const SampleSpec& spec) {
  auto r = make_report("garding", spec);
  const int k = spec.k;
  const auto lams = sample_gamma_k(with_seed(spec, spec.seed));
  const auto mus = sample_gamma_k(with_seed(spec, spec.seed ^ kStreamSalt));
  for (size_t s = 0; s < lams.size(); ++s) {
    ++r.samples;
    const double lhs = garding_pairing(mus[s].span(), lams[s].span(), k);
    const double rhs = k * std::pow(sigma(mus[s].span(), k), 1.0 / k) *
                       std::pow(sigma(lams[s].span(), k), 1.0 - 1.0 / k);
    r.record(lhs, rhs);
    r.record(lhs, 0.0);
  }
  return r;
}

VerificationReport verify_minor_quotient_tuple(const SampleSpec& spec) {
  auto r = make_report("minor_quotient_tuple", spec);
  const int n = spec.n, k = spec.k;
  int s = 0;
  for (const auto& t : sample_gamma_k(spec)) {
    ++r.samples;
    const auto lam = (s++ % 4 == 3) ? push_toward_boundary(t.span(), k, 0.999) : to_vec(t);
    const auto e = sigma_all(lam);
    for (int l = 1; l < k; ++l) {
      const double rhs = e[static_cast<size_t>(k)] / e[static_cast<size_t>(l)];
      for (int i = 0; i < n; ++i) {
        r.record(sigma_excl(lam, k - 1, i) / sigma_excl(lam, l - 1, i), rhs);
      }
    }
  }
  return r;
}

VerificationReport verify_deletion_cone(const SampleSpec& spec) {
  auto r = make_report("deletion_cone", spec);
  const int n = spec.n, k = spec.k;
  if (n < 2 || k < 2) return r;
  for (const auto& smp : sample_hyperhermitian_gamma_k(spec)) {
    ++r.samples;
    for (int i = 0; i < n; ++i) {
      const auto e = sigma_all(deleted_eigenvalues(smp.matrix, i).span());
      for (int m = 1; m <= k - 1; ++m) r.record(e[static_cast<size_t>(m)], 0.0);
    }
  }
  return r;
}

VerificationReport verify_minor_quotient(const SampleSpec& spec) {
  auto r = make_report("minor_quotient", spec);
  const int n = spec.n, k = spec.k;
  if (k < 2) return r;
  auto samples = sample_hyperhermitian_gamma_k(spec);
  Rng rng(spec.seed ^ (kStreamSalt << 1));
  for (size_t s = 0; s < samples.size(); ++s) {
    ++r.samples;
    HyperhermitianMatrix a = samples[s].matrix;
    if (s % 4 == 3) {
      // Near-boundary variant: same eigenvector frame, shifted spectrum.
      const auto pushed = push_toward_boundary(samples[s].eigenvalues.span(), k, 0.999);
      const double shift = samples[s].eigenvalues[0] - *std::min_element(pushed.begin(), pushed.end());
      a -= shift * HyperhermitianMatrix::identity(n);
    }
    const auto e = sigma_all(eigenvalues(a).span());
    for (int i = 0; i < n; ++i) {
      const auto ed = sigma_all(deleted_eigenvalues(a, i).span());
      for (int l = 1; l < k; ++l) {
        const double lhs = ed[static_cast<size_t>(k) - 1] / ed[static_cast<size_t>(l) - 1];
        r.record(lhs, e[static_cast<size_t>(k)] / e[static_cast<size_t>(l)]);
      }
    }
  }
  return r;
}

VerificationReport verify_matrix_concavity(const SampleSpec& spec) {
  auto r = make_report("matrix_concavity", spec);
  const int k = spec.k;
  const auto as = sample_hyperhermitian_gamma_k(with_seed(spec, spec.seed));
  const auto bs = sample_hyperhermitian_gamma_k(with_seed(spec, spec.seed ^ kStreamSalt));
  auto f = [&](const std::vector<double>& e, int l) {
    return std::pow(e[static_cast<size_t>(k)] / e[static_cast<size_t>(l)], 1.0 / (k - l));
  };
  for (size_t s = 0; s < as.size(); ++s) {
    const auto& a = as[s].matrix;
    const HyperhermitianMatrix* b = nullptr;
    for (size_t off = 0; off < bs.size() && !b; ++off) {
      const auto& cand = bs[(s + off) % bs.size()].matrix;
      bool inside = true;
      for (int step = 0; step <= 10 && inside; ++step) {
        const double t = step / 10.0;
        inside = in_gamma_k(eigenvalues((1 - t) * a + t * cand).span(), k);
      }
      if (inside) b = &cand;
    }
    if (!b) continue;
    ++r.samples;
    const auto ea = sigma_all(eigenvalues(a).span());
    const auto eb = sigma_all(eigenvalues(*b).span());
    const auto em = sigma_all(eigenvalues(0.5 * (a + *b)).span());
    for (int l = 0; l < k; ++l) r.record(f(em, l), 0.5 * (f(ea, l) + f(eb, l)));
  }
  return r;
}

VerificationReport verify_schur_pairing(const SampleSpec& spec) {
  auto r = make_report("schur_pairing", spec);
  const int n = spec.n, k = spec.k;
  const auto lams = sample_gamma_k(with_seed(spec, spec.seed));
  const auto bs = sample_hyperhermitian_gamma_k(with_seed(spec, spec.seed ^ kStreamSalt));
  for (size_t s = 0; s < lams.size(); ++s) {
    ++r.samples;
    const auto w = sigma_excl_all(lams[s].span(), k - 1);
    const auto mu = eigenvalues(bs[s].matrix);
    double lhs = 0, rhs = 0;
    for (int i = 0; i < n; ++i) {
      lhs += bs[s].matrix(i, i).w * w[static_cast<size_t>(i)];
      rhs += mu[i] * w[static_cast<size_t>(i)];
    }
    r.record(lhs, rhs);
    r.record(rhs, 0.0);
  }
  return r;
}

std::vector<VerificationReport> verify_all(const SampleSpec& spec) {
  return {verify_identities(spec),       verify_newton_maclaurin(spec), verify_monotonicity(spec),
          verify_concavity(spec),        verify_garding(spec),          verify_minor_quotient_tuple(spec),
          verify_deletion_cone(spec),    verify_minor_quotient(spec),   verify_matrix_concavity(spec),
          verify_schur_pairing(spec)};
}

}  // namespace hkt
