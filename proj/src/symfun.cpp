#include "hkt/symfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hkt {

namespace {

void check_order(int n, int k, int lo, const char* what) {
  if (k < lo || k > n) {
    throw std::out_of_range(std::string(what) + ": order " + std::to_string(k) +
                            " outside [" + std::to_string(lo) + ", " + std::to_string(n) + "]");
  }
}

// Coefficients of prod_i (1 + lambda_i t) up to degree k, skipping index `skip`.
double sigma_recurrence(std::span<const double> lambda, int k, int skip) {
  std::vector<double> e(static_cast<size_t>(k) + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < static_cast<int>(lambda.size()); ++i) {
    if (i == skip) continue;
    const double li = lambda[static_cast<size_t>(i)];
    for (int m = k; m >= 1; --m) e[static_cast<size_t>(m)] += li * e[static_cast<size_t>(m) - 1];
  }
  return e[static_cast<size_t>(k)];
}

}  // namespace

EigenTuple::EigenTuple(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("EigenTuple: empty tuple");
  std::sort(values_.begin(), values_.end());
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

std::vector<double> sigma_all(std::span<const double> lambda) {
  const int n = static_cast<int>(lambda.size());
  std::vector<double> e(static_cast<size_t>(n) + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int m = i + 1; m >= 1; --m) e[static_cast<size_t>(m)] += lambda[static_cast<size_t>(i)] * e[static_cast<size_t>(m) - 1];
  }
  return e;
}

double sigma(std::span<const double> lambda, int k) {
  const int n = static_cast<int>(lambda.size());
  check_order(n, k, -1, "sigma");
  if (k == -1) return 0.0;
  return sigma_recurrence(lambda, k, -1);
}

double sigma_excl(std::span<const double> lambda, int k, int i) {
  const int n = static_cast<int>(lambda.size());
  if (i < 0 || i >= n) throw std::out_of_range("sigma_excl: index " + std::to_string(i) + " out of range");
  check_order(n, k, -1, "sigma_excl");
  if (k == -1 || k == n) return 0.0;
  return sigma_recurrence(lambda, k, i);
}

std::vector<double> sigma_excl_all(std::span<const double> lambda, int k) {
  const int n = static_cast<int>(lambda.size());
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = sigma_excl(lambda, k, i);
  return out;
}

double sigma_scale(std::span<const double> lambda, int k) {
  std::vector<double> a(lambda.begin(), lambda.end());
  for (double& v : a) v = std::abs(v);
  return sigma(a, k);
}

bool in_gamma_k(std::span<const double> lambda, int k) {
  check_order(static_cast<int>(lambda.size()), k, 1, "in_gamma_k");
  const auto e = sigma_all(lambda);
  for (int i = 1; i <= k; ++i) {
    if (!(e[static_cast<size_t>(i)] > 0.0)) return false;
  }
  return true;
}

double gamma_k_slack(std::span<const double> lambda, int k) {
  check_order(static_cast<int>(lambda.size()), k, 1, "gamma_k_slack");
  const auto e = sigma_all(lambda);
  double s = e[1];
  for (int i = 2; i <= k; ++i) s = std::min(s, e[static_cast<size_t>(i)]);
  return s;
}

double quotient(std::span<const double> lambda, int k, int l) {
  const int n = static_cast<int>(lambda.size());
  if (!(0 <= l && l < k && k <= n)) throw std::invalid_argument("quotient: need 0 <= l < k <= n");
  if (!in_gamma_k(lambda, k)) throw ConeViolation("quotient: lambda not in Gamma_k");
  const auto e = sigma_all(lambda);
  return e[static_cast<size_t>(k)] / e[static_cast<size_t>(l)];
}

double quotient_root(std::span<const double> lambda, int k, int l) {
  return std::pow(quotient(lambda, k, l), 1.0 / (k - l));
}

double garding_pairing(std::span<const double> mu, std::span<const double> lambda, int k) {
  const int n = static_cast<int>(lambda.size());
  if (static_cast<int>(mu.size()) != n) throw std::invalid_argument("garding_pairing: size mismatch");
  if (!in_gamma_k(lambda, k) || !in_gamma_k(mu, k)) throw ConeViolation("garding_pairing: argument not in Gamma_k");
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += mu[static_cast<size_t>(i)] * sigma_excl(lambda, k - 1, i);
  return s;
}

}  // namespace hkt
