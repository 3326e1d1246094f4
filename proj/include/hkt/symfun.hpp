#pragma once

#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace hkt {

class ConeViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Eigenvalue tuple, always stored ascending.
class EigenTuple {
 public:
  EigenTuple() = default;
  explicit EigenTuple(std::vector<double> values);
  EigenTuple(std::initializer_list<double> values) : EigenTuple(std::vector<double>(values)) {}

  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[static_cast<size_t>(i)]; }
  std::span<const double> span() const { return values_; }
  operator std::span<const double>() const { return values_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

double binomial(int n, int k);

// All elementary symmetric functions sigma_0..sigma_n of lambda.
std::vector<double> sigma_all(std::span<const double> lambda);

// sigma_k(lambda); sigma_{-1} is 0 so that l = 0 terms vanish.
double sigma(std::span<const double> lambda, int k);

// sigma_k of lambda with entry i set to zero (0-based i).
double sigma_excl(std::span<const double> lambda, int k, int i);
// sigma_k(lambda|i) for every i.
std::vector<double> sigma_excl_all(std::span<const double> lambda, int k);

// sigma_k(|lambda|): the sum of the absolute values of the monomials of
// sigma_k(lambda), used as the scale for relative margins.
double sigma_scale(std::span<const double> lambda, int k);

// sigma_i(lambda) > 0 for 1 <= i <= k. Strict, no tolerance.
bool in_gamma_k(std::span<const double> lambda, int k);
// min over 1 <= i <= k of sigma_i(lambda).
double gamma_k_slack(std::span<const double> lambda, int k);

// sigma_k / sigma_l on Gamma_k; throws ConeViolation outside.
double quotient(std::span<const double> lambda, int k, int l);
// (sigma_k / sigma_l)^(1 / (k - l)).
double quotient_root(std::span<const double> lambda, int k, int l);

// sum_i mu_i sigma_{k-1}(lambda|i); requires lambda, mu in Gamma_k.
double garding_pairing(std::span<const double> mu, std::span<const double> lambda, int k);

}  // namespace hkt
