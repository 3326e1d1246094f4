#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "hkt/quaternion.hpp"
#include "hkt/symfun.hpp"

namespace hkt {

// Dense n x n quaternionic matrix, row-major.
class QuatMatrix {
 public:
  QuatMatrix() = default;
  explicit QuatMatrix(int n) : n_(n), data_(static_cast<size_t>(n) * n) {
    if (n < 0) throw std::invalid_argument("QuatMatrix: negative dimension");
  }

  static QuatMatrix identity(int n);
  static QuatMatrix diagonal(std::span<const double> d);

  int size() const { return n_; }
  Quaternion& operator()(int i, int j) { return data_[static_cast<size_t>(i) * n_ + j]; }
  const Quaternion& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * n_ + j]; }

  QuatMatrix adjoint() const;
  // Frobenius norm over all real components.
  double norm() const;
  // max |conj(a_ij) - a_ji| over i, j (covers the real-diagonal condition).
  double hyperhermitian_deviation() const;

  QuatMatrix& operator+=(const QuatMatrix& o);
  QuatMatrix& operator-=(const QuatMatrix& o);
  QuatMatrix& operator*=(double s);

 private:
  int n_ = 0;
  std::vector<Quaternion> data_;
};

QuatMatrix operator*(const QuatMatrix& a, const QuatMatrix& b);
QuatMatrix operator+(QuatMatrix a, const QuatMatrix& b);
QuatMatrix operator-(QuatMatrix a, const QuatMatrix& b);
QuatMatrix operator*(QuatMatrix a, double s);
QuatMatrix operator*(double s, QuatMatrix a);

// Quaternionic matrix A with conj(a_ij) = a_ji. Every mutation keeps the
// invariant: set(i, j, q) also writes conj(q) into (j, i).
class HyperhermitianMatrix {
 public:
  HyperhermitianMatrix() = default;
  explicit HyperhermitianMatrix(int n) : m_(n) {}

  // Validates that `m` is hyperhermitian to tol * (1 + |m|), then stores the
  // exactly symmetrized (m + m*) / 2.
  explicit HyperhermitianMatrix(const QuatMatrix& m, double tol = 1e-10);

  static HyperhermitianMatrix identity(int n);
  static HyperhermitianMatrix diagonal(std::span<const double> d);

  int size() const { return m_.size(); }
  const Quaternion& operator()(int i, int j) const { return m_(i, j); }
  void set(int i, int j, const Quaternion& q);
  void set_diagonal(int i, double v);

  const QuatMatrix& matrix() const { return m_; }
  double norm() const { return m_.norm(); }

  HyperhermitianMatrix& operator+=(const HyperhermitianMatrix& o);
  HyperhermitianMatrix& operator-=(const HyperhermitianMatrix& o);
  HyperhermitianMatrix& operator*=(double s);

  // Principal submatrix with the rows and columns listed in `removed` deleted.
  HyperhermitianMatrix delete_indices(std::span<const int> removed) const;
  // C* A C for any n x m quaternionic C (square here).
  HyperhermitianMatrix congruence(const QuatMatrix& c) const;

 private:
  QuatMatrix m_;
};

HyperhermitianMatrix operator+(HyperhermitianMatrix a, const HyperhermitianMatrix& b);
HyperhermitianMatrix operator-(HyperhermitianMatrix a, const HyperhermitianMatrix& b);
HyperhermitianMatrix operator*(double s, HyperhermitianMatrix a);

using RealizationMatrix = Eigen::MatrixXd;

// 4n x 4n real block matrix of A = A0 + i A1 + j A2 + k A3.
RealizationMatrix realize(const Eigen::MatrixXd& a0, const Eigen::MatrixXd& a1,
                          const Eigen::MatrixXd& a2, const Eigen::MatrixXd& a3);
RealizationMatrix realize(const QuatMatrix& a);
RealizationMatrix realize(const HyperhermitianMatrix& a);

// 2n x 2n complex hermitian form acting on (x1, conj(x2)) for x = x1 + x2 j.
Eigen::MatrixXcd complex_form(const QuatMatrix& a);

class EigenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SymplecticEigen {
  EigenTuple values;  // ascending
  QuatMatrix vectors; // columns orthonormal: C* C = Id and C* A C = diag(values)
};

enum class EigenRoute { Complex, Realization };

// Throws EigenError if the doubled (complex) or quadrupled (real) multiplicity
// pattern is violated beyond 1e-8 * (1 + |A|).
EigenTuple eigenvalues(const HyperhermitianMatrix& a, EigenRoute route = EigenRoute::Complex);
SymplecticEigen eigen_decompose(const HyperhermitianMatrix& a);

double moore_det(const HyperhermitianMatrix& a);

// Moore determinant of A with the rows/columns in `removed` deleted (0-based).
// Removing every index yields 1.
double principal_minor_det(const HyperhermitianMatrix& a, std::span<const int> removed);

double sigma_k_matrix(const HyperhermitianMatrix& a, int k);
// sum over |I| = n - k of principal_minor_det(A, I).
double sigma_k_by_minors(const HyperhermitianMatrix& a, int k);
// Coefficient of t^(n-k) in moore_det(A + t Id), by polynomial interpolation.
double sigma_k_by_char_poly(const HyperhermitianMatrix& a, int k);

// sum over I of t^|I| principal_minor_det(A, I).
double char_expansion(const HyperhermitianMatrix& a, double t);

}  // namespace hkt
