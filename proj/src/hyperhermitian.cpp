#include "hkt/hyperhermitian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace hkt {

QuatMatrix QuatMatrix::identity(int n) {
  QuatMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

QuatMatrix QuatMatrix::diagonal(std::span<const double> d) {
  QuatMatrix m(static_cast<int>(d.size()));
  for (int i = 0; i < m.size(); ++i) m(i, i) = d[static_cast<size_t>(i)];
  return m;
}

QuatMatrix QuatMatrix::adjoint() const {
  QuatMatrix r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r(i, j) = (*this)(j, i).conj();
  return r;
}

double QuatMatrix::norm() const {
  double s = 0.0;
  for (const auto& q : data_) s += q.norm2();
  return std::sqrt(s);
}

double QuatMatrix::hyperhermitian_deviation() const {
  double d = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) d = std::max(d, distance((*this)(i, j).conj(), (*this)(j, i)));
  return d;
}

QuatMatrix& QuatMatrix::operator+=(const QuatMatrix& o) {
  if (o.n_ != n_) throw std::invalid_argument("QuatMatrix: dimension mismatch");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

QuatMatrix& QuatMatrix::operator-=(const QuatMatrix& o) {
  if (o.n_ != n_) throw std::invalid_argument("QuatMatrix: dimension mismatch");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

QuatMatrix& QuatMatrix::operator*=(double s) {
  for (auto& q : data_) q *= s;
  return *this;
}

QuatMatrix operator*(const QuatMatrix& a, const QuatMatrix& b) {
  if (a.size() != b.size()) throw std::invalid_argument("QuatMatrix: dimension mismatch");
  const int n = a.size();
  QuatMatrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Quaternion s;
      for (int m = 0; m < n; ++m) s += a(i, m) * b(m, j);
      r(i, j) = s;
    }
  return r;
}

QuatMatrix operator+(QuatMatrix a, const QuatMatrix& b) { return a += b; }
QuatMatrix operator-(QuatMatrix a, const QuatMatrix& b) { return a -= b; }
QuatMatrix operator*(QuatMatrix a, double s) { return a *= s; }
QuatMatrix operator*(double s, QuatMatrix a) { return a *= s; }

HyperhermitianMatrix::HyperhermitianMatrix(const QuatMatrix& m, double tol) : m_(m.size()) {
  const double dev = m.hyperhermitian_deviation();
  if (dev > tol * (1.0 + m.norm())) {
    throw std::invalid_argument("HyperhermitianMatrix: input deviates from hyperhermitian by " +
                                std::to_string(dev));
  }
  const int n = m.size();
  for (int i = 0; i < n; ++i) {
    m_(i, i) = m(i, i).real();
    for (int j = i + 1; j < n; ++j) set(i, j, 0.5 * (m(i, j) + m(j, i).conj()));
  }
}

HyperhermitianMatrix HyperhermitianMatrix::identity(int n) {
  HyperhermitianMatrix a(n);
  for (int i = 0; i < n; ++i) a.set_diagonal(i, 1.0);
  return a;
}

HyperhermitianMatrix HyperhermitianMatrix::diagonal(std::span<const double> d) {
  HyperhermitianMatrix a(static_cast<int>(d.size()));
  for (int i = 0; i < a.size(); ++i) a.set_diagonal(i, d[static_cast<size_t>(i)]);
  return a;
}

void HyperhermitianMatrix::set(int i, int j, const Quaternion& q) {
  if (i == j) {
    set_diagonal(i, q.real());
    return;
  }
  m_(i, j) = q;
  m_(j, i) = q.conj();
}

void HyperhermitianMatrix::set_diagonal(int i, double v) { m_(i, i) = v; }

HyperhermitianMatrix& HyperhermitianMatrix::operator+=(const HyperhermitianMatrix& o) {
  m_ += o.m_;
  return *this;
}
HyperhermitianMatrix& HyperhermitianMatrix::operator-=(const HyperhermitianMatrix& o) {
  m_ -= o.m_;
  return *this;
}
HyperhermitianMatrix& HyperhermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

HyperhermitianMatrix operator+(HyperhermitianMatrix a, const HyperhermitianMatrix& b) { return a += b; }
HyperhermitianMatrix operator-(HyperhermitianMatrix a, const HyperhermitianMatrix& b) { return a -= b; }
HyperhermitianMatrix operator*(double s, HyperhermitianMatrix a) { return a *= s; }

HyperhermitianMatrix HyperhermitianMatrix::delete_indices(std::span<const int> removed) const {
  const int n = size();
  std::vector<bool> drop(static_cast<size_t>(n), false);
  for (int r : removed) {
    if (r < 0 || r >= n) throw std::out_of_range("delete_indices: index " + std::to_string(r) + " out of range");
    drop[static_cast<size_t>(r)] = true;
  }
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (!drop[static_cast<size_t>(i)]) keep.push_back(i);
  HyperhermitianMatrix sub(static_cast<int>(keep.size()));
  for (size_t a = 0; a < keep.size(); ++a)
    for (size_t b = a; b < keep.size(); ++b)
      sub.set(static_cast<int>(a), static_cast<int>(b), m_(keep[a], keep[b]));
  return sub;
}

HyperhermitianMatrix HyperhermitianMatrix::congruence(const QuatMatrix& c) const {
  return HyperhermitianMatrix(c.adjoint() * m_ * c, 1e-8);
}

RealizationMatrix realize(const Eigen::MatrixXd& a0, const Eigen::MatrixXd& a1,
                          const Eigen::MatrixXd& a2, const Eigen::MatrixXd& a3) {
  const auto n = a0.rows();
  for (const auto* m : {&a0, &a1, &a2, &a3}) {
    if (m->rows() != n || m->cols() != n) throw std::invalid_argument("realize: component dimension mismatch");
  }
  RealizationMatrix r(4 * n, 4 * n);
  // clang-format off
  r << a0, -a1, -a2, -a3,
       a1,  a0, -a3,  a2,
       a2,  a3,  a0, -a1,
       a3, -a2,  a1,  a0;
  // clang-format on
  return r;
}

RealizationMatrix realize(const QuatMatrix& a) {
  const int n = a.size();
  Eigen::MatrixXd c[4];
  for (auto& m : c) m.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Quaternion& q = a(i, j);
      c[0](i, j) = q.w;
      c[1](i, j) = q.x;
      c[2](i, j) = q.y;
      c[3](i, j) = q.z;
    }
  return realize(c[0], c[1], c[2], c[3]);
}

RealizationMatrix realize(const HyperhermitianMatrix& a) { return realize(a.matrix()); }

Eigen::MatrixXcd complex_form(const QuatMatrix& a) {
  // A = Z1 + Z2 j acts on x = x1 + x2 j as (x1, conj x2) -> [[Z1, -Z2], [conj Z2, conj Z1]].
  const int n = a.size();
  Eigen::MatrixXcd m(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto z1 = a(i, j).z1();
      const auto z2 = a(i, j).z2();
      m(i, j) = z1;
      m(i, n + j) = -z2;
      m(n + i, j) = std::conj(z2);
      m(n + i, n + j) = std::conj(z1);
    }
  return m;
}

namespace {

double cluster_tolerance(const HyperhermitianMatrix& a) { return 1e-8 * (1.0 + a.norm()); }

// Collapses an ascending spectrum whose entries repeat `mult` times.
std::vector<double> collapse(const Eigen::VectorXd& ev, int mult, double tol) {
  const int n = static_cast<int>(ev.size()) / mult;
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double lo = ev(mult * i);
    const double hi = ev(mult * i + mult - 1);
    if (hi - lo > tol) {
      throw EigenError("eigenvalues: multiplicity-" + std::to_string(mult) + " pattern violated (cluster width " +
                       std::to_string(hi - lo) + ")");
    }
    out[static_cast<size_t>(i)] = ev.segment(mult * i, mult).mean();
  }
  return out;
}

Quaternion inner(const QuatMatrix& v, int a, const QuatMatrix& w, int b) {
  // <v_a, w_b> = sum_i conj(v_ia) w_ib, columns a and b.
  Quaternion s;
  for (int i = 0; i < v.size(); ++i) s += v(i, a).conj() * w(i, b);
  return s;
}

}  // namespace

EigenTuple eigenvalues(const HyperhermitianMatrix& a, EigenRoute route) {
  if (a.size() == 0) throw std::invalid_argument("eigenvalues: empty matrix");
  if (a.size() == 1) return EigenTuple{a(0, 0).w};
  const double tol = cluster_tolerance(a);
  if (route == EigenRoute::Complex) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(complex_form(a.matrix()), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw EigenError("eigenvalues: complex eigensolver failed");
    return EigenTuple(collapse(es.eigenvalues(), 2, tol));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(realize(a), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw EigenError("eigenvalues: realization eigensolver failed");
  return EigenTuple(collapse(es.eigenvalues(), 4, tol));
}

SymplecticEigen eigen_decompose(const HyperhermitianMatrix& a) {
  const int n = a.size();
  if (n == 0) throw std::invalid_argument("eigen_decompose: empty matrix");
  if (n == 1) return {EigenTuple{a(0, 0).w}, QuatMatrix::identity(1)};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(complex_form(a.matrix()));
  if (es.info() != Eigen::Success) throw EigenError("eigen_decompose: complex eigensolver failed");
  const auto values = collapse(es.eigenvalues(), 2, cluster_tolerance(a));

  // Each complex eigenvector (p, r) is the quaternionic vector p + conj(r) j.
  // Consecutive candidates span the same quaternionic line within a cluster;
  // quaternionic Gram-Schmidt keeps one orthonormal vector per line.
  QuatMatrix basis(n);
  QuatMatrix cand(n);
  int found = 0;
  for (int c = 0; c < 2 * n && found < n; ++c) {
    for (int i = 0; i < n; ++i) {
      cand(i, 0) = Quaternion::from_split(es.eigenvectors()(i, c), std::conj(es.eigenvectors()(n + i, c)));
    }
    for (int pass = 0; pass < 2; ++pass) {
      for (int b = 0; b < found; ++b) {
        const Quaternion proj = inner(basis, b, cand, 0);
        for (int i = 0; i < n; ++i) cand(i, 0) -= basis(i, b) * proj;
      }
    }
    double nrm = 0.0;
    for (int i = 0; i < n; ++i) nrm += cand(i, 0).norm2();
    nrm = std::sqrt(nrm);
    if (nrm < 0.5) continue;
    for (int i = 0; i < n; ++i) basis(i, found) = cand(i, 0) / nrm;
    ++found;
  }
  if (found != n) throw EigenError("eigen_decompose: could not extract a quaternionic eigenbasis");
  return {EigenTuple(values), basis};
}

double moore_det(const HyperhermitianMatrix& a) {
  if (a.size() == 0) return 1.0;
  const auto ev = eigenvalues(a);
  double p = 1.0;
  for (double v : ev.values()) p *= v;
  return p;
}

double principal_minor_det(const HyperhermitianMatrix& a, std::span<const int> removed) {
  return moore_det(a.delete_indices(removed));
}

double sigma_k_matrix(const HyperhermitianMatrix& a, int k) { return sigma(eigenvalues(a), k); }

double sigma_k_by_minors(const HyperhermitianMatrix& a, int k) {
  const int n = a.size();
  if (k < 0 || k > n) throw std::out_of_range("sigma_k_by_minors: order out of range");
  double s = 0.0;
  std::vector<int> removed;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != n - k) continue;
    removed.clear();
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) removed.push_back(i);
    s += principal_minor_det(a, removed);
  }
  return s;
}

double sigma_k_by_char_poly(const HyperhermitianMatrix& a, int k) {
  const int n = a.size();
  if (k < 0 || k > n) throw std::out_of_range("sigma_k_by_char_poly: order out of range");
  // p(t) = moore_det(A + t Id) = sum_m c_m t^m; sample at Chebyshev nodes t = rho s.
  const double rho = 1.0 + a.norm();
  const int m = n + 1;
  Eigen::MatrixXd v(m, m);
  Eigen::VectorXd rhs(m);
  for (int r = 0; r < m; ++r) {
    const double s = std::cos(M_PI * (r + 0.5) / m);
    double pw = 1.0;
    for (int c = 0; c < m; ++c) {
      v(r, c) = pw;
      pw *= s;
    }
    HyperhermitianMatrix shifted = a;
    for (int i = 0; i < n; ++i) shifted.set_diagonal(i, a(i, i).real() + rho * s);
    rhs(r) = moore_det(shifted);
  }
  const Eigen::VectorXd d = v.fullPivLu().solve(rhs);
  return d(n - k) / std::pow(rho, n - k);
}

double char_expansion(const HyperhermitianMatrix& a, double t) {
  const int n = a.size();
  double s = 0.0;
  std::vector<int> removed;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    removed.clear();
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) removed.push_back(i);
    s += std::pow(t, static_cast<double>(removed.size())) * principal_minor_det(a, removed);
  }
  return s;
}

}  // namespace hkt
