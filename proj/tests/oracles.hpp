// Brute-force reference implementations, written independently of the library
// code paths they check. Correctness here relies on textbook algorithms and
// exhaustive scans, not on shared helpers.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct EigenResult {
  Vector values;  // descending
  Matrix vectors; // columns match values
};

// Cyclic Jacobi sweeps for a full symmetric eigendecomposition.
inline EigenResult jacobi_eigen(Matrix A) {
  const int n = static_cast<int>(A.rows());
  Matrix V = Matrix::Identity(n, n);
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += A(i, j) * A(i, j);
    if (std::sqrt(off) < 1e-14 * std::max(1.0, A.norm())) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (A(p, q) == 0.0) continue;
        double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        Matrix J = Matrix::Identity(n, n);
        J(p, p) = c;
        J(q, q) = c;
        J(p, q) = s;
        J(q, p) = -s;
        A = J.transpose() * A * J;
        V = V * J;
      }
    }
  }
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return A(a, a) > A(b, b); });
  EigenResult out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = A(idx[k], idx[k]);
    out.vectors.col(k) = V.col(idx[k]);
    int m = 0;
    out.vectors.col(k).cwiseAbs().maxCoeff(&m);
    if (out.vectors(m, k) < 0.0) out.vectors.col(k) = -out.vectors.col(k);
  }
  return out;
}

// Least squares via normal equations and Gaussian elimination with partial
// pivoting; fine for the small, well-conditioned systems used in tests.
inline Matrix least_squares(const Matrix& X, const Matrix& Y) {
  Matrix A = X.transpose() * X;
  Matrix B = X.transpose() * Y;
  const int n = static_cast<int>(A.rows());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A(r, col)) > std::abs(A(piv, col))) piv = r;
    if (std::abs(A(piv, col)) < 1e-300) throw std::runtime_error("singular system");
    A.row(col).swap(A.row(piv));
    B.row(col).swap(B.row(piv));
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = A(r, col) / A(col, col);
      A.row(r) -= f * A.row(col);
      B.row(r) -= f * B.row(col);
    }
  }
  for (int r = 0; r < n; ++r) B.row(r) /= A(r, r);
  return B;
}

// Exhaustive threshold scan: try every candidate cut (zero and each entry
// magnitude) and return the one whose strict-survivor count equals theta.
// Returns -1 when no candidate achieves the count (ties).
inline double gamma_by_scan(const Vector& u, int theta) {
  std::vector<double> cands{0.0};
  for (Eigen::Index i = 0; i < u.size(); ++i) cands.push_back(std::abs(u[i]));
  for (double g : cands) {
    int count = 0;
    for (Eigen::Index i = 0; i < u.size(); ++i)
      if (std::abs(u[i]) > g) ++count;
    if (count == theta) return g;
  }
  return -1.0;
}

// Full re-orthogonalization by repeated classical Gram-Schmidt until the Gram
// matrix is within tolerance of the identity.
inline Matrix reorthogonalize(Matrix Q) {
  for (int pass = 0; pass < 10; ++pass) {
    for (Eigen::Index r = 0; r < Q.cols(); ++r) {
      Vector v = Q.col(r);
      for (Eigen::Index k = 0; k < r; ++k) v -= Q.col(k).dot(Q.col(r)) * Q.col(k);
      Q.col(r) = v / v.norm();
    }
    Matrix G = Q.transpose() * Q - Matrix::Identity(Q.cols(), Q.cols());
    if (G.cwiseAbs().maxCoeff() < 1e-14) break;
  }
  return Q;
}

inline double max_abs(const Matrix& A) { return A.cwiseAbs().maxCoeff(); }

// deterministic xorshift-based data generator, independent of the library Rng
class Rand {
 public:
  explicit Rand(std::uint64_t s) : s_(s ? s : 0x9e3779b97f4a7c15ULL) {}
  double uniform() {  // in (0,1)
    s_ ^= s_ << 13;
    s_ ^= s_ >> 7;
    s_ ^= s_ << 17;
    return (static_cast<double>(s_ >> 11) + 0.5) / 9007199254740992.0;
  }
  double normal() {  // Box-Muller
    double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
  Matrix matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = normal();
    return m;
  }
  Vector vector(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

 private:
  std::uint64_t s_;
};

}  // namespace oracle
