#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "ispls/errors.hpp"

namespace ispls {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDegenerateNorm = 1e-12;

// Flip so the largest-magnitude entry is positive. Eigenvectors are
// sign-ambiguous; reproducible output needs a fixed convention.
inline void canonicalize_sign(Eigen::Ref<Vector> v) {
  int idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  if (v[idx] < 0.0) v = -v;
}

// Modified Gram-Schmidt with one re-orthogonalization pass. O(pR^2).
// Throws DegenerateColumn when a column falls into the span of its
// predecessors (post-projection norm below kDegenerateNorm).
inline Matrix gram_schmidt_orth(const Matrix& Q) {
  const auto p = Q.rows();
  const auto R = Q.cols();
  Matrix U = Q;
  for (Eigen::Index r = 0; r < R; ++r) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index k = 0; k < r; ++k)
        U.col(r) -= U.col(k).dot(U.col(r)) * U.col(k);
    }
    double n = U.col(r).norm();
    if (n < kDegenerateNorm)
      throw DegenerateColumn("column " + std::to_string(r) +
                             " is numerically in the span of its predecessors (norm " +
                             std::to_string(n) + ")");
    U.col(r) /= n;
  }
  (void)p;
  return U;
}

struct EigenTopR {
  Vector values;  // descending
  Matrix basis;   // orthonormal columns, sign-canonicalized
};

// Top-R eigenpairs of a symmetric PSD matrix by block power iteration
// (simultaneous iteration): repeat U <- orth(H U) from the first R identity
// columns until every Rayleigh residual ||H u - v u|| <= tol * ||H||.
inline EigenTopR sym_eigen_topR(const Matrix& H, int R, double tol = 1e-10,
                                int max_iter = 1000) {
  const auto p = H.rows();
  if (H.cols() != p) throw DimensionMismatch("matrix is not square");
  if (R < 1 || R > p) throw InvalidHyper("R must be in [1, p]");

  const double scale = H.norm();
  Matrix U = Matrix::Identity(p, R);
  if (scale == 0.0) {  // zero matrix: identity columns are exact eigenvectors
    EigenTopR out;
    out.values = Vector::Zero(R);
    out.basis = U;
    return out;
  }

  Vector vals(R);
  double worst = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Matrix Z = H * U;
    U = gram_schmidt_orth(Z);
    Z = H * U;
    worst = 0.0;
    for (int r = 0; r < R; ++r) {
      vals[r] = U.col(r).dot(Z.col(r));
      worst = std::max(worst, (Z.col(r) - vals[r] * U.col(r)).norm());
    }
    if (worst <= tol * scale) {
      // descending order, then fixed signs
      std::vector<int> idx(R);
      for (int r = 0; r < R; ++r) idx[r] = r;
      std::stable_sort(idx.begin(), idx.end(),
                       [&](int a, int b) { return vals[a] > vals[b]; });
      EigenTopR out;
      out.values.resize(R);
      out.basis.resize(p, R);
      for (int r = 0; r < R; ++r) {
        out.values[r] = vals[idx[r]];
        out.basis.col(r) = U.col(idx[r]);
        canonicalize_sign(out.basis.col(r));
      }
      return out;
    }
  }
  std::vector<double> last(U.data(), U.data() + U.size());
  throw NoConvergence("eigen iteration hit max_iter with residual " +
                          std::to_string(worst / scale) + " (relative)",
                      worst / scale, std::move(last));
}

}  // namespace ispls
