#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ispls/errors.hpp"
#include "ispls/linalg.hpp"

namespace ispls {

struct ThresholdResult {
  Vector vector;
  double gamma = 0.0;
  int nonzero_count = 0;
};

// sgn(u_i) * (|u_i| - gamma)_+, entrywise; no normalization.
inline ThresholdResult soft_threshold(const Vector& u, double gamma) {
  if (gamma < 0.0) throw InvalidHyper("gamma must be nonnegative");
  if (!u.allFinite()) throw NonFinite("soft_threshold: input has non-finite entries");
  ThresholdResult out;
  out.gamma = gamma;
  out.vector.resize(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    double mag = std::abs(u[i]) - gamma;
    out.vector[i] = mag > 0.0 ? (u[i] > 0.0 ? mag : -mag) : 0.0;
    if (mag > 0.0) ++out.nonzero_count;
  }
  return out;
}

// #{i : (|u_i| - gamma)_+ > 0} - theta. Diagnostic companion of
// gamma_for_count; not on the hot path.
inline int selection_count_residual(const Vector& u, double gamma, int theta) {
  int count = 0;
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (std::abs(u[i]) > gamma) ++count;
  return count - theta;
}

// Threshold retaining exactly theta entries for magnitude-distinct input:
// the (theta+1)-th largest magnitude. theta == p keeps everything (gamma 0).
// Ties at the cut are dropped, possibly retaining fewer than theta.
inline double gamma_for_count(const Vector& u, int theta) {
  const int p = static_cast<int>(u.size());
  if (theta < 1 || theta > p) throw InvalidHyper("theta must be in [1, p]");
  if (theta == p) return 0.0;
  std::vector<double> mags(p);
  for (int i = 0; i < p; ++i) mags[i] = std::abs(u[i]);
  // (theta+1)-th largest == index p-theta-1 in ascending order
  std::nth_element(mags.begin(), mags.begin() + (p - theta - 1), mags.end());
  return mags[p - theta - 1];
}

// Alternating power/threshold refinement of one singular pair of a symmetric
// H: u* = soft(H v, gamma_for_count), v* = H u* / ||H u*||, repeated until
// the normalized u stabilizes within tau.
inline std::pair<Vector, Vector> sparsify_iterative(const Matrix& H, Vector u0, Vector v0,
                                                    int theta, double tau = 1e-8,
                                                    int max_iter = 500) {
  if (H.rows() != H.cols()) throw DimensionMismatch("H is not square");
  if (u0.size() != H.rows() || v0.size() != H.rows())
    throw DimensionMismatch("u0/v0 length does not match H");
  Vector u = std::move(u0);
  Vector v = std::move(v0);
  double delta = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector z = H * v;
    auto thr = soft_threshold(z, gamma_for_count(z, theta));
    if (thr.nonzero_count == 0)
      throw AllZero("thresholding annihilated the iterate (tied magnitudes)");
    Vector u_new = thr.vector / thr.vector.norm();
    Vector hu = H * u_new;
    double hn = hu.norm();
    if (hn >= kDegenerateNorm) v = hu / hn;
    delta = (u_new - u).norm();
    u = std::move(u_new);
    if (delta < tau) return {u, v};
  }
  std::vector<double> last(u.data(), u.data() + u.size());
  throw NoConvergence("sparsify did not stabilize in " + std::to_string(max_iter) +
                          " iterations (last step moved " + std::to_string(delta) + ")",
                      delta, std::move(last));
}

}  // namespace ispls
