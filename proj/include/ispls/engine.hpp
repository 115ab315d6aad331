#pragma once

#include <string>
#include <vector>

#include "ispls/errors.hpp"
#include "ispls/linalg.hpp"
#include "ispls/sbpls.hpp"
#include "ispls/threshold.hpp"

namespace ispls {

struct StepOutput {
  Matrix beta;    // p x q
  Vector y_hat;   // q
  std::vector<std::vector<int>> selected;  // per component, ascending
  Vector scores;  // R latent scores s = x U
};

// Incremental engine: exponentially forgotten covariances, one simultaneous
// iteration sweep with Gram-Schmidt per sample, direct thresholding, and
// single-sample loadings. Constant memory in t (O(p^2 + pq + pR)).
class OnlineState {
 public:
  OnlineState(int p, int q, HyperParams hyper) : p_(p), q_(q), hyper_(std::move(hyper)) {
    if (p < 1 || q < 1) throw InvalidHyper("p and q must be positive");
    validate_hyper(hyper_, p);
    C_ = Matrix::Zero(p, p);
    M_ = Matrix::Zero(p, q);
    U_ = Matrix::Identity(p, hyper_.R);
    pre_basis_ = U_;
    gammas_ = Vector::Zero(hyper_.R);
    beta_ = Matrix::Zero(p, q);
    scores_ = Vector::Zero(hyper_.R);
  }

  // C <- lambda C + x x', M <- lambda M + x y', t <- t+1
  void covariance_update(const Vector& x, const Vector& y) {
    check_sample(x, y);
    C_ = hyper_.lambda * C_ + x * x.transpose();
    M_ = hyper_.lambda * M_ + x * y.transpose();
    ++t_;
  }

  // One pass of the tracking recursion. Each component multiplies its
  // previous estimate by H once, is projected against the already updated
  // (sparse) columns before it, normalized, thresholded, renormalized.
  // Throws DegenerateColumn on rank collapse; state keeps the previous U so
  // the caller may skip the step.
  void sim_sparse_step() {
    Matrix H = hyper_.alpha * C_ + (1.0 - hyper_.alpha) * (M_ * M_.transpose());
    H = ((H + H.transpose()) * 0.5).eval();
    const int R = hyper_.R;
    Matrix Unew = U_;
    Matrix pre(p_, R);
    Vector gammas(R);
    for (int r = 0; r < R; ++r) {
      Vector a = H * U_.col(r);
      // two projection passes: the remainder can be orders of magnitude
      // smaller than a, and a single pass leaves it contaminated by roundoff
      for (int pass = 0; pass < 2; ++pass)
        for (int k = 0; k < r; ++k) a -= Unew.col(k).dot(a) * Unew.col(k);
      double n = a.norm();
      if (n < kDegenerateNorm)
        throw DegenerateColumn("component " + std::to_string(r + 1) +
                               " collapsed at t=" + std::to_string(t_));
      Vector q = a / n;
      pre.col(r) = q;
      gammas[r] = gamma_for_count(q, hyper_.thetas[r]);
      auto thr = soft_threshold(q, gammas[r]);
      if (thr.nonzero_count == 0)
        throw AllZero("component " + std::to_string(r + 1) +
                      " thresholded to zero at t=" + std::to_string(t_));
      Unew.col(r) = thr.vector / thr.vector.norm();
    }
    U_ = Unew;
    pre_basis_ = pre;
    gammas_ = gammas;
  }

  // s = x U; W = s' y / (s s'); beta = U W; y_hat = x beta. When the scores
  // are numerically null the previous beta is reused (the division is
  // undefined there).
  StepOutput compute_output(const Vector& x, const Vector& y) {
    check_sample(x, y);
    StepOutput out;
    out.scores = U_.transpose() * x;
    double ss = out.scores.squaredNorm();
    if (ss >= 1e-12) {
      Matrix W = (out.scores * y.transpose()) / ss;  // R x q
      beta_ = U_ * W;
    }
    scores_ = out.scores;
    out.beta = beta_;
    out.y_hat = beta_.transpose() * x;
    out.selected = selected_sets();
    return out;
  }

  StepOutput step(const Vector& x, const Vector& y) {
    check_sample(x, y);  // reject before any mutation
    covariance_update(x, y);
    sim_sparse_step();
    return compute_output(x, y);
  }

  std::vector<std::vector<int>> selected_sets() const {
    std::vector<std::vector<int>> sel(hyper_.R);
    for (int r = 0; r < hyper_.R; ++r)
      for (int i = 0; i < p_; ++i)
        if (U_(i, r) != 0.0) sel[r].push_back(i);
    return sel;
  }

  const Matrix& C() const { return C_; }
  const Matrix& M() const { return M_; }
  const Matrix& U() const { return U_; }
  const Matrix& pre_basis() const { return pre_basis_; }
  const Vector& gammas() const { return gammas_; }
  const Matrix& beta() const { return beta_; }
  long t() const { return t_; }
  int p() const { return p_; }
  int q() const { return q_; }
  const HyperParams& hyper() const { return hyper_; }

 private:
  void check_sample(const Vector& x, const Vector& y) const {
    if (x.size() != p_ || y.size() != q_)
      throw DimensionMismatch("sample is " + std::to_string(x.size()) + "/" +
                              std::to_string(y.size()) + ", state is " +
                              std::to_string(p_) + "/" + std::to_string(q_));
    if (!x.allFinite() || !y.allFinite())
      throw NonFinite("sample has non-finite entries");
  }

  int p_;
  int q_;
  HyperParams hyper_;
  Matrix C_;
  Matrix M_;
  Matrix U_;
  Matrix pre_basis_;
  Vector gammas_;
  Matrix beta_;
  Vector scores_;
  long t_ = 0;
};

inline OnlineState init_state(int p, int q, const HyperParams& hyper) {
  return OnlineState(p, q, hyper);
}

}  // namespace ispls
