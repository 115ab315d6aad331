#pragma once

#include <string>
#include <vector>

#include "ispls/errors.hpp"
#include "ispls/linalg.hpp"
#include "ispls/threshold.hpp"

namespace ispls {

struct HyperParams {
  double alpha = 1e-5;        // ridge mixing weight in [0,1]
  double lambda = 1.0;        // forgetting factor in [0,1]; 0 keeps only the current sample
  int R = 1;                  // component count
  std::vector<int> thetas;    // per-component sparsity targets
  double tau = 1e-8;          // inner-loop tolerance
};

inline void validate_hyper(const HyperParams& h, int p) {
  if (h.alpha < 0.0 || h.alpha > 1.0) throw InvalidHyper("alpha must be in [0,1]");
  if (h.lambda < 0.0 || h.lambda > 1.0) throw InvalidHyper("lambda must be in [0,1]");
  if (h.R < 1 || h.R > p) throw InvalidHyper("R must be in [1, p]");
  if (static_cast<int>(h.thetas.size()) != h.R)
    throw InvalidHyper("need one theta per component");
  for (int th : h.thetas)
    if (th < 1 || th > p) throw InvalidHyper("theta must be in [1, p]");
  if (h.tau <= 0.0) throw InvalidHyper("tau must be positive");
}

struct Data {
  Matrix X;  // n x p
  Matrix Y;  // n x q
};

// H = alpha X'X + (1-alpha) M M' with M = X'Y, numerically symmetrized.
inline Matrix build_H(const Matrix& X, const Matrix& Y, double alpha) {
  if (X.rows() != Y.rows()) throw DimensionMismatch("X and Y row counts differ");
  if (alpha < 0.0 || alpha > 1.0) throw InvalidHyper("alpha must be in [0,1]");
  Matrix M = X.transpose() * Y;
  Matrix H = alpha * (X.transpose() * X) + (1.0 - alpha) * (M * M.transpose());
  H = ((H + H.transpose()) * 0.5).eval();
  return H;
}

struct SparseModel {
  Matrix U;     // p x R sparse weights, unit columns
  Matrix W;     // R x q loadings
  Matrix beta;  // p x q, = U * W
  std::vector<std::vector<int>> selected;  // per component, ascending
  HyperParams hyper;
  Vector x_mean;  // zero when fitted uncentered
  Vector y_mean;
};

// All R weight vectors come from one eigendecomposition of H; no deflation.
// Each eigenvector is sparsified by a single anchored thresholding pass
// u_r = normalize(soft(H v_r, gamma_for_count(., theta_r))): iterating the
// threshold/power refinement from several eigenpairs of the same H collapses
// every component onto the leading sparse fixed point, so the refinement
// stops after the anchored pass.
inline SparseModel fit_sbpls(const Data& data, const HyperParams& hyper,
                             bool center = true) {
  const auto n = data.X.rows();
  const auto p = data.X.cols();
  const auto q = data.Y.cols();
  if (n < 2) throw InvalidConfig("need at least two rows");
  if (data.Y.rows() != n) throw DimensionMismatch("X and Y row counts differ");
  validate_hyper(hyper, static_cast<int>(p));

  SparseModel model;
  model.hyper = hyper;
  model.x_mean = Vector::Zero(p);
  model.y_mean = Vector::Zero(q);
  Matrix X = data.X;
  Matrix Y = data.Y;
  if (center) {
    model.x_mean = X.colwise().mean();
    model.y_mean = Y.colwise().mean();
    X.rowwise() -= model.x_mean.transpose();
    Y.rowwise() -= model.y_mean.transpose();
  }

  Matrix H = build_H(X, Y, hyper.alpha);
  EigenTopR eig = sym_eigen_topR(H, hyper.R);

  model.U.resize(p, hyper.R);
  model.selected.resize(hyper.R);
  for (int r = 0; r < hyper.R; ++r) {
    Vector z = H * eig.basis.col(r);
    auto thr = soft_threshold(z, gamma_for_count(z, hyper.thetas[r]));
    if (thr.nonzero_count == 0)
      throw AllZero("component " + std::to_string(r + 1) + " thresholded to zero");
    model.U.col(r) = thr.vector / thr.vector.norm();
    canonicalize_sign(model.U.col(r));
    for (Eigen::Index i = 0; i < p; ++i)
      if (model.U(i, r) != 0.0) model.selected[r].push_back(static_cast<int>(i));
  }

  Matrix S = X * model.U;
  Matrix G = S.transpose() * S;
  Eigen::SelfAdjointEigenSolver<Matrix> gs(G);
  double gmax = gs.eigenvalues().cwiseAbs().maxCoeff();
  double gmin = gs.eigenvalues().minCoeff();
  if (gmax <= 0.0 || gmin < 1e-12 * gmax)
    throw SingularScores("score Gram matrix is singular (latent scores collinear or null)");
  model.W = G.ldlt().solve(S.transpose() * Y);
  model.beta = model.U * model.W;
  return model;
}

inline Vector predict(const SparseModel& model, const Vector& x) {
  if (x.size() != model.beta.rows())
    throw DimensionMismatch("input length does not match model");
  return model.y_mean + model.beta.transpose() * (x - model.x_mean);
}

}  // namespace ispls
