#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ispls/errors.hpp"
#include "ispls/linalg.hpp"
#include "ispls/rng.hpp"

namespace ispls {

struct FactorConfig {
  double delta;     // AR(1) coefficient, |delta| < 1
  double mean;      // innovation mean
  double variance;  // innovation variance
};

inline std::array<FactorConfig, 3> default_factor_configs() {
  return {{{0.1, 0.0, 12.25}, {0.4, -1.5, 12.25}, {0.2, 1.5, 12.25}}};
}

inline constexpr int kStreamsPerGroup = 20;
inline constexpr int kNumGroups = 3;
inline constexpr int kNumStreams = kStreamsPerGroup * kNumGroups;

inline std::vector<int> group_indices(int g) {
  std::vector<int> idx(kStreamsPerGroup);
  for (int i = 0; i < kStreamsPerGroup; ++i) idx[i] = g * kStreamsPerGroup + i;
  return idx;
}

// F[t][j] = delta_j F[t-1][j] + eps, eps ~ N(mean_j, var_j); the first row is
// a single innovation draw.
inline Matrix gen_factors(int T, const std::array<FactorConfig, 3>& configs,
                          std::uint64_t seed) {
  if (T < 2) throw InvalidConfig("T must be at least 2");
  for (const auto& c : configs) {
    if (std::abs(c.delta) >= 1.0)
      throw InvalidConfig("|delta| must be below 1 (stationarity)");
    if (c.variance <= 0.0) throw InvalidConfig("variance must be positive");
  }
  Rng rng(seed);
  Matrix F(T, kNumGroups);
  for (int j = 0; j < kNumGroups; ++j) {
    double sd = std::sqrt(configs[j].variance);
    F(0, j) = rng.normal(configs[j].mean, sd);
    for (int t = 1; t < T; ++t)
      F(t, j) = configs[j].delta * F(t - 1, j) + rng.normal(configs[j].mean, sd);
  }
  return F;
}

// Stream i = its group's factor + N(0, noise_sd^2) per observation.
// noise_sd is a test hook; the generated process uses unit noise.
inline Matrix gen_streams(const Matrix& F, std::uint64_t seed, double noise_sd = 1.0) {
  if (F.cols() != kNumGroups) throw DimensionMismatch("factor matrix must have 3 columns");
  Rng rng(seed);
  Matrix X(F.rows(), kNumStreams);
  for (int i = 0; i < kNumStreams; ++i) {
    int j = i / kStreamsPerGroup;
    for (Eigen::Index t = 0; t < F.rows(); ++t)
      X(t, i) = F(t, j) + (noise_sd > 0.0 ? rng.normal(0.0, noise_sd) : 0.0);
  }
  return X;
}

// Population standardization per group: the stationary AR(1) stream mean
// mean_j/(1-delta_j) and standard deviation sqrt(var_j/(1-delta_j^2) +
// noise_var). Group energies are equalized so selection reflects coefficient
// structure rather than factor scale; the incremental recursions themselves
// stay raw.
inline Matrix standardize_streams(const Matrix& X,
                                  const std::array<FactorConfig, 3>& configs,
                                  double noise_sd = 1.0) {
  if (X.cols() != kNumStreams) throw DimensionMismatch("expected 60 stream columns");
  Matrix Z = X;
  for (int j = 0; j < kNumGroups; ++j) {
    double mu = configs[j].mean / (1.0 - configs[j].delta);
    double sig = std::sqrt(configs[j].variance / (1.0 - configs[j].delta * configs[j].delta) +
                           noise_sd * noise_sd);
    for (int i = j * kStreamsPerGroup; i < (j + 1) * kStreamsPerGroup; ++i)
      Z.col(i) = (X.col(i).array() - mu) / sig;
  }
  return Z;
}

struct RegimeSchedule {
  std::vector<int> breakpoints;      // regime start times, 1-based, first == 1
  std::vector<Vector> coefficients;  // per-regime true beta, length p
  std::vector<std::vector<int>> large_truth;  // per-regime large-coefficient group
  std::vector<std::vector<int>> small_truth;  // per-regime small-coefficient group
};

// Single regime: group 1 coefficients near 10, group 2 near 5, group 3 zero.
inline RegimeSchedule static_schedule(std::uint64_t seed) {
  Rng rng(seed);
  Vector b = Vector::Zero(kNumStreams);
  for (int i = 0; i < kStreamsPerGroup; ++i) b[i] = rng.normal(10.0, 0.1);
  for (int i = kStreamsPerGroup; i < 2 * kStreamsPerGroup; ++i) b[i] = rng.normal(5.0, 0.1);
  RegimeSchedule s;
  s.breakpoints = {1};
  s.coefficients = {b};
  s.large_truth = {group_indices(0)};
  s.small_truth = {group_indices(1)};
  return s;
}

// Three regimes: groups 1/2 swap values elementwise at t=101; at t=301 group
// 1 goes inactive, group 2 gets fresh draws near 5 and group 3 near 10.
// Exactly one large, one small and one inactive block at all times.
inline RegimeSchedule drift_schedule(std::uint64_t seed) {
  Rng rng(seed);
  Vector b0 = Vector::Zero(kNumStreams);
  for (int i = 0; i < kStreamsPerGroup; ++i) b0[i] = rng.normal(10.0, 0.1);
  for (int i = kStreamsPerGroup; i < 2 * kStreamsPerGroup; ++i) b0[i] = rng.normal(5.0, 0.1);

  Vector b1 = Vector::Zero(kNumStreams);
  for (int i = 0; i < kStreamsPerGroup; ++i) {
    b1[i] = b0[kStreamsPerGroup + i];
    b1[kStreamsPerGroup + i] = b0[i];
  }

  Vector b2 = Vector::Zero(kNumStreams);
  for (int i = kStreamsPerGroup; i < 2 * kStreamsPerGroup; ++i) b2[i] = rng.normal(5.0, 0.1);
  for (int i = 2 * kStreamsPerGroup; i < 3 * kStreamsPerGroup; ++i) b2[i] = rng.normal(10.0, 0.1);

  RegimeSchedule s;
  s.breakpoints = {1, 101, 301};
  s.coefficients = {b0, b1, b2};
  s.large_truth = {group_indices(0), group_indices(1), group_indices(2)};
  s.small_truth = {group_indices(1), group_indices(0), group_indices(1)};
  return s;
}

inline int regime_at(const RegimeSchedule& s, int t) {  // t is 1-based
  int r = -1;
  for (std::size_t k = 0; k < s.breakpoints.size(); ++k)
    if (s.breakpoints[k] <= t) r = static_cast<int>(k);
  if (r < 0) throw ScheduleGap("no regime covers t=" + std::to_string(t));
  return r;
}

struct ResponseOutput {
  Matrix Y;  // T x 1
  std::vector<int> regime;  // per row, 0-based regime index
};

// y_t = x_t . beta(regime(t)); noise-free by design.
inline ResponseOutput gen_response(const Matrix& X, const RegimeSchedule& schedule) {
  if (schedule.breakpoints.empty() || schedule.breakpoints.front() != 1)
    throw ScheduleGap("schedule must start at t=1");
  for (std::size_t k = 1; k < schedule.breakpoints.size(); ++k)
    if (schedule.breakpoints[k] <= schedule.breakpoints[k - 1])
      throw ScheduleGap("breakpoints must be strictly increasing");
  for (const auto& b : schedule.coefficients)
    if (b.size() != X.cols()) throw DimensionMismatch("coefficient length != stream count");
  ResponseOutput out;
  out.Y.resize(X.rows(), 1);
  out.regime.resize(X.rows());
  for (Eigen::Index t = 0; t < X.rows(); ++t) {
    int r = regime_at(schedule, static_cast<int>(t) + 1);
    out.regime[t] = r;
    out.Y(t, 0) = X.row(t).dot(schedule.coefficients[r]);
  }
  return out;
}

struct SimOutput {
  Matrix F;  // T x 3
  Matrix X;  // T x 60
  Matrix Y;  // T x 1
  RegimeSchedule schedule;
  std::vector<int> regime;  // per row
};

// Full pipeline with sub-seeds split from one master seed.
inline SimOutput simulate(int T, bool drift, std::uint64_t seed, bool standardize) {
  auto configs = default_factor_configs();
  SimOutput out;
  out.F = gen_factors(T, configs, split_seed(seed, 0));
  out.X = gen_streams(out.F, split_seed(seed, 1));
  if (standardize) out.X = standardize_streams(out.X, configs);
  out.schedule = drift ? drift_schedule(split_seed(seed, 2))
                       : static_schedule(split_seed(seed, 2));
  auto resp = gen_response(out.X, out.schedule);
  out.Y = std::move(resp.Y);
  out.regime = std::move(resp.regime);
  return out;
}

}  // namespace ispls
