#pragma once

#include <climits>
#include <cstdint>
#include <string>
#include <vector>

#include "ispls/engine.hpp"
#include "ispls/errors.hpp"
#include "ispls/sbpls.hpp"
#include "ispls/simulate.hpp"

namespace ispls {

// |selected intersect truth| / |truth|; both sets ascending.
inline double percent_correct(const std::vector<int>& selected,
                              const std::vector<int>& truth) {
  if (truth.empty()) throw EmptyTruth("truth set is empty");
  std::size_t i = 0, j = 0, hits = 0;
  while (i < selected.size() && j < truth.size()) {
    if (selected[i] < truth[j]) ++i;
    else if (selected[i] > truth[j]) ++j;
    else { ++hits; ++i; ++j; }
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

struct ReplicateConfig {
  int T = 400;
  bool drift = true;
  bool standardize = true;   // equalize group energies before the response
  HyperParams hyper;
  int offline_prefix = 0;    // > 0: also fit the batch model on that prefix
};

struct SelectionTrace {
  std::vector<std::vector<std::vector<int>>> selected;  // [t][component]
  std::vector<std::vector<int>> offline_selected;       // [component], empty if unused
  int replicate_id = 0;
  HyperParams hyper;
};

// One stream, one engine, selections recorded every step. A DegenerateColumn
// step is skipped with the previous weights retained (covariances still
// advance); any other engine error is annotated with the replicate id.
inline SelectionTrace run_replicate(const ReplicateConfig& config, std::uint64_t seed,
                                    int replicate_id = 0) {
  SimOutput sim = simulate(config.T, config.drift, seed, config.standardize);
  SelectionTrace trace;
  trace.replicate_id = replicate_id;
  trace.hyper = config.hyper;
  trace.selected.reserve(config.T);
  OnlineState state(kNumStreams, 1, config.hyper);
  try {
    for (int t = 0; t < config.T; ++t) {
      Vector x = sim.X.row(t);
      Vector y = sim.Y.row(t);
      state.covariance_update(x, y);
      try {
        state.sim_sparse_step();
      } catch (const DegenerateColumn&) {
        // hold previous weights for this step
      }
      state.compute_output(x, y);
      trace.selected.push_back(state.selected_sets());
    }
    if (config.offline_prefix > 0) {
      if (config.offline_prefix > config.T)
        throw InvalidConfig("offline prefix exceeds horizon");
      Data prefix{sim.X.topRows(config.offline_prefix),
                  sim.Y.topRows(config.offline_prefix)};
      SparseModel model = fit_sbpls(prefix, config.hyper, /*center=*/false);
      trace.offline_selected = model.selected;
    }
  } catch (const Error& e) {
    throw Error("replicate " + std::to_string(replicate_id) + ": " + e.what());
  }
  return trace;
}

struct TruthSets {
  std::vector<std::vector<int>> large;  // per time, 0-based rows
  std::vector<std::vector<int>> small;
};

inline TruthSets truth_over_time(const RegimeSchedule& schedule, int T) {
  TruthSets truth;
  truth.large.reserve(T);
  truth.small.reserve(T);
  for (int t = 1; t <= T; ++t) {
    int r = regime_at(schedule, t);
    truth.large.push_back(schedule.large_truth[r]);
    truth.small.push_back(schedule.small_truth[r]);
  }
  return truth;
}

struct AggregateCurve {
  Matrix mean;    // T x R, in [0,1]
  Matrix stddev;  // T x R, population standard deviation
};

// Pointwise mean/std of percent-correct across traces. Component 1 is scored
// against the large-coefficient group, component 2 against the small one.
inline AggregateCurve aggregate(const std::vector<SelectionTrace>& traces,
                                const TruthSets& truth) {
  if (traces.size() < 2) throw InvalidConfig("need at least two traces");
  const std::size_t T = traces.front().selected.size();
  const std::size_t R = traces.front().selected.empty()
                            ? 0
                            : traces.front().selected.front().size();
  if (R > 2) throw InvalidConfig("truth is defined for at most two components");
  for (const auto& tr : traces)
    if (tr.selected.size() != T)
      throw MisalignedHorizons("trace horizons differ: " + std::to_string(T) + " vs " +
                               std::to_string(tr.selected.size()));
  if (truth.large.size() < T) throw MisalignedHorizons("truth shorter than traces");

  AggregateCurve curve;
  curve.mean = Matrix::Zero(T, R);
  curve.stddev = Matrix::Zero(T, R);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t r = 0; r < R; ++r) {
      const auto& tset = (r == 0) ? truth.large[t] : truth.small[t];
      double sum = 0.0, sq = 0.0;
      for (const auto& tr : traces) {
        double pc = percent_correct(tr.selected[t][r], tset);
        sum += pc;
        sq += pc * pc;
      }
      double n = static_cast<double>(traces.size());
      double m = sum / n;
      double var = sq / n - m * m;
      curve.mean(t, r) = m;
      curve.stddev(t, r) = var > 0.0 ? std::sqrt(var) : 0.0;
    }
  }
  return curve;
}

inline constexpr int kNoRecovery = INT_MAX;  // the mean curve never re-crossed

// First t at or after the switch where the component-1 mean is back at or
// above the threshold; kNoRecovery when it never happens.
inline int recovery_time(const AggregateCurve& curve, int switch_t,
                         double threshold = 0.9) {
  for (int t = switch_t; t <= static_cast<int>(curve.mean.rows()); ++t)
    if (curve.mean(t - 1, 0) >= threshold) return t;
  return kNoRecovery;
}

struct SweepResult {
  std::vector<double> lambdas;
  std::vector<AggregateCurve> curves;
  std::vector<std::vector<int>> recovery;  // [lambda][switch]
};

// Drift experiment per lambda with common replicate seeds, plus recovery
// times of the component-1 mean curve after each switch.
inline SweepResult lambda_sweep(const ReplicateConfig& base,
                                const std::vector<double>& lambdas, int n_reps,
                                std::uint64_t master_seed) {
  for (double l : lambdas)
    if (l <= 0.0 || l > 1.0) throw InvalidHyper("lambda must be in (0,1]");
  SweepResult result;
  result.lambdas = lambdas;
  RegimeSchedule schedule_shape = base.drift ? drift_schedule(0) : static_schedule(0);
  TruthSets truth = truth_over_time(schedule_shape, base.T);
  std::vector<int> switches(schedule_shape.breakpoints.begin() + 1,
                            schedule_shape.breakpoints.end());
  for (double l : lambdas) {
    ReplicateConfig config = base;
    config.hyper.lambda = l;
    std::vector<SelectionTrace> traces;
    traces.reserve(n_reps);
    for (int i = 0; i < n_reps; ++i)
      traces.push_back(run_replicate(config, split_seed(master_seed, i), i));
    AggregateCurve curve = aggregate(traces, truth);
    std::vector<int> rec;
    for (int sw : switches) rec.push_back(recovery_time(curve, sw));
    result.curves.push_back(std::move(curve));
    result.recovery.push_back(std::move(rec));
  }
  return result;
}

}  // namespace ispls
