#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ispls/simulate.hpp"
#include "oracles.hpp"

using ispls::Matrix;
using ispls::Vector;

namespace {

double corr(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  double ma = a.mean(), mb = b.mean();
  Vector da = a.array() - ma;
  Vector db = b.array() - mb;
  return da.dot(db) / (da.norm() * db.norm());
}

}  // namespace

TEST_CASE("factors with zero memory are white noise at the configured mean",
          "[simulate]") {
  std::array<ispls::FactorConfig, 3> cfg = {{{0.0, 2.0, 4.0}, {0.0, -1.0, 4.0},
                                             {0.0, 0.0, 4.0}}};
  const int T = 10000;
  Matrix F = ispls::gen_factors(T, cfg, 99);
  double se = std::sqrt(4.0 / T);
  REQUIRE(std::abs(F.col(0).mean() - 2.0) <= 3 * se);
  REQUIRE(std::abs(F.col(1).mean() + 1.0) <= 3 * se);
  REQUIRE(std::abs(F.col(2).mean() - 0.0) <= 3 * se);
}

TEST_CASE("factor generation is deterministic under the seed", "[simulate]") {
  auto cfg = ispls::default_factor_configs();
  Matrix a = ispls::gen_factors(400, cfg, 5);
  Matrix b = ispls::gen_factors(400, cfg, 5);
  REQUIRE((a - b).cwiseAbs().maxCoeff() == 0.0);
  Matrix c = ispls::gen_factors(400, cfg, 6);
  REQUIRE((a - c).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("the long-run factor variance matches the stationary formula", "[simulate]") {
  std::array<ispls::FactorConfig, 3> cfg = {{{0.4, 0.0, 12.25}, {0.0, 0.0, 1.0},
                                             {0.0, 0.0, 1.0}}};
  const int T = 100000;
  Matrix F = ispls::gen_factors(T, cfg, 77);
  double mean = F.col(0).mean();
  double var = (F.col(0).array() - mean).square().sum() / T;
  double expect = 12.25 / (1.0 - 0.16);
  REQUIRE(std::abs(var - expect) <= 0.03 * expect);
}

TEST_CASE("factor innovations are independent across groups", "[simulate]") {
  auto cfg = ispls::default_factor_configs();
  Matrix F = ispls::gen_factors(100000, cfg, 31);
  REQUIRE(std::abs(corr(F.col(0), F.col(1))) < 0.02);
  REQUIRE(std::abs(corr(F.col(0), F.col(2))) < 0.02);
  REQUIRE(std::abs(corr(F.col(1), F.col(2))) < 0.02);
}

TEST_CASE("factor generation validates stationarity and shape", "[simulate]") {
  auto cfg = ispls::default_factor_configs();
  REQUIRE_THROWS_AS(ispls::gen_factors(1, cfg, 1), ispls::InvalidConfig);
  auto bad = cfg;
  bad[1].delta = 1.0;
  REQUIRE_THROWS_AS(ispls::gen_factors(100, bad, 1), ispls::InvalidConfig);
  auto badvar = cfg;
  badvar[0].variance = 0.0;
  REQUIRE_THROWS_AS(ispls::gen_factors(100, badvar, 1), ispls::InvalidConfig);
}

TEST_CASE("noise-free streams reproduce their group factor exactly", "[simulate]") {
  auto cfg = ispls::default_factor_configs();
  Matrix F = ispls::gen_factors(50, cfg, 3);
  Matrix X = ispls::gen_streams(F, 4, /*noise_sd=*/0.0);
  for (int i = 0; i < ispls::kNumStreams; ++i) {
    int j = i / ispls::kStreamsPerGroup;
    REQUIRE((X.col(i) - F.col(j)).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("each stream correlates most with its own factor", "[simulate]") {
  auto cfg = ispls::default_factor_configs();
  Matrix F = ispls::gen_factors(400, cfg, 13);
  Matrix X = ispls::gen_streams(F, 14);
  double own = corr(X.col(4), F.col(0));
  REQUIRE(own > corr(X.col(4), F.col(1)));
  REQUIRE(own > corr(X.col(4), F.col(2)));
  REQUIRE(own > 0.5);
}

TEST_CASE("within-group streams correlate more than cross-group pairs", "[simulate]") {
  auto cfg = ispls::default_factor_configs();
  Matrix F = ispls::gen_factors(400, cfg, 15);
  Matrix X = ispls::gen_streams(F, 16);
  double same = (corr(X.col(0), X.col(1)) + corr(X.col(21), X.col(22)) +
                 corr(X.col(41), X.col(42))) / 3.0;
  double cross = (corr(X.col(0), X.col(21)) + corr(X.col(0), X.col(41)) +
                  corr(X.col(21), X.col(41))) / 3.0;
  REQUIRE(same > cross);
}

TEST_CASE("group standardization centers and scales every block", "[simulate]") {
  auto cfg = ispls::default_factor_configs();
  Matrix F = ispls::gen_factors(100000, cfg, 17);
  Matrix X = ispls::gen_streams(F, 18);
  Matrix Z = ispls::standardize_streams(X, cfg);
  for (int g = 0; g < ispls::kNumGroups; ++g) {
    int i = g * ispls::kStreamsPerGroup;
    double mean = Z.col(i).mean();
    double var = (Z.col(i).array() - mean).square().sum() / Z.rows();
    REQUIRE(std::abs(mean) < 0.05);
    REQUIRE(std::abs(var - 1.0) < 0.05);
  }
}

TEST_CASE("an all-zero coefficient schedule yields an identically zero response",
          "[simulate]") {
  Matrix X = Matrix::Random(30, ispls::kNumStreams);
  ispls::RegimeSchedule s;
  s.breakpoints = {1};
  s.coefficients = {Vector::Zero(ispls::kNumStreams)};
  s.large_truth = {ispls::group_indices(0)};
  s.small_truth = {ispls::group_indices(1)};
  auto resp = ispls::gen_response(X, s);
  REQUIRE(resp.Y.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("the drifting schedule rotates the dominant group at the breakpoints",
          "[simulate]") {
  ispls::RegimeSchedule s = ispls::drift_schedule(8);
  REQUIRE(s.breakpoints == std::vector<int>{1, 101, 301});
  REQUIRE(s.large_truth[0] == ispls::group_indices(0));
  REQUIRE(s.large_truth[1] == ispls::group_indices(1));
  REQUIRE(s.large_truth[2] == ispls::group_indices(2));
  REQUIRE(ispls::regime_at(s, 1) == 0);
  REQUIRE(ispls::regime_at(s, 100) == 0);
  REQUIRE(ispls::regime_at(s, 101) == 1);
  REQUIRE(ispls::regime_at(s, 300) == 1);
  REQUIRE(ispls::regime_at(s, 301) == 2);
  REQUIRE(ispls::regime_at(s, 400) == 2);

  // the swap moves regime-1 values elementwise between the first two groups
  for (int i = 0; i < ispls::kStreamsPerGroup; ++i) {
    REQUIRE(s.coefficients[1][i] == s.coefficients[0][ispls::kStreamsPerGroup + i]);
    REQUIRE(s.coefficients[1][ispls::kStreamsPerGroup + i] == s.coefficients[0][i]);
  }
  // the last regime silences group one and raises group three near 10
  for (int i = 0; i < ispls::kStreamsPerGroup; ++i) {
    REQUIRE(s.coefficients[2][i] == 0.0);
    REQUIRE(std::abs(s.coefficients[2][2 * ispls::kStreamsPerGroup + i] - 10.0) < 1.0);
  }
}

TEST_CASE("coefficient draws concentrate around their group centers", "[simulate]") {
  ispls::RegimeSchedule s = ispls::static_schedule(3);
  for (int i = 0; i < ispls::kStreamsPerGroup; ++i) {
    REQUIRE(std::abs(s.coefficients[0][i] - 10.0) < 1.0);
    REQUIRE(std::abs(s.coefficients[0][ispls::kStreamsPerGroup + i] - 5.0) < 1.0);
    REQUIRE(s.coefficients[0][2 * ispls::kStreamsPerGroup + i] == 0.0);
  }
}

TEST_CASE("segment-wise least squares recovers the exact coefficients", "[simulate]") {
  ispls::SimOutput sim = ispls::simulate(400, /*drift=*/true, /*seed=*/21,
                                         /*standardize=*/false);
  const int segs[3][2] = {{1, 100}, {101, 300}, {301, 400}};
  for (int k = 0; k < 3; ++k) {
    int lo = segs[k][0], hi = segs[k][1];
    Matrix Xs = sim.X.middleRows(lo - 1, hi - lo + 1);
    Matrix Ys = sim.Y.middleRows(lo - 1, hi - lo + 1);
    Matrix bhat = oracle::least_squares(Xs, Ys);
    REQUIRE((bhat.col(0) - sim.schedule.coefficients[k]).cwiseAbs().maxCoeff() < 1e-8);
    REQUIRE((Ys - Xs * bhat).norm() <= 1e-10 * Ys.norm());
  }
}

TEST_CASE("responses are exact per-row linear combinations", "[simulate]") {
  ispls::SimOutput sim = ispls::simulate(150, /*drift=*/true, /*seed=*/22,
                                         /*standardize=*/true);
  for (int t = 0; t < 150; ++t) {
    int r = sim.regime[static_cast<size_t>(t)];
    double expect = sim.X.row(t).dot(sim.schedule.coefficients[r]);
    REQUIRE(sim.Y(t, 0) == expect);
  }
}

TEST_CASE("schedules that fail to cover the horizon are rejected", "[simulate]") {
  Matrix X = Matrix::Random(10, ispls::kNumStreams);
  ispls::RegimeSchedule s = ispls::static_schedule(1);
  s.breakpoints = {2};  // nothing covers t=1
  REQUIRE_THROWS_AS(ispls::gen_response(X, s), ispls::ScheduleGap);

  ispls::RegimeSchedule d = ispls::drift_schedule(1);
  d.breakpoints = {1, 101, 101};
  REQUIRE_THROWS_AS(ispls::gen_response(X, d), ispls::ScheduleGap);
}

TEST_CASE("the full pipeline is deterministic and reproducible", "[simulate]") {
  ispls::SimOutput a = ispls::simulate(120, true, 9, true);
  ispls::SimOutput b = ispls::simulate(120, true, 9, true);
  REQUIRE((a.X - b.X).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE((a.Y - b.Y).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE((a.F - b.F).cwiseAbs().maxCoeff() == 0.0);
  ispls::SimOutput c = ispls::simulate(120, true, 10, true);
  REQUIRE((a.X - c.X).cwiseAbs().maxCoeff() > 0.0);
}
