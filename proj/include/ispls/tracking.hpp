#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "ispls/csv.hpp"
#include "ispls/engine.hpp"
#include "ispls/errors.hpp"
#include "ispls/rng.hpp"

namespace ispls {

struct PriceTable {
  std::vector<std::string> dates;
  Matrix index_prices;  // T x q
  Matrix stock_prices;  // T x p
};

// CSV with header date,idx1..idxq,s1..sp; strictly positive prices, no gaps.
inline PriceTable load_prices(const std::string& path, int q) {
  if (q < 1) throw InvalidConfig("q must be positive");
  csv::Table t = csv::read(path);
  if (static_cast<int>(t.header.size()) < q + 2)
    throw ParseError(path + ": need a date column, " + std::to_string(q) +
                     " index columns and at least one stock column");
  const int p = static_cast<int>(t.header.size()) - 1 - q;
  PriceTable table;
  table.index_prices.resize(t.rows.size(), q);
  table.stock_prices.resize(t.rows.size(), p);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    table.dates.push_back(t.rows[r][0]);
    for (int c = 0; c < q + p; ++c) {
      double v = csv::parse_double(t.rows[r][c + 1], r + 2, c + 2);
      if (v <= 0.0)
        throw NonPositivePrice("row " + std::to_string(r + 2) + ", column " +
                               std::to_string(c + 2) + ": price " + csv::fmt(v));
      if (c < q) table.index_prices(r, c) = v;
      else table.stock_prices(r, c - q) = v;
    }
  }
  return table;
}

struct ReturnsPair {
  Matrix index_returns;  // (T-1) x q
  Matrix stock_returns;  // (T-1) x p
};

inline Matrix simple_returns(const Matrix& prices) {
  if (prices.rows() < 2) throw InvalidConfig("need at least two price rows");
  Matrix r(prices.rows() - 1, prices.cols());
  for (Eigen::Index t = 1; t < prices.rows(); ++t)
    r.row(t - 1) = (prices.row(t) - prices.row(t - 1)).cwiseQuotient(prices.row(t - 1));
  return r;
}

inline ReturnsPair to_returns(const PriceTable& table) {
  return {simple_returns(table.index_prices), simple_returns(table.stock_prices)};
}

// target = index return + annual_excess / periods_per_year, per index.
inline Matrix enhance(const Matrix& index_returns, double annual_excess,
                      int periods_per_year) {
  if (periods_per_year <= 0) throw InvalidConfig("periods_per_year must be positive");
  return index_returns.array() + annual_excess / periods_per_year;
}

// Exponentially weighted recursive least squares on the inverse-Gram
// recursion. The prior P0 = 1/kRlsPrior * Gram keeps early weights tame while
// leaving end-state bias far below test tolerances.
inline constexpr double kRlsPrior = 1e6;
inline constexpr double kRlsConditionCap = 1e12;

struct RlsState {
  Matrix P;  // inverse Gram estimate, n x n
  Matrix w;  // weights, n x q

  RlsState(int n, int q)
      : P(Matrix::Identity(n, n) * kRlsPrior), w(Matrix::Zero(n, q)) {}
};

inline void rls_weights_step(RlsState& state, const Vector& x, const Vector& y,
                             double lambda) {
  if (x.size() != state.P.rows() || y.size() != state.w.cols())
    throw DimensionMismatch("sample does not match tracker size");
  if (lambda <= 0.0 || lambda > 1.0) throw InvalidHyper("lambda must be in (0,1]");
  Vector Px = state.P * x;
  double denom = lambda + x.dot(Px);
  Vector g = Px / denom;
  state.w += g * (y.transpose() - x.transpose() * state.w);
  state.P = (state.P - g * (x.transpose() * state.P)) / lambda;
  state.P = ((state.P + state.P.transpose()) * 0.5).eval();
  if (!state.w.allFinite() || !state.P.allFinite() ||
      state.P.cwiseAbs().maxCoeff() > kRlsConditionCap)
    throw IllConditioned("effective Gram is singular beyond tolerance");
}

struct BacktestResult {
  std::vector<std::vector<int>> holdings;   // per period, ascending stock indices
  std::vector<Vector> weights;              // per period, per-stock combined weight
  Matrix per_target_returns;                // T x q, x_t . beta_t per index target
  std::vector<double> portfolio_returns;    // per period, combined across targets
  std::vector<double> cumulative;           // compounded, post burn-in accounting
  Matrix target_cumulative;                 // T x q
  int burn_in = 0;
};

inline int tracking_burn_in(int R) { return std::max(10, R + 1); }

// Dynamic portfolio: theta_1 = portfolio_size over stock returns as x and
// enhanced targets as y. A period's return is x_t . beta_t, combined across
// index targets by averaging (an equal budget split across the q trackers);
// the first burn-in periods are excluded from accounting.
inline BacktestResult backtest_ispls(const Matrix& stock_returns, const Matrix& targets,
                                     HyperParams hyper, int portfolio_size) {
  const int T = static_cast<int>(stock_returns.rows());
  const int p = static_cast<int>(stock_returns.cols());
  const int q = static_cast<int>(targets.cols());
  if (targets.rows() != T) throw DimensionMismatch("return/target horizons differ");
  if (portfolio_size < 1 || portfolio_size > p)
    throw InvalidConfig("portfolio size must be in [1, p]");
  hyper.thetas.assign(hyper.R, portfolio_size);

  BacktestResult result;
  result.burn_in = tracking_burn_in(hyper.R);
  result.per_target_returns = Matrix::Zero(T, q);
  result.target_cumulative = Matrix::Zero(T, q);
  OnlineState state(p, q, hyper);
  Vector cum_targets = Vector::Ones(q);
  double cum = 1.0;
  for (int t = 0; t < T; ++t) {
    Vector x = stock_returns.row(t);
    Vector y = targets.row(t);
    state.covariance_update(x, y);
    try {
      state.sim_sparse_step();
    } catch (const DegenerateColumn& e) {
      if (t >= result.burn_in)
        throw DegenerateColumn("period " + std::to_string(t + 1) + ": " + e.what());
      // early rank deficiency: hold previous weights
    }
    StepOutput out = state.compute_output(x, y);
    result.holdings.push_back(out.selected[0]);
    Vector combined = out.beta.rowwise().mean();
    result.weights.push_back(combined);
    result.per_target_returns.row(t) = out.beta.transpose() * x;
    double rt = result.per_target_returns.row(t).mean();
    result.portfolio_returns.push_back(rt);
    if (t >= result.burn_in) {
      cum *= 1.0 + rt;
      cum_targets.array() *= 1.0 + targets.row(t).transpose().array();
    }
    result.cumulative.push_back(cum - 1.0);
    result.target_cumulative.row(t) = cum_targets.transpose().array() - 1.0;
  }
  return result;
}

// Fixed random memberships, time-varying RLS weights, returns averaged across
// portfolios per period and then compounded. Ill-conditioned portfolios are
// dropped with a recorded count.
struct BaselineResult {
  std::vector<double> mean_returns;  // per period
  std::vector<double> cumulative;    // compounded, post burn-in accounting
  int skipped = 0;
};

inline BaselineResult random_portfolio_baseline(const Matrix& stock_returns,
                                                const Matrix& targets, int n_portfolios,
                                                int size, double lambda,
                                                std::uint64_t seed, int burn_in = 10) {
  const int T = static_cast<int>(stock_returns.rows());
  const int p = static_cast<int>(stock_returns.cols());
  const int q = static_cast<int>(targets.cols());
  if (targets.rows() != T) throw DimensionMismatch("return/target horizons differ");
  if (size < 1 || size > p) throw InvalidConfig("portfolio size must be in [1, p]");
  if (n_portfolios < 1) throw InvalidConfig("need at least one portfolio");

  Rng rng(seed);
  Matrix sum_returns = Matrix::Zero(T, 1);
  int kept = 0;
  BaselineResult result;
  for (int i = 0; i < n_portfolios; ++i) {
    std::vector<int> members = rng.sample_without_replacement(p, size);
    RlsState state(size, q);
    Matrix rets(T, 1);
    bool ok = true;
    for (int t = 0; t < T && ok; ++t) {
      Vector x(size);
      for (int k = 0; k < size; ++k) x[k] = stock_returns(t, members[k]);
      Vector y = targets.row(t);
      try {
        rls_weights_step(state, x, y, lambda);
      } catch (const IllConditioned&) {
        ok = false;
        break;
      }
      rets(t, 0) = (state.w.transpose() * x).mean();
    }
    if (!ok) {
      ++result.skipped;
      continue;
    }
    sum_returns += rets;
    ++kept;
  }
  if (kept == 0) throw IllConditioned("every baseline portfolio was ill-conditioned");
  double cum = 1.0;
  for (int t = 0; t < T; ++t) {
    double rt = sum_returns(t, 0) / kept;
    result.mean_returns.push_back(rt);
    if (t >= burn_in) cum *= 1.0 + rt;
    result.cumulative.push_back(cum - 1.0);
  }
  return result;
}

// Planted-factor synthetic: one positive-drift weekly driver moves the first
// n_planted stocks and both indices; the rest is noise. Prices compound from
// a base of 100.
inline PriceTable gen_tracking_synthetic(int n_stocks, int q, int T, int n_planted,
                                         std::uint64_t seed) {
  if (n_planted < 1 || n_planted > n_stocks) throw InvalidConfig("bad planted count");
  if (q < 1 || q > 2) throw InvalidConfig("synthetic supports one or two indices");
  Rng rng(seed);
  std::vector<double> f(T);
  for (int t = 0; t < T; ++t) f[t] = rng.normal(0.003, 0.02);
  std::vector<double> load(n_planted);
  for (int i = 0; i < n_planted; ++i) load[i] = rng.uniform(0.8, 1.2);

  Matrix stock_r(T, n_stocks);
  for (int i = 0; i < n_stocks; ++i) {
    for (int t = 0; t < T; ++t) {
      if (i < n_planted)
        stock_r(t, i) = load[i] * f[t] + rng.normal(0.0, 0.005);
      else
        stock_r(t, i) = rng.normal(0.0005, 0.03);
    }
  }
  const double idx_load[2] = {1.0, 0.8};
  Matrix index_r(T, q);
  for (int k = 0; k < q; ++k)
    for (int t = 0; t < T; ++t) index_r(t, k) = idx_load[k] * f[t] + rng.normal(0.0, 0.002);

  PriceTable table;
  table.index_prices.resize(T + 1, q);
  table.stock_prices.resize(T + 1, n_stocks);
  table.index_prices.row(0).setConstant(100.0);
  table.stock_prices.row(0).setConstant(100.0);
  for (int t = 0; t < T; ++t) {
    table.index_prices.row(t + 1) =
        table.index_prices.row(t).cwiseProduct((1.0 + index_r.row(t).array()).matrix());
    table.stock_prices.row(t + 1) =
        table.stock_prices.row(t).cwiseProduct((1.0 + stock_r.row(t).array()).matrix());
  }
  for (int t = 0; t <= T; ++t) table.dates.push_back(std::to_string(t + 1));
  return table;
}

inline void write_prices_csv(const std::string& path, const PriceTable& table) {
  csv::Writer w(path);
  std::vector<std::string> header{"date"};
  for (Eigen::Index k = 0; k < table.index_prices.cols(); ++k)
    header.push_back("idx" + std::to_string(k + 1));
  for (Eigen::Index i = 0; i < table.stock_prices.cols(); ++i)
    header.push_back("s" + std::to_string(i + 1));
  w.header(header);
  for (Eigen::Index t = 0; t < table.index_prices.rows(); ++t) {
    std::vector<std::string> row{table.dates[t]};
    for (Eigen::Index k = 0; k < table.index_prices.cols(); ++k)
      row.push_back(csv::fmt(table.index_prices(t, k)));
    for (Eigen::Index i = 0; i < table.stock_prices.cols(); ++i)
      row.push_back(csv::fmt(table.stock_prices(t, i)));
    w.raw_row(row);
  }
}

}  // namespace ispls
