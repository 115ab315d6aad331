// Command-line front end: data generation, batch fitting, online streaming,
// Monte Carlo aggregation and index-tracking backtests. Every run writes a
// config echo sufficient to reproduce its outputs bit for bit.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "ispls/ispls.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

void write_config(const fs::path& dir, const json& j) {
  std::ofstream out(dir / "config.json", std::ios::binary);
  out << j.dump(2) << '\n';
}

fs::path prepare_out(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

ispls::HyperParams make_hyper(double alpha, double lambda, int components,
                              std::vector<int> thetas, double tau, int p) {
  ispls::HyperParams h;
  h.alpha = alpha;
  h.lambda = lambda;
  h.R = components;
  h.tau = tau;
  if (thetas.empty()) thetas.assign(components, p);
  if (static_cast<int>(thetas.size()) == 1 && components > 1)
    thetas.assign(components, thetas[0]);
  h.thetas = std::move(thetas);
  return h;
}

json hyper_json(const ispls::HyperParams& h) {
  return json{{"alpha", h.alpha},
              {"lambda", h.lambda},
              {"components", h.R},
              {"theta", h.thetas},
              {"tau", h.tau}};
}

int run_gen(int T, std::uint64_t seed, const std::string& schedule, bool standardize,
            const std::string& out) {
  bool drift = schedule == "paper-drift" || schedule == "drift";
  ispls::SimOutput sim = ispls::simulate(T, drift, seed, standardize);
  fs::path dir = prepare_out(out);
  ispls::write_stream_csv((dir / "stream.csv").string(), sim.X, sim.Y);
  ispls::write_truth_csv((dir / "truth.csv").string(), sim.schedule, T);
  write_config(dir, json{{"command", "gen"},
                         {"T", T},
                         {"seed", seed},
                         {"schedule", schedule},
                         {"standardize", standardize},
                         {"out", out}});
  return 0;
}

int run_fit(const std::string& data, double alpha, int components,
            std::vector<int> thetas, double tau, bool no_center,
            const std::string& out) {
  auto [X, Y] = ispls::read_stream_csv(data);
  ispls::HyperParams h =
      make_hyper(alpha, 1.0, components, std::move(thetas), tau, static_cast<int>(X.cols()));
  ispls::SparseModel model = ispls::fit_sbpls({X, Y}, h, !no_center);
  fs::path dir = prepare_out(out);
  {
    ispls::csv::Writer w((dir / "weights.csv").string());
    w.header({"component", "variable_index", "weight"});
    for (int r = 0; r < h.R; ++r)
      for (Eigen::Index i = 0; i < model.U.rows(); ++i)
        if (model.U(i, r) != 0.0) w.row(r + 1, static_cast<int>(i) + 1, model.U(i, r));
  }
  {
    ispls::csv::Writer w((dir / "beta.csv").string());
    std::vector<std::string> header{"variable_index"};
    for (Eigen::Index k = 0; k < model.beta.cols(); ++k)
      header.push_back("beta_" + std::to_string(k + 1));
    w.header(header);
    for (Eigen::Index i = 0; i < model.beta.rows(); ++i) {
      std::vector<std::string> row{ispls::csv::fmt(static_cast<int>(i) + 1)};
      for (Eigen::Index k = 0; k < model.beta.cols(); ++k)
        row.push_back(ispls::csv::fmt(model.beta(i, k)));
      w.raw_row(row);
    }
  }
  json cfg{{"command", "fit"}, {"data", data}, {"center", !no_center}, {"out", out}};
  cfg.update(hyper_json(h));
  write_config(dir, cfg);
  return 0;
}

int run_stream(const std::string& data, double alpha, double lambda, int components,
               std::vector<int> thetas, double tau, const std::string& out) {
  auto [X, Y] = ispls::read_stream_csv(data);
  const int p = static_cast<int>(X.cols());
  const int q = static_cast<int>(Y.cols());
  ispls::HyperParams h = make_hyper(alpha, lambda, components, std::move(thetas), tau, p);
  ispls::OnlineState state(p, q, h);
  fs::path dir = prepare_out(out);
  ispls::csv::Writer sel((dir / "selection.csv").string());
  sel.header({"t", "component", "variable_index", "weight"});
  ispls::csv::Writer pred((dir / "predictions.csv").string());
  {
    std::vector<std::string> header{"t"};
    for (int k = 0; k < q; ++k) header.push_back("y_hat" + std::to_string(k + 1));
    pred.header(header);
  }
  for (Eigen::Index t = 0; t < X.rows(); ++t) {
    ispls::Vector x = X.row(t);
    ispls::Vector y = Y.row(t);
    state.covariance_update(x, y);
    try {
      state.sim_sparse_step();
    } catch (const ispls::DegenerateColumn&) {
      // hold previous weights for this step
    }
    ispls::StepOutput step = state.compute_output(x, y);
    for (int r = 0; r < h.R; ++r)
      ispls::write_selection_row(sel, static_cast<int>(t) + 1, r, state.U());
    std::vector<std::string> row{ispls::csv::fmt(static_cast<int>(t) + 1)};
    for (int k = 0; k < q; ++k) row.push_back(ispls::csv::fmt(step.y_hat[k]));
    pred.raw_row(row);
  }
  json cfg{{"command", "stream"}, {"data", data}, {"out", out}};
  cfg.update(hyper_json(h));
  write_config(dir, cfg);
  return 0;
}

int run_mc(int reps, int T, std::uint64_t seed, const std::string& schedule,
           std::vector<double> lambdas, double alpha, int components,
           std::vector<int> thetas, double tau, bool standardize,
           const std::string& out) {
  if (lambdas.empty()) lambdas = {0.98};
  if (thetas.empty()) thetas.assign(components, ispls::kStreamsPerGroup);
  ispls::ReplicateConfig config;
  config.T = T;
  config.drift = schedule == "paper-drift" || schedule == "drift";
  config.standardize = standardize;
  config.hyper =
      make_hyper(alpha, lambdas[0], components, std::move(thetas), tau, ispls::kNumStreams);
  ispls::SweepResult sweep = ispls::lambda_sweep(config, lambdas, reps, seed);
  fs::path dir = prepare_out(out);
  for (std::size_t li = 0; li < lambdas.size(); ++li)
    ispls::write_aggregate_csv(
        (dir / ("aggregate_lambda_" + ispls::csv::fmt(lambdas[li]) + ".csv")).string(),
        sweep.curves[li]);
  {
    ispls::csv::Writer w((dir / "recovery.csv").string());
    w.header({"lambda", "switch_t", "recovery_t"});
    ispls::RegimeSchedule shape =
        config.drift ? ispls::drift_schedule(0) : ispls::static_schedule(0);
    for (std::size_t li = 0; li < lambdas.size(); ++li)
      for (std::size_t s = 0; s + 1 < shape.breakpoints.size(); ++s)
        w.row(lambdas[li], shape.breakpoints[s + 1],
              sweep.recovery[li][s] == ispls::kNoRecovery ? -1 : sweep.recovery[li][s]);
  }
  json cfg{{"command", "mc"},      {"reps", reps},
           {"T", T},               {"seed", seed},
           {"schedule", schedule}, {"lambdas", lambdas},
           {"standardize", standardize}, {"out", out}};
  cfg.update(hyper_json(config.hyper));
  write_config(dir, cfg);
  return 0;
}

int run_track(const std::string& prices, bool synthetic, std::uint64_t seed, int q,
              double alpha, double lambda, int components, int portfolio_size,
              double enhance_rate, int ppy, int n_baseline, double tau,
              const std::string& out) {
  fs::path dir = prepare_out(out);
  ispls::PriceTable table;
  if (synthetic) {
    table = ispls::gen_tracking_synthetic(100, q, 400, 10, seed);
    ispls::write_prices_csv((dir / "prices.csv").string(), table);
  } else {
    if (prices.empty()) throw ispls::InvalidConfig("need --prices or --synthetic");
    table = ispls::load_prices(prices, q);
  }
  ispls::ReturnsPair rets = ispls::to_returns(table);
  ispls::Matrix targets = ispls::enhance(rets.index_returns, enhance_rate, ppy);
  ispls::HyperParams h;
  h.alpha = alpha;
  h.lambda = lambda;
  h.R = components;
  h.tau = tau;
  h.thetas.assign(components, portfolio_size);
  ispls::BacktestResult bt =
      ispls::backtest_ispls(rets.stock_returns, targets, h, portfolio_size);
  ispls::BaselineResult bl = ispls::random_portfolio_baseline(
      rets.stock_returns, targets, n_baseline, portfolio_size, lambda,
      ispls::split_seed(seed, 9001), bt.burn_in);
  {
    ispls::csv::Writer w((dir / "backtest.csv").string());
    std::vector<std::string> header{"t", "cumulative_model"};
    for (int k = 0; k < q; ++k)
      header.push_back("cumulative_target_" + std::to_string(k + 1));
    header.push_back("cumulative_random_mean");
    w.header(header);
    for (std::size_t t = 0; t < bt.cumulative.size(); ++t) {
      std::vector<std::string> row{ispls::csv::fmt(static_cast<int>(t) + 1),
                                   ispls::csv::fmt(bt.cumulative[t])};
      for (int k = 0; k < q; ++k)
        row.push_back(ispls::csv::fmt(bt.target_cumulative(t, k)));
      row.push_back(ispls::csv::fmt(bl.cumulative[t]));
      w.raw_row(row);
    }
  }
  {
    ispls::csv::Writer w((dir / "holdings.csv").string());
    w.header({"t", "stock_index", "weight"});
    for (std::size_t t = 0; t < bt.holdings.size(); ++t)
      for (int i : bt.holdings[t])
        w.row(static_cast<int>(t) + 1, i + 1, bt.weights[t][i]);
  }
  if (bl.skipped > 0)
    std::cout << "baseline portfolios skipped as ill-conditioned: " << bl.skipped << "\n";
  json cfg{{"command", "track"},
           {"prices", synthetic ? "synthetic" : prices},
           {"synthetic", synthetic},
           {"seed", seed},
           {"q", q},
           {"portfolio_size", portfolio_size},
           {"enhance", enhance_rate},
           {"periods_per_year", ppy},
           {"baseline_portfolios", n_baseline},
           {"out", out}};
  cfg.update(hyper_json(h));
  write_config(dir, cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"incremental sparse bridge partial least squares toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic stream dataset");
  int gen_T = 400;
  std::uint64_t gen_seed = 1;
  std::string gen_schedule = "paper-drift";
  bool gen_std = false;
  std::string gen_out = "out_gen";
  gen->add_option("--T", gen_T, "horizon (rows)");
  gen->add_option("--seed", gen_seed, "master seed");
  gen->add_option("--schedule", gen_schedule, "static | paper-drift")
      ->check(CLI::IsMember({"static", "paper-drift", "drift"}));
  gen->add_flag("--standardize", gen_std, "equalize group energies");
  gen->add_option("--out", gen_out, "output directory");

  // shared numeric flags per modelling subcommand
  double alpha = 1e-5, lambda = 0.98, tau = 1e-8;
  int components = 2;
  std::vector<int> thetas;

  auto add_shared = [&](CLI::App* cmd, bool with_lambda) {
    cmd->add_option("--alpha", alpha, "ridge mixing weight");
    if (with_lambda) cmd->add_option("--lambda", lambda, "forgetting factor");
    cmd->add_option("--components", components, "component count R");
    cmd->add_option("--theta", thetas, "sparsity target, repeatable per component");
    cmd->add_option("--tau", tau, "inner-loop tolerance");
  };

  auto* fit = app.add_subcommand("fit", "batch sparse bridge PLS fit");
  std::string fit_data, fit_out = "out_fit";
  bool fit_no_center = false;
  fit->add_option("--data", fit_data, "stream CSV (t,x...,y...)")->required();
  add_shared(fit, false);
  fit->add_flag("--no-center", fit_no_center, "skip column mean-centering");
  fit->add_option("--out", fit_out, "output directory");

  auto* stream = app.add_subcommand("stream", "drive the online engine over a stream CSV");
  std::string stream_data, stream_out = "out_stream";
  stream->add_option("--data", stream_data, "stream CSV (t,x...,y...)")->required();
  add_shared(stream, true);
  stream->add_option("--out", stream_out, "output directory");

  auto* mc = app.add_subcommand("mc", "Monte Carlo selection-accuracy experiment");
  int mc_reps = 100, mc_T = 400;
  std::uint64_t mc_seed = 1;
  std::string mc_schedule = "paper-drift", mc_out = "out_mc";
  std::vector<double> mc_lambdas;
  bool mc_raw = false;
  mc->add_option("--reps", mc_reps, "replicate count");
  mc->add_option("--T", mc_T, "horizon");
  mc->add_option("--seed", mc_seed, "master seed");
  mc->add_option("--schedule", mc_schedule, "static | paper-drift")
      ->check(CLI::IsMember({"static", "paper-drift", "drift"}));
  mc->add_option("--lambda", mc_lambdas, "forgetting factor, repeatable for a sweep");
  mc->add_option("--alpha", alpha, "ridge mixing weight");
  mc->add_option("--components", components, "component count R");
  mc->add_option("--theta", thetas, "sparsity target, repeatable per component");
  mc->add_option("--tau", tau, "inner-loop tolerance");
  mc->add_flag("--raw", mc_raw, "feed raw streams (skip group standardization)");
  mc->add_option("--out", mc_out, "output directory");

  auto* track = app.add_subcommand("track", "enhanced index-tracking backtest");
  std::string track_prices, track_out = "out_track";
  bool track_synth = false;
  std::uint64_t track_seed = 1;
  int track_q = 2, track_size = 10, track_ppy = 52, track_nbase = 200;
  double track_lambda = 0.99, track_enhance = 0.15;
  int track_components = 1;
  track->add_option("--prices", track_prices, "price CSV (date,idx...,s...)");
  track->add_flag("--synthetic", track_synth, "generate the planted-factor dataset");
  track->add_option("--seed", track_seed, "seed for synthetic data and baseline");
  track->add_option("--q", track_q, "index count");
  track->add_option("--alpha", alpha, "ridge mixing weight");
  track->add_option("--lambda", track_lambda, "forgetting factor");
  track->add_option("--components", track_components, "component count R");
  track->add_option("--portfolio-size", track_size, "holdings per period");
  track->add_option("--enhance", track_enhance, "annual excess return target");
  track->add_option("--ppy", track_ppy, "periods per year");
  track->add_option("--baseline-portfolios", track_nbase, "random portfolio count");
  track->add_option("--tau", tau, "inner-loop tolerance");
  track->add_option("--out", track_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) return run_gen(gen_T, gen_seed, gen_schedule, gen_std, gen_out);
    if (*fit) return run_fit(fit_data, alpha, components, thetas, tau, fit_no_center, fit_out);
    if (*stream)
      return run_stream(stream_data, alpha, lambda, components, thetas, tau, stream_out);
    if (*mc)
      return run_mc(mc_reps, mc_T, mc_seed, mc_schedule, mc_lambdas, alpha, components,
                    thetas, tau, !mc_raw, mc_out);
    if (*track)
      return run_track(track_prices, track_synth, track_seed, track_q, alpha, track_lambda,
                       track_components, track_size, track_enhance, track_ppy, track_nbase,
                       tau, track_out);
  } catch (const ispls::InvalidHyper& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ispls::InvalidConfig& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ispls::ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const ispls::RaggedRow& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const ispls::NonPositivePrice& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const ispls::DimensionMismatch& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const ispls::ScheduleGap& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const ispls::MisalignedHorizons& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const ispls::EmptyTruth& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const ispls::NonFinite& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const ispls::Error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
