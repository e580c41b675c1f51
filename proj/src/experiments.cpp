// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "uno/error.hpp"
#include "uno/harness.hpp"
#include "uno/kernels.hpp"
#include "uno/modulo.hpp"
#include "uno/rng.hpp"

namespace uno::harness {

using nlohmann::json;

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids{"table1",      "table2",      "fig_nmse_vs_m", "sawtooth",
                                            "extreme_dr",  "table4_over", "table4_under",  "claim1"};
  return ids;
}

void ExperimentConfig::validate() const {
  require(std::find(experiment_ids().begin(), experiment_ids().end(), experiment) != experiment_ids().end(),
          ErrorKind::unknown_experiment, "unknown experiment '" + experiment + "'");
  require(trials >= 1, ErrorKind::config_invalid, "trials must be at least 1");
  require(!lambdas.empty() && !sups.empty() && !ms.empty() && !sigma2s.empty(), ErrorKind::config_invalid,
          "parameter grids must be non-empty");
  for (double l : lambdas) require(l > 0.0, ErrorKind::config_invalid, "lambda must be positive");
  for (auto m : ms) require(m >= 1, ErrorKind::config_invalid, "m must be at least 1");
  for (double s : sigma2s) require(s >= 0.0, ErrorKind::config_invalid, "sigma2 must be non-negative");
  require(n >= 2 && h >= 1 && dt > 0.0 && pieces >= 1 && sweeps >= 1, ErrorKind::config_invalid,
          "need n >= 2, h >= 1, dt > 0, pieces >= 1, sweeps >= 1");
  require(rows >= 1 && cols >= 1 && nonzeros >= 1 && nonzeros <= cols && oversample >= 1 && rate_factor >= 1,
          ErrorKind::config_invalid, "invalid linear-model settings");
  require(admm.beta > 0.0 && admm.k_max >= 1 && admm.eta >= 0.0, ErrorKind::config_invalid, "invalid ADMM settings");
}

json ExperimentConfig::to_json() const {
  return json{{"experiment", experiment},
              {"trials", trials},
              {"seed", seed},
              {"lambdas", lambdas},
              {"sups", sups},
              {"ms", ms},
              {"sigma2s", sigma2s},
              {"n", n},
              {"h", h},
              {"dt", dt},
              {"pieces", pieces},
              {"sweeps", sweeps},
              {"bandlimit", bandlimit},
              {"f0", f0},
              {"periods", periods},
              {"sigma_tau", sigma_tau},
              {"rate_factor", rate_factor},
              {"rows", rows},
              {"cols", cols},
              {"nonzeros", nonzeros},
              {"theta_sup", theta_sup},
              {"oversample", oversample},
              {"admm",
               {{"eta", admm.eta},
                {"beta", admm.beta},
                {"k_max", admm.k_max},
                {"denoiser", {{"kind", admm.denoiser.kind}, {"params", admm.denoiser.params}}}}},
              {"output", output}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  const std::string id = j.value("experiment", std::string("table1"));
  ExperimentConfig c = defaults(id);
  auto get = [&j](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("trials", c.trials);
  get("seed", c.seed);
  get("lambdas", c.lambdas);
  get("sups", c.sups);
  get("ms", c.ms);
  get("sigma2s", c.sigma2s);
  get("n", c.n);
  get("h", c.h);
  get("dt", c.dt);
  get("pieces", c.pieces);
  get("sweeps", c.sweeps);
  get("bandlimit", c.bandlimit);
  get("f0", c.f0);
  get("periods", c.periods);
  get("sigma_tau", c.sigma_tau);
  get("rate_factor", c.rate_factor);
  get("rows", c.rows);
  get("cols", c.cols);
  get("nonzeros", c.nonzeros);
  get("theta_sup", c.theta_sup);
  get("oversample", c.oversample);
  get("parallel", c.parallel);
  get("output", c.output);
  if (j.contains("admm")) {
    const json& a = j.at("admm");
    c.admm.eta = a.value("eta", c.admm.eta);
    c.admm.beta = a.value("beta", c.admm.beta);
    c.admm.k_max = a.value("k_max", c.admm.k_max);
    if (a.contains("denoiser")) {
      c.admm.denoiser.kind = a.at("denoiser").value("kind", c.admm.denoiser.kind);
      c.admm.denoiser.params = a.at("denoiser").value("params", c.admm.denoiser.params);
    }
  }
  return c;
}

ExperimentConfig ExperimentConfig::defaults(const std::string& experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  c.lambdas = {0.5};
  c.sups = {8.0};
  c.ms = {400};
  c.sigma2s = {0.0};
  if (experiment == "table1") {
    c.lambdas = {0.2, 0.5, 1.0};
  } else if (experiment == "table2") {
    c.sups = {10.0, 15.0, 20.0};
  } else if (experiment == "fig_nmse_vs_m") {
    c.sups = {20.0};
    c.ms = {50, 100, 200, 400, 800};
  } else if (experiment == "sawtooth") {
    c.sups = {1.0};
    c.lambdas = {1.0};  // unused: no folding
  } else if (experiment == "extreme_dr") {
    c.lambdas = {1.0};
    c.sups = {1000.0};
    c.trials = 1;
  } else if (experiment == "claim1") {
    c.ms = {400, 1600};
  } else if (experiment == "table4_over" || experiment == "table4_under") {
    c.lambdas = {1.5};
    c.sigma2s = {0.1, 0.05, 0.01};
    c.sweeps = 12;
    c.cols = experiment == "table4_over" ? 100 : 1000;
    c.nonzeros = c.cols / 10;
  }
  return c;
}

bool ExperimentResult::same_data(const ExperimentResult& other) const {
  return config_echo == other.config_echo && cells == other.cells;
}

void finalize(Cell& c) {
  const auto k = static_cast<double>(c.nmse_db.size());
  c.mean_db = std::accumulate(c.nmse_db.begin(), c.nmse_db.end(), 0.0) / k;
  double ss = 0.0;
  for (double v : c.nmse_db) ss += (v - c.mean_db) * (v - c.mean_db);
  c.std_db = c.nmse_db.size() > 1 ? std::sqrt(ss / (k - 1.0)) : 0.0;
}

namespace {

struct TrialOut {
  double nmse = 0.0;
  double raw = 0.0;
  int diff_order = 0;
  std::uint64_t i_max = 0;
};

struct CellPlan {
  Cell cell;
  std::function<TrialOut(std::uint64_t seed)> trial;
};

int grid_h(double dt, double omega) { return static_cast<int>(std::floor(-std::log2(dt * omega * std::numbers::e) + 1e-9)); }

/// Band-limited trial on a grid with dt*omega*e = 2^-h.
TrialOut bandlimited_trial(const ExperimentConfig& cfg, std::size_t n, double dt, double omega, double lambda,
                           double sup, std::size_t m, std::uint64_t seed) {
  const signals::SampledSignal x = signals::gen_bandlimited_random(n, omega, dt, sup, seed, cfg.pieces);
  const pipeline::UnoMeasurements meas = pipeline::uno_sample(x, lambda, m, seed);
  const double beta = modulo::beta_for(sup, lambda);
  const std::uint64_t i_max = pipeline::default_i_max(static_cast<double>(n) * lambda * lambda, n, m, cfg.sweeps);
  const pipeline::UnoReconstruction rec = pipeline::uno_reconstruct(meas, beta, i_max, seed);
  TrialOut out;
  out.diff_order = rec.diff_order;
  out.i_max = i_max;
  out.raw = signals::nmse_db(x.samples, modulo::align_offset(x.samples, rec.x_bar, lambda));
  out.nmse = cfg.bandlimit
                 ? signals::nmse_db(x.samples, modulo::align_offset(
                                                   x.samples, signals::bandlimit_project(rec.x_bar, omega, dt), lambda))
                 : out.raw;
  return out;
}

/// One-bit reconstruction without folding: thresholds N(0, sigma^2), RKA only.
TrialOut nofold_trial(const ExperimentConfig& cfg, const signals::SampledSignal& x, double sigma, std::size_t m,
                      std::uint64_t seed, bool project) {
  const std::size_t n = x.size();
  const onebit::ThresholdEnsemble thr = onebit::gaussian_thresholds(sigma, n, m, seed);
  const onebit::SignMatrix r = onebit::quantize(x.samples, thr);
  onebit::RkaRun run;
  run.i_max = pipeline::default_i_max(static_cast<double>(n) * sigma * sigma, n, m, cfg.sweeps);
  run.seed = seed;
  run.early_stop = true;
  const onebit::RkaResult res = onebit::rka_solve(r, thr, run);
  TrialOut out;
  out.i_max = run.i_max;
  out.raw = signals::nmse_db(x.samples, res.estimate);
  out.nmse = project ? signals::nmse_db(x.samples, signals::bandlimit_project(res.estimate, x.omega_max, x.dt))
                     : out.raw;
  return out;
}

noisy::LinearModel make_model(const ExperimentConfig& cfg, double sigma2, std::uint64_t seed) {
  CounterRng rng = CounterRng(seed).substream(stream::model);
  std::normal_distribution<double> gauss(0.0, 1.0);
  noisy::LinearModel model;
  model.a_matrix.resize(static_cast<Eigen::Index>(cfg.rows), static_cast<Eigen::Index>(cfg.cols));
  for (Eigen::Index j = 0; j < model.a_matrix.cols(); ++j)
    for (Eigen::Index i = 0; i < model.a_matrix.rows(); ++i) model.a_matrix(i, j) = gauss(rng);
  std::vector<std::size_t> idx(cfg.cols);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  model.theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cfg.cols));
  for (std::size_t q = 0; q < cfg.nonzeros; ++q) model.theta[static_cast<Eigen::Index>(idx[q])] = gauss(rng);
  model.theta *= cfg.theta_sup / (model.a_matrix * model.theta).cwiseAbs().maxCoeff();
  model.sigma_eps = std::sqrt(sigma2);
  return model;
}

std::vector<CellPlan> plan_cells(const ExperimentConfig& cfg) {
  std::vector<CellPlan> plans;
  const std::string& id = cfg.experiment;
  const double omega = 1.0 / (std::ldexp(1.0, cfg.h) * std::numbers::e * cfg.dt);

  auto base_cell = [&](double lambda, double sup, std::size_t m, double sigma2, const std::string& variant) {
    Cell c;
    c.lambda = lambda;
    c.sup = sup;
    c.m = m;
    c.sigma2 = sigma2;
    c.variant = variant;
    c.n = cfg.n;
    c.dt = cfg.dt;
    c.h = cfg.h;
    return c;
  };

  if (id == "table1" || id == "table2" || id == "fig_nmse_vs_m") {
    for (double lambda : cfg.lambdas)
      for (double sup : cfg.sups)
        for (std::size_t m : cfg.ms)
          plans.push_back({base_cell(lambda, sup, m, 0.0, "uno"), [&cfg, omega, lambda, sup, m](std::uint64_t s) {
                             return bandlimited_trial(cfg, cfg.n, cfg.dt, omega, lambda, sup, m, s);
                           }});
  } else if (id == "extreme_dr") {
    const std::size_t n = cfg.n * cfg.rate_factor;
    const double dt = cfg.dt / static_cast<double>(cfg.rate_factor);
    for (double lambda : cfg.lambdas)
      for (double sup : cfg.sups)
        for (std::size_t m : cfg.ms) {
          Cell c = base_cell(lambda, sup, m, 0.0, "uno");
          c.n = n;
          c.dt = dt;
          c.h = grid_h(dt, omega);
          plans.push_back({c, [&cfg, n, dt, omega, lambda, sup, m](std::uint64_t s) {
                             return bandlimited_trial(cfg, n, dt, omega, lambda, sup, m, s);
                           }});
        }
  } else if (id == "sawtooth") {
    const signals::SampledSignal saw = signals::gen_sawtooth(cfg.f0, cfg.periods, cfg.dt, cfg.sups.front());
    for (std::size_t m : cfg.ms) {
      Cell c = base_cell(0.0, cfg.sups.front(), m, 0.0, "onebit");
      c.n = saw.size();
      c.h = 0;
      plans.push_back({c, [&cfg, saw, m](std::uint64_t s) { return nofold_trial(cfg, saw, cfg.sigma_tau, m, s, false); }});
    }
  } else if (id == "claim1") {
    for (double lambda : cfg.lambdas)
      for (double sup : cfg.sups)
        for (std::size_t m : cfg.ms) {
          plans.push_back({base_cell(0.0, sup, m, 0.0, "nofold"), [&cfg, omega, sup, m](std::uint64_t s) {
                             const signals::SampledSignal x =
                                 signals::gen_bandlimited_random(cfg.n, omega, cfg.dt, sup, s, cfg.pieces);
                             return nofold_trial(cfg, x, cfg.sigma_tau, m, s, cfg.bandlimit);
                           }});
          plans.push_back({base_cell(lambda, sup, m, 0.0, "uno"), [&cfg, omega, lambda, sup, m](std::uint64_t s) {
                             return bandlimited_trial(cfg, cfg.n, cfg.dt, omega, lambda, sup, m, s);
                           }});
        }
  } else {  // table4_over, table4_under
    const double dt_fine = cfg.dt / static_cast<double>(cfg.oversample);
    const double omega_coarse = std::numbers::pi / cfg.dt;
    for (double lambda : cfg.lambdas)
      for (std::size_t m : cfg.ms)
        for (double sigma2 : cfg.sigma2s) {
          Cell c = base_cell(lambda, cfg.theta_sup, m, sigma2, "admm");
          c.n = cfg.rows * cfg.oversample;
          c.dt = dt_fine;
          c.h = grid_h(dt_fine, omega_coarse);
          plans.push_back({c, [&cfg, lambda, m, sigma2](std::uint64_t s) {
                             const noisy::LinearModel model = make_model(cfg, sigma2, s);
                             noisy::NoisyUnoOptions opts;
                             opts.dt = cfg.dt;
                             opts.oversample = cfg.oversample;
                             opts.m = m;
                             opts.sweeps = cfg.sweeps;
                             const noisy::NoisyUnoResult res = noisy::noisy_uno(model, lambda, cfg.admm, {s, s, s}, opts);
                             TrialOut out;
                             out.diff_order = res.diff_order;
                             out.i_max = res.i_max;
                             out.nmse = signals::nmse_db(std::span<const double>(model.theta.data(), model.theta.size()),
                                                         std::span<const double>(res.theta_hat.data(), res.theta_hat.size()));
                             const Eigen::VectorXd clean = model.a_matrix * model.theta;
                             out.raw = signals::nmse_db(std::span<const double>(clean.data(), clean.size()), res.y_bar);
                             return out;
                           }});
        }
  }
  return plans;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  std::vector<CellPlan> plans = plan_cells(cfg);
  const std::size_t trials = cfg.trials;
  std::vector<TrialOut> outs(plans.size() * trials);
  auto body = [&](std::size_t idx) {
    const std::size_t c = idx / trials, t = idx % trials;
    outs[idx] = plans[c].trial(cfg.seed + t);
  };
  if (cfg.parallel)
    kernels::for_each_parallel(outs.size(), body);
  else
    kernels::for_each_serial(outs.size(), body);

  ExperimentResult res;
  res.config = cfg;
  res.config_echo = cfg.to_json();
  for (std::size_t c = 0; c < plans.size(); ++c) {
    Cell cell = plans[c].cell;
    for (std::size_t t = 0; t < trials; ++t) {
      const TrialOut& o = outs[c * trials + t];
      cell.seeds.push_back(cfg.seed + t);
      cell.nmse_db.push_back(o.nmse);
      cell.nmse_raw_db.push_back(o.raw);
      cell.diff_order = std::max(cell.diff_order, o.diff_order);
      cell.i_max = std::max(cell.i_max, o.i_max);
    }
    finalize(cell);
    res.cells.push_back(std::move(cell));
  }
  res.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace uno::harness
