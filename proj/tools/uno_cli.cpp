// SPDX-License-Identifier: Apache-2.0
// uno: experiment runner and calculators.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "uno/error.hpp"
#include "uno/harness.hpp"

using namespace uno;

namespace {

int cmd_run(const std::string& experiment, const std::string& config_path, std::optional<std::uint64_t> seed,
            std::optional<std::size_t> trials, const std::string& out, std::string format, bool serial) {
  nlohmann::json j = nlohmann::json::object();
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    require(static_cast<bool>(f), ErrorKind::io, "cannot open config " + config_path);
    j = nlohmann::json::parse(f);
  }
  j["experiment"] = experiment;
  harness::ExperimentConfig cfg = harness::ExperimentConfig::from_json(j);
  if (seed) cfg.seed = *seed;
  if (trials) cfg.trials = *trials;
  if (serial) cfg.parallel = false;
  if (!out.empty()) cfg.output = out;
  if (format.empty()) format = (out.size() > 5 && out.ends_with(".json")) ? "json" : "csv";

  const harness::ExperimentResult res = harness::run_experiment(cfg);
  auto emit = [&](std::ostream& os) {
    if (format == "json")
      harness::emit_json(os, res);
    else
      harness::emit_csv(os, res);
  };
  if (out.empty()) {
    emit(std::cout);
  } else {
    std::ofstream f(out, std::ios::binary);
    require(static_cast<bool>(f), ErrorKind::io, "cannot open " + out);
    emit(f);
  }
  for (const harness::Cell& c : res.cells)
    std::cerr << c.variant << " lambda=" << c.lambda << " sup=" << c.sup << " m=" << c.m << " sigma2=" << c.sigma2
              << " N=" << c.diff_order << " mean=" << c.mean_db << " dB std=" << c.std_db << '\n';
  return 0;
}

int cmd_check(const std::vector<int>& ids) {
  bool ok = true;
  for (int id : ids.empty() ? harness::exact_criteria() : ids) {
    const harness::CheckResult r = harness::run_criterion(id);
    std::cout << harness::format_line(r) << std::endl;
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unlimited one-bit sampling: experiments and calculators"};
  app.require_subcommand(1);

  std::string experiment, config_path, out, format;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  bool serial = false;
  auto* run = app.add_subcommand("run", "run an experiment and emit CSV or JSON");
  run->add_option("experiment", experiment, "experiment id")->required()->check(CLI::IsMember(harness::experiment_ids()));
  run->add_option("--config", config_path, "JSON config file");
  auto* seed_opt = run->add_option("--seed", seed, "base seed");
  auto* trials_opt = run->add_option("--trials", trials, "trials per cell")->check(CLI::PositiveNumber);
  run->add_option("--out", out, "output path (default stdout)");
  run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  run->add_flag("--serial", serial, "run trials on one thread");

  std::vector<int> ids;
  auto* check = app.add_subcommand("check", "run the exact-invariant acceptance checks");
  check->add_option("--id", ids, "criterion ids (default: exact subset)")->check(CLI::Range(1, 12));

  double beta = 0, lambda = 0, e_inf = 0, omega = 1, zeta = 1.0001;
  bool noisy_flag = false;
  double omega0 = 0, eps1 = 0;
  std::size_t n = 0;
  auto* plan = app.add_subcommand("plan-rate", "oversampling exponent h and dt bound; optional RKA iteration bound");
  plan->add_option("--beta", beta, "sup-norm bound beta_x")->required();
  plan->add_option("--lambda", lambda, "ADC threshold")->required();
  plan->add_option("--e-inf", e_inf, "RKA error sup-norm (or combined noise bound with --noisy)")->required();
  plan->add_option("--omega-max", omega, "max angular frequency (rad/s)");
  plan->add_option("--zeta", zeta, "margin > 1");
  plan->add_flag("--noisy", noisy_flag, "treat --e-inf as the combined noise bound");
  auto* o0 = plan->add_option("--omega0", omega0, "initial squared distance for the iteration bound");
  plan->add_option("--eps1", eps1, "target squared error")->needs(o0);
  plan->add_option("--n", n, "signal length")->needs(o0);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run)
      return cmd_run(experiment, config_path, seed_opt->count() ? std::optional(seed) : std::nullopt,
                     trials_opt->count() ? std::optional(trials) : std::nullopt, out, format, serial);
    if (*check) return cmd_check(ids);
    const auto p = noisy_flag ? noisy::plan_noisy_rate(beta, lambda, e_inf, omega, zeta)
                              : pipeline::plan_rate(beta, lambda, e_inf, omega, zeta);
    nlohmann::json j{{"h", p.h}, {"dt_required", p.dt_required}, {"zeta", p.zeta}, {"e_inf", p.e_inf}};
    if (o0->count()) j["iterations"] = onebit::iteration_lower_bound(omega0, eps1, n);
    std::cout << j.dump(2) << '\n';
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
