// SPDX-License-Identifier: Apache-2.0
#include "uno/uno.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>

#include "uno/error.hpp"
#include "uno/modulo.hpp"

namespace uno::pipeline {

UnoMeasurements uno_sample(const signals::SampledSignal& x, double lambda, std::size_t m, std::uint64_t seed) {
  x.validate();
  require(lambda > 0.0, ErrorKind::invalid_parameter, "lambda must be positive");
  require(m >= 1, ErrorKind::invalid_parameter, "m must be at least 1");
  const modulo::ModuloSamples folded = modulo::fold(x.samples, lambda);
  onebit::ThresholdEnsemble thr = onebit::design_thresholds(lambda, x.size(), m, seed);
  onebit::SignMatrix r = onebit::quantize(folded, thr);
  return UnoMeasurements{std::move(r), std::move(thr), lambda, x.dt, x.omega_max};
}

UnoReconstruction uno_reconstruct(const UnoMeasurements& meas, double beta_x, std::uint64_t i_max,
                                  std::uint64_t seed, const ReconstructOptions& opts) {
  const double lambda = meas.lambda;
  require(meas.thresholds.m >= 1 && meas.signs.m() == meas.thresholds.m && meas.signs.n() == meas.thresholds.n,
          ErrorKind::invalid_parameter, "measurements need m >= 1 consistent threshold sequences");
  if (opts.plan)
    require(meas.dt <= opts.plan->dt_required * (1.0 + 1e-12), ErrorKind::rate_too_low,
            "sample interval exceeds the planned dt_required");
  const double c = meas.dt * meas.omega_max * std::numbers::e;
  require(c < 1.0, ErrorKind::rate_too_low, "dt*omega_max*e must be below 1");

  UnoReconstruction out;
  out.diff_order = modulo::min_diff_order(lambda, beta_x, meas.dt, meas.omega_max);

  onebit::RkaRun run;
  run.i_max = i_max;
  run.seed = seed;
  run.early_stop = opts.early_stop;
  onebit::RkaResult rka = onebit::rka_solve(meas.signs, meas.thresholds, run);
  out.iterations = rka.iterations;

  const double upper = std::nextafter(lambda, 0.0);
  for (auto& v : rka.estimate) v = std::clamp(v, -lambda, upper);
  out.modulo_estimate = std::move(rka.estimate);

  modulo::ModuloSamples xt{out.modulo_estimate, lambda};
  modulo::UnfoldConfig cfg{beta_x, out.diff_order, meas.dt, meas.omega_max};
  out.x_bar = modulo::unfold(xt, cfg);
  return out;
}

UnoRateplan plan_rate(double beta_x, double lambda, double e_inf, double omega_max, double zeta) {
  require(lambda > 0.0 && omega_max > 0.0, ErrorKind::invalid_parameter, "lambda and omega_max must be positive");
  require(beta_x >= lambda, ErrorKind::invalid_parameter, "beta_x must be at least lambda");
  require(e_inf >= 0.0, ErrorKind::invalid_parameter, "e_inf must be non-negative");
  require(zeta > 1.0, ErrorKind::invalid_parameter, "zeta must exceed 1");
  require(lambda >= 4.0 * zeta * e_inf, ErrorKind::threshold_too_small, "lambda below 4*zeta*e_inf");
  int h = 1;
  if (e_inf > 0.0) {
    const double raw = std::log(2.0 * beta_x / lambda) / std::log(lambda / (4.0 * e_inf));
    h = std::max(1, static_cast<int>(std::ceil(raw - 1e-9)));
  }
  const double dt_required = 1.0 / (std::ldexp(1.0, h) * omega_max * std::numbers::e);
  return UnoRateplan{h, dt_required, zeta, e_inf};
}

std::uint64_t default_i_max(double omega0, std::size_t n, std::size_t m, std::uint64_t sweeps) {
  const double eps1 = 1e-6 * static_cast<double>(n);
  std::uint64_t bound = 1;
  if (n >= 2 && omega0 > eps1) bound = onebit::iteration_lower_bound(omega0, eps1, n);
  return std::max<std::uint64_t>(bound, sweeps * static_cast<std::uint64_t>(m) * n);
}

double estimate_e_inf(double lambda, double nmse_modulo_db) noexcept {
  return lambda * std::pow(10.0, nmse_modulo_db / 20.0);
}

std::string Telemetry::to_json() const {
  nlohmann::json j{{"nmse_modulo_db", nmse_modulo_db}, {"nmse_final_db", nmse_final_db}, {"h", h},
                   {"N", N}, {"i_max", i_max}, {"seeds", seeds}};
  return j.dump();
}

}  // namespace uno::pipeline
