// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uno/onebit.hpp"
#include "uno/signals.hpp"

namespace uno::pipeline {

struct UnoMeasurements {
  onebit::SignMatrix signs;
  onebit::ThresholdEnsemble thresholds;
  double lambda = 1.0;
  double dt = 1.0;
  double omega_max = 1.0;
};

struct UnoRateplan {
  int h = 1;
  double dt_required = 0.0;
  double zeta = 1.0;
  double e_inf = 0.0;
};

/// Fold, design thresholds with sigma = lambda/3, quantize. The folded
/// samples are discarded.
UnoMeasurements uno_sample(const signals::SampledSignal& x, double lambda, std::size_t m,
                           std::uint64_t seed);

struct ReconstructOptions {
  std::optional<UnoRateplan> plan;  // when set, dt must not exceed plan->dt_required
  bool early_stop = true;
};

struct UnoReconstruction {
  std::vector<double> x_bar;             // offset-unresolved
  std::vector<double> modulo_estimate;   // clamped RKA output
  int diff_order = 1;
  std::uint64_t iterations = 0;
};

UnoReconstruction uno_reconstruct(const UnoMeasurements& meas, double beta_x, std::uint64_t i_max,
                                  std::uint64_t seed, const ReconstructOptions& opts = {});

UnoRateplan plan_rate(double beta_x, double lambda, double e_inf, double omega_max, double zeta);

/// Iteration budget: max(iteration lower bound with eps1 = 1e-6*n, sweeps*m*n).
std::uint64_t default_i_max(double omega0, std::size_t n, std::size_t m, std::uint64_t sweeps);

/// e_inf estimate lambda * 10^(nmse_modulo_db/20).
double estimate_e_inf(double lambda, double nmse_modulo_db) noexcept;

struct Telemetry {
  double nmse_modulo_db = 0.0;
  double nmse_final_db = 0.0;
  int h = 0;
  int N = 0;
  std::uint64_t i_max = 0;
  std::vector<std::uint64_t> seeds;

  std::string to_json() const;
};

}  // namespace uno::pipeline
