// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "uno/uno.hpp"

namespace uno::noisy {

struct LinearModel {
  Eigen::MatrixXd a_matrix;
  Eigen::VectorXd theta;
  double sigma_eps = 0.0;

  void validate() const;
};

/// Deterministic map R^s -> R^s chosen by name.
struct Denoiser {
  std::string kind = "soft_threshold";
  std::vector<double> params;  // empty: kind-specific default
};

struct AdmmConfig {
  double eta = 0.1;
  double beta = 1.0;
  int k_max = 100;
  Denoiser denoiser;
};

using DenoiserFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
/// Factory receives the denoiser params and the ADMM config (for defaults such as eta/beta).
using DenoiserFactory = std::function<DenoiserFn(const std::vector<double>&, const AdmmConfig&)>;

/// Built-ins: "soft_threshold" (level, default eta/beta), "moving_average"
/// (odd window, default 3), "identity".
void register_denoiser(const std::string& kind, DenoiserFactory factory);
DenoiserFn make_denoiser(const Denoiser& d, const AdmmConfig& cfg);
std::vector<std::string> denoiser_kinds();

double soft_threshold(double v, double t) noexcept;

Eigen::VectorXd simulate_noisy(const LinearModel& model, std::uint64_t seed);

struct Decomposition {
  std::vector<double> z_tilde;
  std::vector<int> q;
};

/// z~_k = mod(z_k, 2L) - 2(1-q_k)L with fold(x+z) = fold(x) + z~.
Decomposition modulo_noise_decompose(std::span<const double> x, std::span<const double> z,
                                     double lambda);

pipeline::UnoRateplan plan_noisy_rate(double beta_x, double lambda, double z_tilde_plus_e_inf,
                                      double omega_max, double zeta);

/// Largest condition estimate accepted for 2A^T A + beta*I.
inline constexpr double kMaxCondition = 1e12;

Eigen::VectorXd pnp_admm(const Eigen::VectorXd& y_bar, const Eigen::MatrixXd& a_matrix,
                         const AdmmConfig& cfg, const Eigen::VectorXd& init);

struct NoisyUnoOptions {
  double dt = 1.0;           // sample interval of y
  std::size_t oversample = 35;  // UNO runs on a grid this much finer than y
  std::size_t m = 400;
  std::uint64_t sweeps = 12;
  double sup_estimate = 0.0;  // 0: use the true sup-norm of the fine-grid signal
};

struct NoisyUnoSeeds {
  std::uint64_t noise = 0;
  std::uint64_t sample = 0;
  std::uint64_t rka = 0;
};

struct NoisyUnoResult {
  Eigen::VectorXd theta_hat;
  std::vector<double> y;      // noisy samples
  std::vector<double> y_bar;  // recovered samples after offset snap
  int diff_order = 0;
  std::uint64_t i_max = 0;
};

NoisyUnoResult noisy_uno(const LinearModel& model, double lambda, const AdmmConfig& cfg,
                         const NoisyUnoSeeds& seeds, const NoisyUnoOptions& opts);

/// Removes the 2*lambda*Z offset: snaps mean(y_bar - A*theta_pilot) where the
/// pilot is a ridge fit to the mean-removed data.
std::vector<double> snap_offset(std::span<const double> y_bar, const Eigen::MatrixXd& a_matrix,
                                double lambda);

}  // namespace uno::noisy
