// SPDX-License-Identifier: Apache-2.0
#include "uno/noisy.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <random>

#include "uno/error.hpp"
#include "uno/modulo.hpp"
#include "uno/rng.hpp"
#include "uno/signals.hpp"

namespace uno::noisy {

void LinearModel::validate() const {
  require(a_matrix.rows() >= 1 && a_matrix.cols() >= 1, ErrorKind::invalid_parameter, "A must be non-empty");
  require(theta.size() == a_matrix.cols(), ErrorKind::shape_mismatch, "theta length differs from A's columns");
  require(sigma_eps >= 0.0, ErrorKind::invalid_parameter, "sigma_eps must be non-negative");
}

double soft_threshold(double v, double t) noexcept {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

namespace {

struct Registry {
  std::mutex mu;
  std::map<std::string, DenoiserFactory> factories;
};

Registry& registry() {
  static Registry* reg = [] {
    auto* r = new Registry;
    r->factories["identity"] = [](const std::vector<double>&, const AdmmConfig&) -> DenoiserFn {
      return [](const Eigen::VectorXd& v) { return v; };
    };
    r->factories["soft_threshold"] = [](const std::vector<double>& p, const AdmmConfig& cfg) -> DenoiserFn {
      const double t = p.empty() ? cfg.eta / cfg.beta : p[0];
      require(t >= 0.0, ErrorKind::config_invalid, "soft-threshold level must be non-negative");
      return [t](const Eigen::VectorXd& v) { return v.unaryExpr([t](double a) { return soft_threshold(a, t); }).eval(); };
    };
    r->factories["moving_average"] = [](const std::vector<double>& p, const AdmmConfig&) -> DenoiserFn {
      const int w = p.empty() ? 3 : static_cast<int>(p[0]);
      require(w >= 1 && w % 2 == 1, ErrorKind::config_invalid, "moving-average window must be odd and positive");
      return [w](const Eigen::VectorXd& v) {
        const Eigen::Index n = v.size(), half = w / 2;
        Eigen::VectorXd out(n);
        for (Eigen::Index i = 0; i < n; ++i) {
          const Eigen::Index a = std::max<Eigen::Index>(0, i - half), b = std::min(n - 1, i + half);
          out[i] = v.segment(a, b - a + 1).mean();
        }
        return out;
      };
    };
    return r;
  }();
  return *reg;
}

}  // namespace

void register_denoiser(const std::string& kind, DenoiserFactory factory) {
  Registry& reg = registry();
  std::lock_guard lock(reg.mu);
  reg.factories[kind] = std::move(factory);
}

DenoiserFn make_denoiser(const Denoiser& d, const AdmmConfig& cfg) {
  Registry& reg = registry();
  std::lock_guard lock(reg.mu);
  auto it = reg.factories.find(d.kind);
  require(it != reg.factories.end(), ErrorKind::config_invalid, "unknown denoiser '" + d.kind + "'");
  return it->second(d.params, cfg);
}

std::vector<std::string> denoiser_kinds() {
  Registry& reg = registry();
  std::lock_guard lock(reg.mu);
  std::vector<std::string> out;
  for (const auto& [k, f] : reg.factories) out.push_back(k);
  return out;
}

Eigen::VectorXd simulate_noisy(const LinearModel& model, std::uint64_t seed) {
  model.validate();
  Eigen::VectorXd y = model.a_matrix * model.theta;
  if (model.sigma_eps > 0.0) {
    CounterRng rng = CounterRng(seed).substream(stream::noise);
    std::normal_distribution<double> dist(0.0, model.sigma_eps);
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += dist(rng);
  }
  return y;
}

Decomposition modulo_noise_decompose(std::span<const double> x, std::span<const double> z, double lambda) {
  require(x.size() == z.size(), ErrorKind::shape_mismatch, "x and z lengths differ");
  require(lambda > 0.0, ErrorKind::invalid_parameter, "lambda must be positive");
  const double two = 2.0 * lambda;
  Decomposition d{std::vector<double>(x.size()), std::vector<int>(x.size())};
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double y_fold = modulo::fold_value(x[k] + z[k], lambda);
    const double x_fold = modulo::fold_value(x[k], lambda);
    double r = z[k] - two * std::floor(z[k] / two);
    if (r >= two) r -= two;  // floor rounding at the top edge
    bool found = false;
    for (int q : {1, 0}) {
      const double zt = r - 2.0 * (1 - q) * lambda;
      if (std::abs(y_fold - (x_fold + zt)) <= 1e-9) {
        d.z_tilde[k] = zt;
        d.q[k] = q;
        found = true;
        break;
      }
    }
    require(found, ErrorKind::decomposition_failed, "no q satisfies the fold identity");
  }
  return d;
}

pipeline::UnoRateplan plan_noisy_rate(double beta_x, double lambda, double z_tilde_plus_e_inf, double omega_max,
                                      double zeta) {
  return pipeline::plan_rate(beta_x, lambda, z_tilde_plus_e_inf, omega_max, zeta);
}

namespace {

/// Upper estimate of the largest eigenvalue of A^T A by power iteration.
double gram_spectral_bound(const Eigen::MatrixXd& a) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(a.cols()).normalized();
  double est = 0.0;
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd w = a.transpose() * (a * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    est = norm;
    v = w / norm;
  }
  return 1.05 * est;
}

}  // namespace

Eigen::VectorXd pnp_admm(const Eigen::VectorXd& y_bar, const Eigen::MatrixXd& a_matrix, const AdmmConfig& cfg,
                         const Eigen::VectorXd& init) {
  require(y_bar.size() == a_matrix.rows(), ErrorKind::shape_mismatch, "y_bar length differs from A's rows");
  require(init.size() == 0 || init.size() == a_matrix.cols(), ErrorKind::shape_mismatch,
          "init length differs from A's columns");
  require(cfg.beta > 0.0 && cfg.k_max >= 1 && cfg.eta >= 0.0, ErrorKind::config_invalid,
          "need beta > 0, eta >= 0, k_max >= 1");
  const Eigen::Index s = a_matrix.cols();
  const DenoiserFn denoise = make_denoiser(cfg.denoiser, cfg);

  const double cond = (2.0 * gram_spectral_bound(a_matrix) + cfg.beta) / cfg.beta;
  require(std::isfinite(cond) && cond <= kMaxCondition, ErrorKind::numerical_failure,
          "shifted normal system condition estimate " + std::to_string(cond) + " exceeds bound");

  Eigen::MatrixXd normal = 2.0 * (a_matrix.transpose() * a_matrix);
  normal.diagonal().array() += cfg.beta;
  const Eigen::LLT<Eigen::MatrixXd> llt(normal);
  require(llt.info() == Eigen::Success, ErrorKind::numerical_failure, "Cholesky factorization failed");
  const Eigen::VectorXd rhs0 = 2.0 * (a_matrix.transpose() * y_bar);

  Eigen::VectorXd theta = init.size() ? init : Eigen::VectorXd::Zero(s);
  Eigen::VectorXd nu = theta;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(s);
  for (int k = 0; k < cfg.k_max; ++k) {
    theta = llt.solve(rhs0 + cfg.beta * (nu - u));
    nu = denoise(theta + u);
    u += theta - nu;
  }
  return theta;
}

std::vector<double> snap_offset(std::span<const double> y_bar, const Eigen::MatrixXd& a_matrix, double lambda) {
  require(static_cast<Eigen::Index>(y_bar.size()) == a_matrix.rows(), ErrorKind::shape_mismatch,
          "y_bar length differs from A's rows");
  const Eigen::Map<const Eigen::VectorXd> y(y_bar.data(), static_cast<Eigen::Index>(y_bar.size()));
  const Eigen::VectorXd centered = y.array() - y.mean();
  Eigen::MatrixXd gram = a_matrix.transpose() * a_matrix;
  const double ridge = 1e-3 * gram.trace() / static_cast<double>(a_matrix.cols());
  gram.diagonal().array() += ridge;
  const Eigen::VectorXd pilot = gram.llt().solve(a_matrix.transpose() * centered);
  const double offset = (y - a_matrix * pilot).mean();
  const double shift = 2.0 * lambda * std::round(offset / (2.0 * lambda));
  std::vector<double> out(y_bar.begin(), y_bar.end());
  for (auto& v : out) v -= shift;
  return out;
}

NoisyUnoResult noisy_uno(const LinearModel& model, double lambda, const AdmmConfig& cfg, const NoisyUnoSeeds& seeds,
                         const NoisyUnoOptions& opts) {
  model.validate();
  require(opts.dt > 0.0 && opts.oversample >= 1 && opts.m >= 1, ErrorKind::config_invalid,
          "need dt > 0, oversample >= 1, m >= 1");
  NoisyUnoResult res;
  const Eigen::VectorXd y = simulate_noisy(model, seeds.noise);
  res.y.assign(y.data(), y.data() + y.size());

  // y is white at rate 1/dt; UNO runs on the band-limited interpolant at a finer rate.
  const double omega = std::numbers::pi / opts.dt;
  signals::SampledSignal coarse{res.y, opts.dt, omega, seeds.noise};
  signals::SampledSignal fine = signals::sinc_resample(coarse, opts.oversample);
  fine.samples = signals::bandlimit_project(fine.samples, omega, fine.dt);  // pre-filter

  const double sup = opts.sup_estimate > 0.0 ? opts.sup_estimate : signals::sup_norm(fine.samples);
  const double beta_x = modulo::beta_for(sup, lambda);
  const pipeline::UnoMeasurements meas = pipeline::uno_sample(fine, lambda, opts.m, seeds.sample);
  res.i_max = pipeline::default_i_max(static_cast<double>(fine.size()) * lambda * lambda, fine.size(), opts.m,
                                      opts.sweeps);
  const pipeline::UnoReconstruction rec = pipeline::uno_reconstruct(meas, beta_x, res.i_max, seeds.rka);
  res.diff_order = rec.diff_order;

  const std::vector<double> smooth = signals::bandlimit_project(rec.x_bar, omega, fine.dt);
  res.y_bar = snap_offset(signals::decimate(smooth, opts.oversample), model.a_matrix, lambda);

  const Eigen::Map<const Eigen::VectorXd> yb(res.y_bar.data(), static_cast<Eigen::Index>(res.y_bar.size()));
  res.theta_hat = pnp_admm(yb, model.a_matrix, cfg, Eigen::VectorXd::Zero(model.a_matrix.cols()));
  return res;
}

}  // namespace uno::noisy
