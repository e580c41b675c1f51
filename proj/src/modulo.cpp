// SPDX-License-Identifier: Apache-2.0
#include "uno/modulo.hpp"

#include <cmath>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <numbers>
#include <ostream>

#include "uno/error.hpp"
#include "uno/kernels.hpp"

namespace uno::modulo {

namespace {

// Tolerance for ceil() of ratios that are integers in exact arithmetic.
constexpr double kCeilSlack = 1e-9;

double round_to_lattice(double s, double lambda) noexcept {
  return 2.0 * lambda * std::ceil(std::floor(s / lambda) / 2.0);
}

void check_lambda(double lambda) {
  require(lambda > 0.0 && std::isfinite(lambda), ErrorKind::invalid_parameter, "lambda must be positive");
}

}  // namespace

void ModuloSamples::validate() const {
  check_lambda(lambda);
  for (double v : values)
    require(v >= -lambda && v < lambda, ErrorKind::invalid_parameter, "modulo sample outside [-lambda, lambda)");
}

double fold_value(double x, double lambda) noexcept {
  const double two = 2.0 * lambda;
  double v = x - two * std::floor(x / two + 0.5);
  // x/two + 0.5 can round up across an integer; keep the half-open range
  if (v >= lambda) v -= two;
  if (v < -lambda) v += two;
  return v;
}

ModuloSamples fold(std::span<const double> x, double lambda) {
  check_lambda(lambda);
  ModuloSamples m{std::vector<double>(x.size()), lambda};
  kernels::fold_parallel(x, lambda, m.values);
  return m;
}

double beta_for(double sup_estimate, double lambda) {
  check_lambda(lambda);
  require(sup_estimate >= 0.0, ErrorKind::invalid_parameter, "sup estimate must be non-negative");
  const double k = std::max(1.0, std::ceil(sup_estimate / (2.0 * lambda) - 1e-12));
  return 2.0 * lambda * k;
}

int min_diff_order(double lambda, double beta_x, double dt, double omega_max) {
  check_lambda(lambda);
  const double c = dt * omega_max * std::numbers::e;
  require(c > 0.0 && c < 1.0, ErrorKind::invalid_parameter, "dt*omega_max*e must lie in (0, 1)");
  require(beta_x >= lambda, ErrorKind::invalid_parameter, "beta_x must be at least lambda");
  const double raw = (std::log(lambda) - std::log(beta_x)) / std::log(c);
  return std::max(1, static_cast<int>(std::ceil(raw - kCeilSlack)));
}

std::vector<double> finite_diff(std::span<const double> v, int order) {
  require(order >= 1 && v.size() > static_cast<std::size_t>(order), ErrorKind::invalid_parameter,
          "finite_diff needs len(v) > order >= 1");
  std::vector<double> d(v.begin(), v.end());
  for (int p = 0; p < order; ++p) {
    for (std::size_t k = 0; k + 1 < d.size(); ++k) d[k] = d[k + 1] - d[k];
    d.pop_back();
  }
  return d;
}

std::vector<double> inverse_diff(std::span<const double> s) {
  std::vector<double> out(s.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) out[k] = (acc += s[k]);
  return out;
}

std::vector<double> unfold(const ModuloSamples& m, const UnfoldConfig& cfg) {
  const double lambda = m.lambda;
  check_lambda(lambda);
  const double units = cfg.beta_x / (2.0 * lambda);
  require(std::abs(units - std::round(units)) < 1e-9 && std::round(units) >= 1.0, ErrorKind::config_invalid,
          "beta_x must be a positive multiple of 2*lambda");
  require(cfg.diff_order >= 1, ErrorKind::config_invalid, "diff_order must be at least 1");
  const auto N = static_cast<std::size_t>(cfg.diff_order);
  const std::size_t n = m.values.size();
  require(n > N, ErrorKind::length_too_short, "need more samples than the difference order");
  const std::size_t len = n - N;

  const std::vector<double> d = finite_diff(m.values, cfg.diff_order);
  std::vector<double> eps_diff(len);  // Delta^N of the residual
  for (std::size_t k = 0; k < len; ++k) eps_diff[k] = fold_value(d[k], lambda) - d[k];

  std::vector<double> s = eps_diff;
  if (N >= 2) {
    const auto J = static_cast<std::size_t>(std::llround(6.0 * cfg.beta_x / lambda));
    require(J < len, ErrorKind::length_too_short, "offset index 6*beta_x/lambda exceeds the signal length");
    for (std::size_t p = 0; p + 1 < N; ++p) {
      s = inverse_diff(s);
      for (auto& v : s) v = round_to_lattice(v, lambda);
      const std::vector<double> t = inverse_diff(s);
      const double kappa = std::floor((t[0] - t[J]) / (12.0 * cfg.beta_x) + 0.5);
      for (auto& v : s) v += 2.0 * lambda * kappa;
    }
  }

  // inverse_diff(s)[k] = eps[k+N] - eps[N-1]; pin eps[N-1] = 0
  std::vector<double> eps(n, 0.0);
  const std::vector<double> tail = inverse_diff(s);
  for (std::size_t k = 0; k < len; ++k) eps[k + N] = tail[k];

  // Samples before N-1 follow from the known Delta^N eps.
  std::vector<double> binom(N + 1, 1.0);
  for (std::size_t i = 1; i <= N; ++i) binom[i] = binom[i - 1] * static_cast<double>(N - i + 1) / static_cast<double>(i);
  const double sign_n = (N % 2 == 0) ? 1.0 : -1.0;
  for (std::size_t kk = N - 1; kk-- > 0;) {
    double acc = eps_diff[kk];
    for (std::size_t i = 1; i <= N; ++i) {
      const double sgn = ((N - i) % 2 == 0) ? 1.0 : -1.0;
      acc -= sgn * binom[i] * eps[kk + i];
    }
    const double e = sign_n * acc;
    eps[kk] = 2.0 * lambda * std::round(e / (2.0 * lambda));
  }

  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = m.values[k] + eps[k];
  return out;
}

std::vector<double> align_offset(std::span<const double> truth, std::span<const double> estimate, double lambda) {
  require(truth.size() == estimate.size(), ErrorKind::shape_mismatch, "length mismatch");
  check_lambda(lambda);
  require(!truth.empty(), ErrorKind::invalid_parameter, "empty input");
  double mean = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) mean += truth[k] - estimate[k];
  mean /= static_cast<double>(truth.size());
  const double shift = 2.0 * lambda * std::round(mean / (2.0 * lambda));
  std::vector<double> out(estimate.begin(), estimate.end());
  for (auto& v : out) v += shift;
  return out;
}

void write_csv(std::ostream& os, const ModuloSamples& m, double dt) {
  os << "index,time,value\n" << std::setprecision(17);
  for (std::size_t k = 0; k < m.values.size(); ++k)
    os << k << ',' << static_cast<double>(k) * dt << ',' << m.values[k] << '\n';
}

std::string json_header(const ModuloSamples& m, double dt, double omega_max) {
  nlohmann::json j{{"n", m.values.size()}, {"dt", dt}, {"omega_max", omega_max}, {"lambda", m.lambda}};
  return j.dump();
}

}  // namespace uno::modulo
