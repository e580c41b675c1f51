// SPDX-License-Identifier: Apache-2.0
#include "uno/signals.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fft.hpp"
#include "uno/error.hpp"
#include "uno/rng.hpp"

namespace uno::signals {

void SampledSignal::validate() const {
  require(!samples.empty(), ErrorKind::invalid_parameter, "signal is empty");
  require(dt > 0.0 && omega_max > 0.0, ErrorKind::invalid_parameter, "dt and omega_max must be positive");
  for (double v : samples) require(std::isfinite(v), ErrorKind::invalid_parameter, "non-finite sample");
}

std::size_t band_edge_bin(std::size_t n, double omega_max, double dt) {
  const double b = omega_max * static_cast<double>(n) * dt / (2.0 * std::numbers::pi);
  // tolerance keeps exact bin edges (e.g. a coarse Nyquist) inside the band
  const auto bin = static_cast<std::size_t>(std::floor(b + 1e-9));
  return std::min(bin, n / 2);
}

SampledSignal gen_bandlimited_random(std::size_t n, double omega_max, double dt, double target_sup,
                                     std::uint64_t seed, std::size_t pieces) {
  require(n >= 2, ErrorKind::invalid_parameter, "n must be at least 2");
  require(target_sup > 0.0 && std::isfinite(target_sup), ErrorKind::invalid_parameter,
          "target_sup must be positive");
  require(dt > 0.0 && omega_max > 0.0, ErrorKind::invalid_parameter, "dt and omega_max must be positive");
  require(dt * omega_max <= std::numbers::pi * (1.0 + 1e-12), ErrorKind::invalid_parameter,
          "dt*omega_max exceeds pi (Nyquist)");
  require(pieces >= 1, ErrorKind::invalid_parameter, "pieces must be at least 1");

  CounterRng rng = CounterRng(seed).substream(stream::signal);
  std::vector<double> mags(pieces);
  for (auto& v : mags) v = rng.uniform01();

  const std::size_t edge = band_edge_bin(n, omega_max, dt);
  detail::Spectrum spec(n, {0.0, 0.0});
  for (std::size_t b = 0; b <= edge; ++b) {
    const double mag = mags[std::min(b * pieces / (edge + 1), pieces - 1)];
    const double phase = 2.0 * std::numbers::pi * rng.uniform01();
    std::complex<double> c = std::polar(mag, phase);
    if (b == 0 || 2 * b == n) c = {c.real(), 0.0};
    spec[b] = c;
    if (b != 0 && 2 * b != n) spec[n - b] = std::conj(c);
  }
  std::vector<double> x = detail::idft_real(spec);

  std::size_t arg = 0;
  for (std::size_t k = 1; k < n; ++k)
    if (std::abs(x[k]) > std::abs(x[arg])) arg = k;
  const double peak = std::abs(x[arg]);
  require(peak > 0.0, ErrorKind::numerical_failure, "generated signal is identically zero");
  const double scale = target_sup / peak;
  for (auto& v : x) v = std::clamp(v * scale, -target_sup, target_sup);
  x[arg] = std::copysign(target_sup, x[arg]);

  return SampledSignal{std::move(x), dt, omega_max, seed};
}

SampledSignal gen_sawtooth(double f0, std::size_t sweeps, double dt, double amplitude) {
  require(f0 > 0.0 && dt > 0.0, ErrorKind::invalid_parameter, "f0 and dt must be positive");
  require(dt < 1.0 / (2.0 * f0), ErrorKind::invalid_parameter, "dt must be below 1/(2 f0)");
  require(sweeps >= 1, ErrorKind::invalid_parameter, "sweeps must be at least 1");
  require(amplitude >= 0.0, ErrorKind::invalid_parameter, "amplitude must be non-negative");
  const auto n = static_cast<std::size_t>(std::llround(static_cast<double>(sweeps) / (f0 * dt)));
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * f0 * dt;
    const double frac = std::max(0.0, t - std::floor(t + 1e-9));
    x[k] = amplitude * (2.0 * frac - 1.0);
  }
  // 2*pi*f0 is the fundamental; the harmonics are not band-limited
  return SampledSignal{std::move(x), dt, std::numbers::pi / dt, 0};
}

SampledSignal sinc_resample(const SampledSignal& x, std::size_t factor) {
  require(factor >= 1, ErrorKind::invalid_parameter, "factor must be at least 1");
  if (factor == 1) return x;
  const std::size_t n = x.size();
  const std::size_t nf = n * factor;
  const detail::Spectrum spec = detail::dft(x.samples);
  detail::Spectrum up(nf, {0.0, 0.0});
  const std::size_t half = (n - 1) / 2;
  up[0] = spec[0];
  for (std::size_t b = 1; b <= half; ++b) {
    up[b] = spec[b];
    up[nf - b] = spec[n - b];
  }
  if (n % 2 == 0) {
    up[n / 2] = spec[n / 2] * 0.5;
    up[nf - n / 2] = spec[n / 2] * 0.5;
  }
  std::vector<double> y = detail::idft_real(up);
  for (auto& v : y) v *= static_cast<double>(factor);
  return SampledSignal{std::move(y), x.dt / static_cast<double>(factor), x.omega_max, x.seed};
}

std::vector<double> bandlimit_project(std::span<const double> x, double omega_max, double dt) {
  const std::size_t n = x.size();
  require(n >= 1, ErrorKind::invalid_parameter, "empty input");
  const std::size_t edge = band_edge_bin(n, omega_max, dt);
  if (2 * edge >= n) return {x.begin(), x.end()};
  detail::Spectrum spec = detail::dft(x);
  for (std::size_t b = edge + 1; b < n - edge; ++b) spec[b] = {0.0, 0.0};
  return detail::idft_real(spec);
}

std::vector<double> decimate(std::span<const double> x, std::size_t factor) {
  require(factor >= 1, ErrorKind::invalid_parameter, "factor must be at least 1");
  std::vector<double> out;
  out.reserve(x.size() / factor + 1);
  for (std::size_t k = 0; k < x.size(); k += factor) out.push_back(x[k]);
  return out;
}

double nmse_db(std::span<const double> truth, std::span<const double> estimate) {
  require(truth.size() == estimate.size(), ErrorKind::invalid_parameter, "length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const double d = truth[k] - estimate[k];
    num += d * d;
    den += truth[k] * truth[k];
  }
  require(den > 0.0, ErrorKind::invalid_parameter, "truth has zero norm");
  if (num == 0.0) return kNmseFloorDb;
  return std::max(kNmseFloorDb, 10.0 * std::log10(num / den));
}

double sup_norm(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double v : x) s = std::max(s, std::abs(v));
  return s;
}

void write_csv(std::ostream& os, const SampledSignal& x) {
  os << "index,time,value\n" << std::setprecision(17);
  for (std::size_t k = 0; k < x.size(); ++k)
    os << k << ',' << static_cast<double>(k) * x.dt << ',' << x.samples[k] << '\n';
}

std::string json_header(const SampledSignal& x) {
  nlohmann::json j{{"n", x.size()}, {"dt", x.dt}, {"omega_max", x.omega_max}, {"seed", x.seed}};
  return j.dump();
}

SampledSignal read_csv(std::istream& is, double omega_max, std::uint64_t seed) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorKind::io, "missing CSV header");
  std::vector<double> t, v;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, b, c;
    require(std::getline(ss, a, ',') && std::getline(ss, b, ',') && std::getline(ss, c),
            ErrorKind::io, "malformed CSV row: " + line);
    t.push_back(std::stod(b));
    v.push_back(std::stod(c));
  }
  require(v.size() >= 2, ErrorKind::io, "need at least two samples to infer dt");
  SampledSignal s{std::move(v), t[1] - t[0], omega_max, seed};
  s.validate();
  return s;
}

}  // namespace uno::signals
