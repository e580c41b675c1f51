// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace uno::signals {

/// Uniformly sampled real signal with its sample interval and bandwidth.
struct SampledSignal {
  std::vector<double> samples;
  double dt = 1.0;         // seconds
  double omega_max = 1.0;  // rad/s
  std::uint64_t seed = 0;  // provenance only

  std::size_t size() const noexcept { return samples.size(); }
  void validate() const;
};

/// NMSE value used for exact equality, so CSV output stays numeric.
inline constexpr double kNmseFloorDb = -300.0;

/// Random band-limited signal: `pieces` constant spectral blocks with
/// uniform(0,1) magnitudes and uniform random phases, rescaled so that
/// max|x_k| == target_sup exactly.
SampledSignal gen_bandlimited_random(std::size_t n, double omega_max, double dt,
                                     double target_sup, std::uint64_t seed,
                                     std::size_t pieces = 16);

/// Highest DFT bin at or below omega_max for an n-point grid with step dt.
std::size_t band_edge_bin(std::size_t n, double omega_max, double dt);

SampledSignal gen_sawtooth(double f0, std::size_t sweeps, double dt, double amplitude);

/// Band-limited interpolation onto a grid `factor` times finer (FFT zero padding).
SampledSignal sinc_resample(const SampledSignal& x, std::size_t factor);

/// Ideal low-pass at omega_max: zeroes DFT bins above band_edge_bin.
std::vector<double> bandlimit_project(std::span<const double> x, double omega_max, double dt);

/// Keeps every `factor`-th sample, starting with the first.
std::vector<double> decimate(std::span<const double> x, std::size_t factor);

double nmse_db(std::span<const double> truth, std::span<const double> estimate);

double sup_norm(std::span<const double> x) noexcept;

// CSV rows are `index,time,value`; the JSON header carries {n, dt, omega_max, seed}.
void write_csv(std::ostream& os, const SampledSignal& x);
std::string json_header(const SampledSignal& x);
SampledSignal read_csv(std::istream& is, double omega_max, std::uint64_t seed = 0);

}  // namespace uno::signals
