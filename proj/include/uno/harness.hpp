// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "uno/noisy.hpp"

namespace uno::harness {

inline constexpr const char* kVersion = "1.0.0";

struct ExperimentConfig {
  std::string experiment = "table1";
  std::size_t trials = 15;
  std::uint64_t seed = 1;
  std::vector<double> lambdas;
  std::vector<double> sups;
  std::vector<std::size_t> ms;
  std::vector<double> sigma2s;
  std::size_t n = 728;
  int h = 3;                    // grid with dt*omega_max*e = 2^-h
  double dt = 1e-3;
  std::size_t pieces = 16;
  std::uint64_t sweeps = 20;    // RKA budget in sweeps of m*n draws
  bool bandlimit = true;        // final low-pass at omega_max
  // sawtooth
  double f0 = 50.0;
  std::size_t periods = 10;
  double sigma_tau = 1.0;
  // extreme_dr
  std::size_t rate_factor = 40;
  // linear model
  std::size_t rows = 728;
  std::size_t cols = 100;
  std::size_t nonzeros = 10;
  double theta_sup = 8.0;       // ||A theta||_inf after scaling
  std::size_t oversample = 35;
  noisy::AdmmConfig admm;
  bool parallel = true;         // runtime only; not part of the config echo
  std::string output;

  void validate() const;
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  /// Defaults of a named experiment.
  static ExperimentConfig defaults(const std::string& experiment);
};

struct Cell {
  double lambda = 0.0;
  double sup = 0.0;
  std::size_t m = 0;
  double sigma2 = 0.0;
  std::string variant;  // e.g. "uno" or "nofold"
  std::size_t n = 0;
  double dt = 0.0;
  int h = 0;
  int diff_order = 0;
  std::uint64_t i_max = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> nmse_db;      // reported value per trial
  std::vector<double> nmse_raw_db;  // before the final low-pass
  double mean_db = 0.0;
  double std_db = 0.0;

  bool operator==(const Cell&) const = default;
};

struct ExperimentResult {
  ExperimentConfig config;
  nlohmann::json config_echo;
  std::vector<Cell> cells;
  double wall_clock_s = 0.0;
  std::string version = kVersion;

  /// Equality of config echo and cell data; wall clock is ignored.
  bool same_data(const ExperimentResult& other) const;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

const std::vector<std::string>& experiment_ids();

void emit_csv(std::ostream& os, const ExperimentResult& r);
void emit_json(std::ostream& os, const ExperimentResult& r);
ExperimentResult parse_csv(std::istream& is);

void finalize(Cell& c);

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Acceptance criteria 1..12. The exact-invariant subset is {1, 2, 3, 4, 11}.
CheckResult run_criterion(int id);
const std::vector<int>& exact_criteria();
std::string format_line(const CheckResult& r);

}  // namespace uno::harness
