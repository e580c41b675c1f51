// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "uno/modulo.hpp"

namespace uno::onebit {

/// m threshold sequences of length n, stored column-major (vec order):
/// entry (k, l) lives at k + l*n.
struct ThresholdEnsemble {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<double> gamma;
  double sigma_tau = 0.0;
  std::uint64_t seed = 0;

  double at(std::size_t k, std::size_t l) const noexcept { return gamma[k + l * n]; }
  std::span<const double> column(std::size_t l) const noexcept { return {gamma.data() + l * n, n}; }
};

/// Sign data R in {-1,+1}^{n x m}, one bit per entry (1 means +1), vec order.
class SignMatrix {
 public:
  SignMatrix() = default;
  SignMatrix(std::size_t n, std::size_t m);

  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return m_; }
  std::size_t size() const noexcept { return n_ * m_; }

  /// Sign at vec index j = k + l*n.
  int sign(std::size_t j) const noexcept { return ((words_[j >> 6] >> (j & 63)) & 1U) ? 1 : -1; }
  int at(std::size_t k, std::size_t l) const noexcept { return sign(k + l * n_); }
  void set(std::size_t k, std::size_t l, int s) noexcept;

  bool operator==(const SignMatrix&) const = default;

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }
  std::vector<std::uint64_t>& words() noexcept { return words_; }

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::uint64_t> words_;
};

struct RkaRun {
  std::uint64_t i_max = 1;
  std::uint64_t seed = 0;
  std::vector<double> init;  // empty means zero vector
  bool record_trace = false;
  bool early_stop = false;  // stop after a full sweep of mn draws with max violation < 1e-12
};

struct RkaResult {
  std::vector<double> estimate;
  std::vector<double> trace;  // max violation after each iteration, when recorded
  std::uint64_t iterations = 0;
};

ThresholdEnsemble gaussian_thresholds(double sigma, std::size_t n, std::size_t m, std::uint64_t seed);

/// sigma_tau = lambda/3.
ThresholdEnsemble design_thresholds(double lambda, std::size_t n, std::size_t m, std::uint64_t seed);

/// r_kl = +1 when x_k >= tau_kl, else -1.
SignMatrix quantize(std::span<const double> x, const ThresholdEnsemble& thr);
SignMatrix quantize(const modulo::ModuloSamples& xt, const ThresholdEnsemble& thr);

/// Omega~^T Omega~ from the stacked sign operator, integer arithmetic.
std::vector<std::int64_t> gram_check(const SignMatrix& r);

/// Randomized Kaczmarz on {x : Omega~ x >= vec(R).vec(Gamma)}, coordinate form.
RkaResult rka_solve(const SignMatrix& r, const ThresholdEnsemble& thr, const RkaRun& run);

/// Same iteration with the dense mn x n system materialized. Reference only.
RkaResult rka_solve_dense(const SignMatrix& r, const ThresholdEnsemble& thr, const RkaRun& run);

/// Per-coordinate bounds implied by the polyhedron: lo_k = max tau over +1
/// signs, hi_k = min tau over -1 signs (+-inf when absent).
struct Bounds {
  std::vector<double> lo;
  std::vector<double> hi;
};
Bounds coordinate_bounds(const SignMatrix& r, const ThresholdEnsemble& thr);

double max_violation(std::span<const double> x, const SignMatrix& r, const ThresholdEnsemble& thr);

std::uint64_t iteration_lower_bound(double omega0, double eps1, std::size_t n);

/// (1/(mn)) * sum_l ||x - tau_l||^2.
double avg_hyperplane_distance(std::span<const double> x, const ThresholdEnsemble& thr,
                               const SignMatrix& r);

/// Packed bits, row-major (bit k*m + l), MSB first within each byte, after
/// a one-line JSON header {n, m, seed, lambda}.
void write_packed(std::ostream& os, const SignMatrix& r, std::uint64_t seed, double lambda);
SignMatrix read_packed(std::istream& is);
void write_csv(std::ostream& os, const SignMatrix& r);

}  // namespace uno::onebit
