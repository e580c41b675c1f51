// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace uno::modulo {

/// Folded samples, every value in [-lambda, lambda).
struct ModuloSamples {
  std::vector<double> values;
  double lambda = 1.0;

  void validate() const;
};

struct UnfoldConfig {
  double beta_x = 2.0;  // sup-norm bound, a multiple of 2*lambda
  int diff_order = 1;   // N
  double dt = 1.0;
  double omega_max = 1.0;
};

/// Centered remainder x - 2L*floor(x/(2L) + 1/2).
double fold_value(double x, double lambda) noexcept;
ModuloSamples fold(std::span<const double> x, double lambda);

/// Smallest element of 2*lambda*Z that is >= sup_estimate (and >= 2*lambda).
double beta_for(double sup_estimate, double lambda);

int min_diff_order(double lambda, double beta_x, double dt, double omega_max);

std::vector<double> finite_diff(std::span<const double> v, int order);
std::vector<double> inverse_diff(std::span<const double> s);

/// Unfolding from modulo samples. The 2*a*lambda offset is resolved to a = 0
/// by pinning the residual at sample N-1 to zero.
std::vector<double> unfold(const ModuloSamples& m, const UnfoldConfig& cfg);

/// Scoring helper: shifts estimate by the multiple of 2*lambda closest to
/// mean(truth - estimate).
std::vector<double> align_offset(std::span<const double> truth, std::span<const double> estimate,
                                 double lambda);

void write_csv(std::ostream& os, const ModuloSamples& m, double dt);
std::string json_header(const ModuloSamples& m, double dt, double omega_max);

}  // namespace uno::modulo
