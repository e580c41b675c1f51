// SPDX-License-Identifier: Apache-2.0
#pragma once

// Data-parallel kernels. Each has a serial reference and an OpenMP version;
// both produce identical results (the parallel split never reorders a
// floating-point reduction across threads for the element-wise kernels).

#include <cstdint>
#include <functional>
#include <span>

namespace uno::kernels {

void fold_serial(std::span<const double> x, double lambda, std::span<double> out);
void fold_parallel(std::span<const double> x, double lambda, std::span<double> out);

/// Sets bit j of `words` when x[j % n] >= gamma[j], for j < n*m.
void quantize_serial(std::span<const double> x, std::span<const double> gamma, std::size_t n,
                     std::span<std::uint64_t> words);
void quantize_parallel(std::span<const double> x, std::span<const double> gamma, std::size_t n,
                       std::span<std::uint64_t> words);

/// sum over columns of ||x - gamma_l||^2. The parallel version sums per-column
/// partials in column order, so it matches the serial one bit for bit.
double sq_distance_sum_serial(std::span<const double> x, std::span<const double> gamma, std::size_t n);
double sq_distance_sum_parallel(std::span<const double> x, std::span<const double> gamma, std::size_t n);

/// Runs body(i) for i in [0, count). Results must be keyed by i.
void for_each_serial(std::size_t count, const std::function<void(std::size_t)>& body);
void for_each_parallel(std::size_t count, const std::function<void(std::size_t)>& body);

int max_threads() noexcept;

}  // namespace uno::kernels
