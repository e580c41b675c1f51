// SPDX-License-Identifier: Apache-2.0
#include "uno/kernels.hpp"

#include <omp.h>

#include <vector>

#include "uno/error.hpp"
#include "uno/modulo.hpp"

namespace uno::kernels {

void fold_serial(std::span<const double> x, double lambda, std::span<double> out) {
  require(x.size() == out.size(), ErrorKind::shape_mismatch, "fold output size");
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = modulo::fold_value(x[k], lambda);
}

void fold_parallel(std::span<const double> x, double lambda, std::span<double> out) {
  require(x.size() == out.size(), ErrorKind::shape_mismatch, "fold output size");
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (n > 65536)
  for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = modulo::fold_value(x[k], lambda);
}

namespace {

inline std::uint64_t quantize_word(std::span<const double> x, std::span<const double> gamma, std::size_t n,
                                   std::size_t w) {
  const std::size_t total = gamma.size();
  const std::size_t begin = w * 64;
  const std::size_t end = std::min(total, begin + 64);
  std::uint64_t bits = 0;
  std::size_t k = begin % n;
  for (std::size_t j = begin; j < end; ++j) {
    if (x[k] >= gamma[j]) bits |= (std::uint64_t{1} << (j - begin));
    if (++k == n) k = 0;
  }
  return bits;
}

void check_quantize(std::span<const double> x, std::span<const double> gamma, std::size_t n,
                    std::span<std::uint64_t> words) {
  require(n == x.size() && n > 0 && gamma.size() % n == 0, ErrorKind::shape_mismatch, "quantize shapes");
  require(words.size() == (gamma.size() + 63) / 64, ErrorKind::shape_mismatch, "quantize word count");
}

}  // namespace

void quantize_serial(std::span<const double> x, std::span<const double> gamma, std::size_t n,
                     std::span<std::uint64_t> words) {
  check_quantize(x, gamma, n, words);
  for (std::size_t w = 0; w < words.size(); ++w) words[w] = quantize_word(x, gamma, n, w);
}

void quantize_parallel(std::span<const double> x, std::span<const double> gamma, std::size_t n,
                       std::span<std::uint64_t> words) {
  check_quantize(x, gamma, n, words);
  const auto count = static_cast<std::ptrdiff_t>(words.size());
#pragma omp parallel for schedule(static) if (count > 1024)
  for (std::ptrdiff_t w = 0; w < count; ++w) words[w] = quantize_word(x, gamma, n, static_cast<std::size_t>(w));
}

namespace {

inline double column_sq_distance(std::span<const double> x, const double* col) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - col[k];
    s += d * d;
  }
  return s;
}

}  // namespace

double sq_distance_sum_serial(std::span<const double> x, std::span<const double> gamma, std::size_t n) {
  require(n == x.size() && n > 0 && gamma.size() % n == 0, ErrorKind::shape_mismatch, "distance shapes");
  const std::size_t m = gamma.size() / n;
  double total = 0.0;
  for (std::size_t l = 0; l < m; ++l) total += column_sq_distance(x, gamma.data() + l * n);
  return total;
}

double sq_distance_sum_parallel(std::span<const double> x, std::span<const double> gamma, std::size_t n) {
  require(n == x.size() && n > 0 && gamma.size() % n == 0, ErrorKind::shape_mismatch, "distance shapes");
  const std::size_t m = gamma.size() / n;
  std::vector<double> partial(m);
  const auto mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static) if (m * n > 65536)
  for (std::ptrdiff_t l = 0; l < mm; ++l) partial[l] = column_sq_distance(x, gamma.data() + l * n);
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

void for_each_serial(std::size_t count, const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < count; ++i) body(i);
}

void for_each_parallel(std::size_t count, const std::function<void(std::size_t)>& body) {
  const auto c = static_cast<std::ptrdiff_t>(count);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < c; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(uno_for_each_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

int max_threads() noexcept { return omp_get_max_threads(); }

}  // namespace uno::kernels
