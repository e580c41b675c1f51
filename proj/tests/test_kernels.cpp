// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <atomic>
#include <random>

#include "uno/kernels.hpp"
#include "uno/rng.hpp"

using namespace uno;

TEST_CASE("parallel kernels match serial references") {
  CounterRng rng(5);
  std::normal_distribution<double> g(0.0, 3.0);
  const std::size_t n = 1000, m = 300;
  std::vector<double> x(n), gamma(n * m);
  for (auto& v : x) v = g(rng);
  for (auto& v : gamma) v = g(rng);

  std::vector<double> a(n), b(n);
  kernels::fold_serial(x, 0.7, a);
  kernels::fold_parallel(x, 0.7, b);
  CHECK(a == b);

  std::vector<std::uint64_t> wa((n * m + 63) / 64), wb(wa.size());
  kernels::quantize_serial(x, gamma, n, wa);
  kernels::quantize_parallel(x, gamma, n, wb);
  CHECK(wa == wb);

  CHECK(kernels::sq_distance_sum_serial(x, gamma, n) == kernels::sq_distance_sum_parallel(x, gamma, n));

  std::vector<std::size_t> sa(100), sb(100);
  kernels::for_each_serial(100, [&](std::size_t i) { sa[i] = i * i; });
  kernels::for_each_parallel(100, [&](std::size_t i) { sb[i] = i * i; });
  CHECK(sa == sb);
  CHECK_THROWS(kernels::for_each_parallel(10, [](std::size_t i) {
    if (i == 3) throw std::runtime_error("boom");
  }));
}
