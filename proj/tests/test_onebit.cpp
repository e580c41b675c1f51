// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "uno/error.hpp"
#include "uno/onebit.hpp"
#include "uno/rng.hpp"

using namespace uno;
using namespace uno::onebit;

namespace {

ThresholdEnsemble columns(std::size_t n, std::vector<double> values) {
  const std::size_t m = values.size() / n;
  return ThresholdEnsemble{n, m, std::move(values), 1.0, 0};
}

struct Instance {
  ThresholdEnsemble thr;
  SignMatrix signs;
  std::vector<double> truth;
};

Instance random_instance(std::size_t n, std::size_t m, std::uint64_t seed) {
  Instance in{gaussian_thresholds(1.0, n, m, seed), {}, std::vector<double>(n)};
  CounterRng rng(seed + 1000);
  std::normal_distribution<double> g(0.0, 1.0);
  for (auto& v : in.truth) v = g(rng);
  in.signs = quantize(in.truth, in.thr);
  return in;
}

}  // namespace

TEST_CASE("design_thresholds") {
  CHECK(design_thresholds(0.5, 4, 3, 1).sigma_tau == doctest::Approx(1.0 / 6.0));
  CHECK(design_thresholds(1.0, 4, 3, 1).sigma_tau == doctest::Approx(1.0 / 3.0));
  const auto big = design_thresholds(1.5, 1000, 1000, 42);
  double s = 0.0, ss = 0.0;
  for (double g : big.gamma) {
    s += g;
    ss += g * g;
  }
  const double n = static_cast<double>(big.gamma.size());
  const double sd = std::sqrt(ss / n - (s / n) * (s / n));
  CHECK(std::abs(sd - 0.5) <= 0.005);
  CHECK(design_thresholds(1.0, 5, 5, 9).gamma == design_thresholds(1.0, 5, 5, 9).gamma);
  CHECK_THROWS_AS(design_thresholds(0.0, 5, 5, 9), Error);
}

TEST_CASE("quantize examples") {
  const auto r = quantize(std::vector<double>{0.2}, columns(1, {-0.1, 0.1, 0.15}));
  for (std::size_t l = 0; l < 3; ++l) CHECK(r.at(0, l) == 1);
  CHECK(quantize(std::vector<double>{0.2}, columns(1, {0.2})).at(0, 0) == 1);
  CHECK(quantize(std::vector<double>{0.2}, columns(1, {0.3})).at(0, 0) == -1);
  CHECK_THROWS_AS(quantize(std::vector<double>{0.2, 0.1}, columns(1, {0.3})), Error);
}

TEST_CASE("gram_check equals m*I against a dense product") {
  for (std::size_t m : {1, 7, 20}) {
    const std::size_t n = 5;
    const auto in = random_instance(n, m, m);
    const auto g = gram_check(in.signs);
    Eigen::MatrixXi op = Eigen::MatrixXi::Zero(static_cast<int>(m * n), static_cast<int>(n));
    for (std::size_t l = 0; l < m; ++l)
      for (std::size_t k = 0; k < n; ++k) op(static_cast<int>(l * n + k), static_cast<int>(k)) = in.signs.at(k, l);
    const Eigen::MatrixXi dense = op.transpose() * op;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        CHECK(g[a * n + b] == dense(static_cast<int>(a), static_cast<int>(b)));
        CHECK(g[a * n + b] == (a == b ? static_cast<std::int64_t>(m) : 0));
      }
  }
}

TEST_CASE("rka: one-dimensional polyhedron") {
  const auto thr = columns(1, {-0.1, 0.1, 0.15});
  const auto r = quantize(std::vector<double>{0.2}, thr);
  double prev = 0.0;
  for (std::uint64_t i = 1; i <= 30; ++i) {
    const auto res = rka_solve(r, thr, RkaRun{i, 5, {}, false, false});
    CHECK(res.estimate[0] >= prev);
    prev = res.estimate[0];
  }
  CHECK(prev >= 0.15);
  CHECK(rka_solve(r, thr, RkaRun{200, 6, {}, false, false}).estimate[0] == 0.15);
}

TEST_CASE("rka: feasible init is a fixed point") {
  const auto in = random_instance(6, 4, 3);
  const auto res = rka_solve(in.signs, in.thr, RkaRun{500, 1, in.truth, true, false});
  CHECK(res.estimate == in.truth);
  for (double t : res.trace) CHECK(t == 0.0);
}

TEST_CASE("rka: dense and coordinate forms are bit-identical") {
  const auto in = random_instance(8, 5, 77);
  for (std::uint64_t i : {1ULL, 17ULL, 999ULL, 10000ULL}) {
    const RkaRun run{i, 31, {}, true, false};
    const auto a = rka_solve(in.signs, in.thr, run);
    const auto b = rka_solve_dense(in.signs, in.thr, run);
    CHECK(std::memcmp(a.estimate.data(), b.estimate.data(), 8 * sizeof(double)) == 0);
    REQUIRE(a.trace.size() == b.trace.size());
    CHECK(std::memcmp(a.trace.data(), b.trace.data(), a.trace.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("rka: the selected constraint is satisfied after its projection") {
  const auto in = random_instance(7, 6, 8);
  const std::size_t n = 7, mn = 42;
  CounterRng draws = CounterRng(12).substream(stream::rka);
  std::vector<double> before(n, 0.0);
  for (std::uint64_t i = 1; i <= 200; ++i) {
    const std::uint64_t j = draws.uniform_index(mn);
    const double rs = in.signs.sign(j), tau = in.thr.gamma[j];
    const auto after = rka_solve(in.signs, in.thr, RkaRun{i, 12, {}, false, false}).estimate;
    const std::size_t k = j % n;
    const double v_before = std::max(0.0, rs * (tau - before[k]));
    const double v_after = std::max(0.0, rs * (tau - after[k]));
    CHECK(v_after <= v_before);
    CHECK(v_after <= 1e-15);
    before = after;
  }
}

TEST_CASE("rka: converges to the clamp of the start point") {
  const auto in = random_instance(20, 30, 4);
  const auto bounds = coordinate_bounds(in.signs, in.thr);
  const auto res = rka_solve(in.signs, in.thr, RkaRun{20 * 600, 2, {}, false, true});
  for (std::size_t k = 0; k < 20; ++k) CHECK(res.estimate[k] == std::clamp(0.0, bounds.lo[k], bounds.hi[k]));
  CHECK(max_violation(res.estimate, in.signs, in.thr) == 0.0);
  CHECK(res.iterations % 600 == 0);
  CHECK(res.iterations < 12000);
}

TEST_CASE("iteration_lower_bound") {
  CHECK(iteration_lower_bound(1.0, 1e-6, 1000) == 13809);
  CHECK(iteration_lower_bound(1e-6 / (1.0 - 1.0 / 1000.0), 1e-6, 1000) == 1);
  CHECK_THROWS_AS(iteration_lower_bound(1e-6, 1e-6, 1000), Error);
  CHECK_THROWS_AS(iteration_lower_bound(1.0, 1e-6, 1), Error);
}

TEST_CASE("avg_hyperplane_distance") {
  const auto thr = columns(2, {0.0, 0.0});
  const auto r = quantize(std::vector<double>{1.0, 0.0}, thr);
  CHECK(avg_hyperplane_distance(std::vector<double>{0.0, 0.0}, thr, r) == 0.0);
  CHECK(avg_hyperplane_distance(std::vector<double>{1.0, 0.0}, thr, r) == doctest::Approx(0.5));
  const auto dup = columns(2, {0.3, -0.2, 0.3, -0.2});
  const auto one = columns(2, {0.3, -0.2});
  const std::vector<double> x{0.7, 0.1};
  CHECK(avg_hyperplane_distance(x, dup, quantize(x, dup)) == doctest::Approx(avg_hyperplane_distance(x, one, quantize(x, one))));
}

TEST_CASE("sign matrix serialization") {
  const auto in = random_instance(13, 7, 21);
  std::stringstream ss;
  write_packed(ss, in.signs, 21, 0.5);
  const std::string blob = ss.str();
  CHECK(blob.substr(0, blob.find('\n')).find("\"lambda\":0.5") != std::string::npos);
  CHECK(blob.size() == blob.find('\n') + 1 + (13 * 7 + 7) / 8);
  // first byte holds row 0 (7 bits) then row 1 column 0, MSB first
  const auto first = static_cast<unsigned char>(blob[blob.find('\n') + 1]);
  CHECK(((first >> 7) & 1) == (in.signs.at(0, 0) > 0 ? 1 : 0));
  CHECK((first & 1) == (in.signs.at(1, 0) > 0 ? 1 : 0));
  CHECK(read_packed(ss) == in.signs);
  std::ostringstream csv;
  write_csv(csv, in.signs);
  const std::string text = csv.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 13);
}
