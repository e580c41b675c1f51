// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "uno/error.hpp"
#include "uno/modulo.hpp"
#include "uno/rng.hpp"
#include "uno/signals.hpp"

using namespace uno;
using namespace uno::modulo;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::io;
}

}  // namespace

TEST_CASE("fold examples") {
  CHECK(fold(std::vector<double>{0.3}, 0.5).values[0] == 0.3);
  CHECK(fold(std::vector<double>{0.6}, 0.5).values[0] == doctest::Approx(-0.4));
  CHECK(fold(std::vector<double>{0.5}, 0.5).values[0] == -0.5);
  CHECK(kind_of([] { fold(std::vector<double>{1.0}, 0.0); }) == ErrorKind::invalid_parameter);
}

TEST_CASE("fold properties: range, idempotence, lattice residual") {
  CounterRng rng(17);
  for (int i = 0; i < 20000; ++i) {
    const double lambda = 0.01 + 3.0 * rng.uniform01();
    const double x = 200.0 * rng.uniform01() - 100.0;
    const double v = fold_value(x, lambda);
    CHECK(v >= -lambda);
    CHECK(v < lambda);
    CHECK(fold_value(v, lambda) == v);
    const double units = (x - v) / (2.0 * lambda);
    CHECK(std::abs(units - std::round(units)) <= 1e-9);
  }
}

TEST_CASE("beta_for") {
  CHECK(beta_for(8.0, 0.5) == 8.0);
  CHECK(beta_for(8.1, 0.5) == 9.0);
  CHECK(beta_for(0.1, 0.5) == 1.0);
}

TEST_CASE("min_diff_order") {
  const double omega = 0.5 / std::numbers::e;
  CHECK(min_diff_order(1.0, 4.0, 1.0, omega) == 2);
  CHECK(min_diff_order(1.0, 1.0, 1.0, omega) == 1);
  CHECK(kind_of([] { min_diff_order(1.0, 4.0, 1.0, 1.1 / std::numbers::e); }) == ErrorKind::invalid_parameter);
  CHECK(kind_of([] { min_diff_order(1.0, 0.5, 1.0, 0.1); }) == ErrorKind::invalid_parameter);
}

TEST_CASE("finite and inverse differences") {
  CHECK(finite_diff(std::vector<double>{1, 2, 4}, 1) == std::vector<double>{1, 2});
  CHECK(finite_diff(std::vector<double>{1, 2, 4}, 2) == std::vector<double>{1});
  CHECK(finite_diff(std::vector<double>(5, 3.0), 1) == std::vector<double>(4, 0.0));
  CHECK(kind_of([] { finite_diff(std::vector<double>{1, 2}, 2); }) == ErrorKind::invalid_parameter);
  CHECK(inverse_diff(std::vector<double>{1, 1, 1}) == std::vector<double>{1, 2, 3});
  CHECK(inverse_diff(std::vector<double>(4, 0.0)) == std::vector<double>(4, 0.0));

  CounterRng rng(3);
  std::vector<double> s(500);
  for (auto& v : s) v = 2.0 * rng.uniform01() - 1.0;
  std::vector<double> padded{0.0};
  const auto cum = inverse_diff(s);
  padded.insert(padded.end(), cum.begin(), cum.end());
  const auto back = finite_diff(padded, 1);
  for (std::size_t k = 0; k < s.size(); ++k) CHECK(std::abs(back[k] - s[k]) <= 1e-12);
}

TEST_CASE("unfold: round trip on band-limited signals") {
  const double dt = 1e-3;
  for (double c : {0.5, 0.25, 0.125}) {
    const double omega = c / (std::numbers::e * dt);
    for (double lambda : {0.2, 0.5, 1.0}) {
      for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto x = signals::gen_bandlimited_random(1024, omega, dt, 8.0, seed);
        const double beta = beta_for(8.0, lambda);
        const UnfoldConfig cfg{beta, min_diff_order(lambda, beta, dt, omega), dt, omega};
        const auto raw = unfold(fold(x.samples, lambda), cfg);
        const auto est = align_offset(x.samples, raw, lambda);
        double worst = 0.0;
        for (std::size_t k = 0; k < est.size(); ++k) worst = std::max(worst, std::abs(est[k] - x.samples[k]));
        CHECK(worst <= 1e-8);
        CHECK(signals::nmse_db(x.samples, est) <= -160.0);
        // output differs from x by a constant multiple of 2*lambda
        const double off = (raw[0] - x.samples[0]) / (2.0 * lambda);
        CHECK(std::abs(off - std::round(off)) <= 1e-9);
        const auto dx = finite_diff(x.samples, cfg.diff_order), dr = finite_diff(raw, cfg.diff_order);
        for (std::size_t k = 0; k < dx.size(); ++k) CHECK(std::abs(dx[k] - dr[k]) <= 1e-9);
      }
    }
  }
}

TEST_CASE("unfold: inside the range returns the input") {
  const double dt = 1e-3, omega = 0.25 / (std::numbers::e * dt);
  const auto x = signals::gen_bandlimited_random(512, omega, dt, 0.9, 4);
  const ModuloSamples m = fold(x.samples, 1.0);
  CHECK(m.values == x.samples);
  for (int N : {1, 2, 3}) CHECK(unfold(m, UnfoldConfig{2.0, N, dt, omega}) == x.samples);
}

TEST_CASE("unfold: errors") {
  const ModuloSamples m{std::vector<double>(40, 0.0), 0.5};
  CHECK(kind_of([&] { unfold(m, UnfoldConfig{1.5, 2, 1.0, 0.1}); }) == ErrorKind::config_invalid);
  CHECK(kind_of([&] { unfold(m, UnfoldConfig{8.0, 2, 1.0, 0.1}); }) == ErrorKind::length_too_short);
  CHECK_NOTHROW(unfold(m, UnfoldConfig{8.0, 1, 1.0, 0.1}));
}

TEST_CASE("align_offset") {
  const std::vector<double> t{0.1, -0.3, 0.7};
  std::vector<double> e = t;
  for (auto& v : e) v += 4.0 * 0.5;
  const auto back = align_offset(t, e, 0.5);
  for (std::size_t k = 0; k < t.size(); ++k) CHECK(back[k] == doctest::Approx(t[k]).epsilon(1e-15));
  CHECK(align_offset(t, t, 0.5) == t);
  std::vector<double> noisy{t[0] + 1.0 + 1e-3, t[1] + 1.0 - 2e-3, t[2] + 1.0};
  const auto a = align_offset(t, noisy, 0.5);
  CHECK(a[0] - t[0] == doctest::Approx(1e-3));
  CHECK(a[1] - t[1] == doctest::Approx(-2e-3));
  CHECK(kind_of([&] { align_offset(t, std::vector<double>{1.0}, 0.5); }) == ErrorKind::shape_mismatch);
}
