// SPDX-License-Identifier: Apache-2.0
#include "uno/onebit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <nlohmann/json.hpp>
#include <ostream>
#include <random>

#include "uno/error.hpp"
#include "uno/kernels.hpp"
#include "uno/rng.hpp"

namespace uno::onebit {

SignMatrix::SignMatrix(std::size_t n, std::size_t m) : n_(n), m_(m), words_((n * m + 63) / 64, 0) {}

void SignMatrix::set(std::size_t k, std::size_t l, int s) noexcept {
  const std::size_t j = k + l * n_;
  const std::uint64_t bit = std::uint64_t{1} << (j & 63);
  if (s > 0)
    words_[j >> 6] |= bit;
  else
    words_[j >> 6] &= ~bit;
}

ThresholdEnsemble gaussian_thresholds(double sigma, std::size_t n, std::size_t m, std::uint64_t seed) {
  require(sigma > 0.0 && std::isfinite(sigma), ErrorKind::invalid_parameter, "sigma must be positive");
  require(n >= 1 && m >= 1, ErrorKind::invalid_parameter, "n and m must be at least 1");
  ThresholdEnsemble t{n, m, std::vector<double>(n * m), sigma, seed};
  CounterRng rng = CounterRng(seed).substream(stream::thresholds);
  std::normal_distribution<double> dist(0.0, sigma);
  for (auto& g : t.gamma) g = dist(rng);
  return t;
}

ThresholdEnsemble design_thresholds(double lambda, std::size_t n, std::size_t m, std::uint64_t seed) {
  require(lambda > 0.0, ErrorKind::invalid_parameter, "lambda must be positive");
  return gaussian_thresholds(lambda / 3.0, n, m, seed);
}

SignMatrix quantize(std::span<const double> x, const ThresholdEnsemble& thr) {
  require(thr.n == x.size(), ErrorKind::shape_mismatch, "threshold length differs from signal length");
  SignMatrix r(thr.n, thr.m);
  kernels::quantize_parallel(x, thr.gamma, thr.n, r.words());
  return r;
}

SignMatrix quantize(const modulo::ModuloSamples& xt, const ThresholdEnsemble& thr) {
  return quantize(xt.values, thr);
}

std::vector<std::int64_t> gram_check(const SignMatrix& r) {
  const std::size_t n = r.n(), m = r.m();
  // Stacked operator: block l is diag(r^(l)), row l*n + k.
  std::vector<std::int8_t> op(m * n * n, 0);
  for (std::size_t l = 0; l < m; ++l)
    for (std::size_t k = 0; k < n; ++k) op[(l * n + k) * n + k] = static_cast<std::int8_t>(r.at(k, l));
  std::vector<std::int64_t> g(n * n, 0);
  for (std::size_t row = 0; row < m * n; ++row) {
    const std::int8_t* o = op.data() + row * n;
    for (std::size_t a = 0; a < n; ++a) {
      if (o[a] == 0) continue;
      for (std::size_t b = 0; b < n; ++b) g[a * n + b] += std::int64_t{o[a]} * o[b];
    }
  }
  return g;
}

Bounds coordinate_bounds(const SignMatrix& r, const ThresholdEnsemble& thr) {
  require(r.n() == thr.n && r.m() == thr.m, ErrorKind::shape_mismatch, "sign/threshold shapes differ");
  const double inf = std::numeric_limits<double>::infinity();
  Bounds b{std::vector<double>(thr.n, -inf), std::vector<double>(thr.n, inf)};
  for (std::size_t l = 0; l < thr.m; ++l)
    for (std::size_t k = 0; k < thr.n; ++k) {
      const double tau = thr.at(k, l);
      if (r.at(k, l) > 0)
        b.lo[k] = std::max(b.lo[k], tau);
      else
        b.hi[k] = std::min(b.hi[k], tau);
    }
  return b;
}

namespace {

inline double coordinate_violation(double x, double lo, double hi) noexcept {
  return std::max({lo - x, x - hi, 0.0});
}

double max_coordinate_violation(std::span<const double> x, const Bounds& b) {
  double v = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) v = std::max(v, coordinate_violation(x[k], b.lo[k], b.hi[k]));
  return v;
}

std::vector<double> initial_point(const RkaRun& run, std::size_t n) {
  require(run.i_max >= 1, ErrorKind::invalid_parameter, "i_max must be at least 1");
  if (run.init.empty()) return std::vector<double>(n, 0.0);
  require(run.init.size() == n, ErrorKind::shape_mismatch, "init length differs from n");
  return run.init;
}

constexpr double kStopTolerance = 1e-12;
constexpr std::size_t kLookahead = 8;

}  // namespace

double max_violation(std::span<const double> x, const SignMatrix& r, const ThresholdEnsemble& thr) {
  require(x.size() == thr.n, ErrorKind::shape_mismatch, "estimate length differs from n");
  return max_coordinate_violation(x, coordinate_bounds(r, thr));
}

RkaResult rka_solve(const SignMatrix& r, const ThresholdEnsemble& thr, const RkaRun& run) {
  require(r.n() == thr.n && r.m() == thr.m, ErrorKind::shape_mismatch, "sign/threshold shapes differ");
  const std::size_t n = thr.n;
  const std::uint64_t mn = static_cast<std::uint64_t>(n) * thr.m;
  RkaResult res;
  res.estimate = initial_point(run, n);
  std::vector<double>& x = res.estimate;

  const bool need_bounds = run.record_trace || run.early_stop;
  Bounds bounds;
  std::vector<double> viol;
  if (need_bounds) {
    bounds = coordinate_bounds(r, thr);
    viol.resize(n);
    for (std::size_t k = 0; k < n; ++k) viol[k] = coordinate_violation(x[k], bounds.lo[k], bounds.hi[k]);
  }
  if (run.record_trace) res.trace.reserve(run.i_max);

  CounterRng rng = CounterRng(run.seed).substream(stream::rka);
  // Row indices are drawn a few iterations ahead so their loads can be prefetched.
  std::array<std::uint64_t, kLookahead> ahead{};
  for (auto& a : ahead) {
    a = rng.uniform_index(mn);
    __builtin_prefetch(thr.gamma.data() + a);
  }
  const double* gamma = thr.gamma.data();
  std::uint64_t i = 0;
  for (; i < run.i_max; ++i) {
    const std::uint64_t j = ahead[i % kLookahead];
    const std::uint64_t next = rng.uniform_index(mn);
    ahead[i % kLookahead] = next;
    __builtin_prefetch(gamma + next);

    const std::size_t k = j % n;
    const double rs = r.sign(j);
    const double c = -rs;                // c_j restricted to coordinate k
    const double b = -(rs * gamma[j]);   // b_j
    const double v = c * x[k] - b;
    const double beta = v > 0.0 ? v : 0.0;
    x[k] = x[k] - beta * c;

    if (need_bounds) viol[k] = coordinate_violation(x[k], bounds.lo[k], bounds.hi[k]);
    if (run.record_trace) res.trace.push_back(*std::max_element(viol.begin(), viol.end()));
    if (run.early_stop && (i + 1) % mn == 0 &&
        *std::max_element(viol.begin(), viol.end()) < kStopTolerance) {
      ++i;
      break;
    }
  }
  res.iterations = i;
  return res;
}

RkaResult rka_solve_dense(const SignMatrix& r, const ThresholdEnsemble& thr, const RkaRun& run) {
  require(r.n() == thr.n && r.m() == thr.m, ErrorKind::shape_mismatch, "sign/threshold shapes differ");
  const std::size_t n = thr.n;
  const std::size_t mn = n * thr.m;
  // C = -Omega~ (mn x n), b = -(vec(R) .* vec(Gamma)).
  std::vector<double> cmat(mn * n, 0.0), bvec(mn);
  for (std::size_t j = 0; j < mn; ++j) {
    const double rs = r.sign(j);
    cmat[j * n + j % n] = -rs;
    bvec[j] = -(rs * thr.gamma[j]);
  }
  RkaResult res;
  res.estimate = initial_point(run, n);
  std::vector<double>& x = res.estimate;
  CounterRng rng = CounterRng(run.seed).substream(stream::rka);
  for (std::uint64_t i = 0; i < run.i_max; ++i) {
    const std::uint64_t j = rng.uniform_index(mn);
    const double* c = cmat.data() + j * n;
    double dot = 0.0, norm2 = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      dot += c[q] * x[q];
      norm2 += c[q] * c[q];
    }
    const double v = dot - bvec[j];
    const double beta = v > 0.0 ? v : 0.0;
    const double step = beta / norm2;
    for (std::size_t q = 0; q < n; ++q) x[q] = x[q] - step * c[q];
    if (run.record_trace) res.trace.push_back(max_violation(x, r, thr));
  }
  res.iterations = run.i_max;
  return res;
}

std::uint64_t iteration_lower_bound(double omega0, double eps1, std::size_t n) {
  require(eps1 > 0.0 && omega0 > eps1, ErrorKind::invalid_parameter, "need omega0 > eps1 > 0");
  require(n >= 2, ErrorKind::invalid_parameter, "n must be at least 2");
  const double v = std::log(omega0 / eps1) / -std::log1p(-1.0 / static_cast<double>(n));
  return static_cast<std::uint64_t>(std::max(1.0, std::ceil(v - 1e-9)));
}

double avg_hyperplane_distance(std::span<const double> x, const ThresholdEnsemble& thr, const SignMatrix& r) {
  require(r.n() == thr.n && r.m() == thr.m && x.size() == thr.n, ErrorKind::shape_mismatch,
          "estimate, signs and thresholds must agree");
  return kernels::sq_distance_sum_parallel(x, thr.gamma, thr.n) / static_cast<double>(thr.n * thr.m);
}

void write_packed(std::ostream& os, const SignMatrix& r, std::uint64_t seed, double lambda) {
  nlohmann::json h{{"n", r.n()}, {"m", r.m()}, {"seed", seed}, {"lambda", lambda}};
  os << h.dump() << '\n';
  const std::size_t total = r.size();
  std::vector<unsigned char> bytes((total + 7) / 8, 0);
  for (std::size_t k = 0; k < r.n(); ++k)
    for (std::size_t l = 0; l < r.m(); ++l)
      if (r.at(k, l) > 0) {
        const std::size_t b = k * r.m() + l;
        bytes[b / 8] |= static_cast<unsigned char>(0x80U >> (b % 8));
      }
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(static_cast<bool>(os), ErrorKind::io, "failed to write sign matrix");
}

SignMatrix read_packed(std::istream& is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorKind::io, "missing sign matrix header");
  const auto h = nlohmann::json::parse(line);
  const auto n = h.at("n").get<std::size_t>();
  const auto m = h.at("m").get<std::size_t>();
  std::vector<unsigned char> bytes((n * m + 7) / 8);
  is.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(is.gcount() == static_cast<std::streamsize>(bytes.size()), ErrorKind::io, "truncated sign matrix");
  SignMatrix r(n, m);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < m; ++l) {
      const std::size_t b = k * m + l;
      r.set(k, l, (bytes[b / 8] & (0x80U >> (b % 8))) ? 1 : -1);
    }
  return r;
}

void write_csv(std::ostream& os, const SignMatrix& r) {
  for (std::size_t k = 0; k < r.n(); ++k) {
    for (std::size_t l = 0; l < r.m(); ++l) os << (l ? "," : "") << r.at(k, l);
    os << '\n';
  }
}

}  // namespace uno::onebit
