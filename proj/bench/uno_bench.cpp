// SPDX-License-Identifier: Apache-2.0
// Serial reference vs OpenMP kernels: fold, quantize, T_ave distance sum,
// and Monte-Carlo trial dispatch.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "uno/harness.hpp"
#include "uno/kernels.hpp"
#include "uno/rng.hpp"

using namespace uno;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-22s serial %9.4f s  parallel %9.4f s  speedup %5.2fx  %s\n", name, serial, parallel,
              serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", kernels::max_threads());
  const std::size_t n = 23296, m = 400;
  CounterRng rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(n), gamma(n * m), big(n * m);
  for (auto& v : x) v = 4.0 * g(rng);
  for (auto& v : gamma) v = g(rng);
  for (auto& v : big) v = 8.0 * g(rng);

  std::vector<double> fa(big.size()), fb(big.size());
  const double f_s = best_of(3, [&] { kernels::fold_serial(big, 0.5, fa); });
  const double f_p = best_of(3, [&] { kernels::fold_parallel(big, 0.5, fb); });
  report("fold", f_s, f_p, fa == fb);

  std::vector<std::uint64_t> wa((n * m + 63) / 64), wb(wa.size());
  const double q_s = best_of(3, [&] { kernels::quantize_serial(x, gamma, n, wa); });
  const double q_p = best_of(3, [&] { kernels::quantize_parallel(x, gamma, n, wb); });
  report("quantize", q_s, q_p, wa == wb);

  double da = 0.0, db = 0.0;
  const double d_s = best_of(3, [&] { da = kernels::sq_distance_sum_serial(x, gamma, n); });
  const double d_p = best_of(3, [&] { db = kernels::sq_distance_sum_parallel(x, gamma, n); });
  report("hyperplane distance", d_s, d_p, da == db);

  harness::ExperimentConfig cfg = harness::ExperimentConfig::defaults("table1");
  cfg.trials = 4;
  cfg.parallel = false;
  harness::ExperimentResult rs, rp;
  const double t_s = best_of(1, [&] { rs = harness::run_experiment(cfg); });
  cfg.parallel = true;
  const double t_p = best_of(1, [&] { rp = harness::run_experiment(cfg); });
  report("table1 trials", t_s, t_p, rs.cells == rp.cells);
  return 0;
}
