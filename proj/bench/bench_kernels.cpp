// Serial reference vs OpenMP kernels: per-series hindcast and per-replication
// surrogate simulation. Checks that both produce identical output.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "techfc/hindcast.hpp"
#include "techfc/models.hpp"
#include "techfc/reference_template.hpp"
#include "techfc/rng.hpp"
#include "techfc/surrogate.hpp"

using namespace techfc;

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same_records(const CorpusHindcast& a, const CorpusHindcast& b) {
  if (a.records.size() != b.records.size()) return false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const auto& x = a.records[i];
    const auto& y = b.records[i];
    if (x.series != y.series || x.origin_index != y.origin_index || x.tau != y.tau || x.norm_error != y.norm_error) {
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t reps = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 200;
  std::printf("threads available: %d\n", omp_get_max_threads());

  Rng rng(7);
  std::vector<TechnologySeries> corpus;
  for (int j = 0; j < 2000; ++j) corpus.push_back(simulate_rwd(-0.05, 0.1, 60, rng));
  HindcastOptions opt;
  CorpusHindcast serial, parallel;
  const double ts = seconds([&] { serial = hindcast_corpus_serial(corpus, opt); });
  const double tp = seconds([&] { parallel = hindcast_corpus(corpus, opt); });
  std::printf("hindcast  %zu records  serial %.3fs  omp %.3fs  speedup %.2f  identical %s\n", serial.records.size(),
              ts, tp, ts / tp, same_records(serial, parallel) ? "yes" : "NO");

  SurrogateConfig config;
  config.replications = reps;
  config.theta = 0.6;
  config.corpus_template = reference_improving_template();
  XiMatrix xs, xp;
  const double ss = seconds([&] { xs = simulate_xi_matrix_serial(config); });
  const double sp = seconds([&] { xp = simulate_xi_matrix(config); });
  std::printf("xi matrix %zu reps  serial %.3fs  omp %.3fs  speedup %.2f  identical %s\n", reps, ss, sp, ss / sp,
              xs.values == xp.values ? "yes" : "NO");

  const auto observed = hindcast_corpus(surrogate_corpus(config, rng), opt);
  DeviationTest ds, dp;
  const double ds_t = seconds([&] { ds = distribution_deviation_test_serial(observed.records, 0.6, config); });
  const double dp_t = seconds([&] { dp = distribution_deviation_test(observed.records, 0.6, config); });
  std::printf("deviation %zu reps  serial %.3fs  omp %.3fs  speedup %.2f  identical %s\n", reps, ds_t, dp_t,
              ds_t / dp_t, ds.abs_sum.values == dp.abs_sum.values ? "yes" : "NO");
  return 0;
}
