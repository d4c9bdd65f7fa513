#pragma once

// Exhaustive rolling-origin hindcasting: every feasible (origin, horizon) pair
// of every series, with a fixed trailing window of m first differences.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "techfc/dataset.hpp"
#include "techfc/stats.hpp"

namespace techfc {

struct HindcastOptions {
  std::size_t m = 5;
  int tau_max = 20;  // <= 0: unrestricted
  // K_hat = 0 windows cannot be normalized. Skip and count them, or throw.
  bool skip_zero_volatility = true;

  int effective_tau_max(std::size_t T) const;
};

struct HindcastRecord {
  std::size_t series = 0;        // index into the corpus
  std::size_t origin_index = 0;  // 0-based t0
  int tau = 0;
  std::size_t m = 0;
  double raw_error = 0.0;   // y[t0 + tau] - (y[t0] + mu_hat tau)
  double norm_error = 0.0;  // raw_error / K_hat
  double mu_hat = 0.0;
  double K_hat = 0.0;
};

struct SeriesHindcast {
  std::vector<HindcastRecord> records;
  std::size_t skipped_windows = 0;
  std::string note;  // why no records were produced, if so
};

// Records for t0 in [m, T-2] (0-based) and tau in [1, min(T-1-t0, tau_max)].
SeriesHindcast hindcast_series(const TechnologySeries& series, const HindcastOptions& options,
                               std::size_t series_index = 0);

// (T - m - 1)(T - m) / 2 when unrestricted; fewer under a horizon cap.
std::size_t feasible_forecast_count(std::size_t T, std::size_t m, int tau_max);

struct CorpusHindcast {
  std::vector<HindcastRecord> records;  // sorted by (series, origin, tau)
  std::size_t skipped_windows = 0;
  std::vector<std::string> notes;
};

// Reference implementation, one series after another.
CorpusHindcast hindcast_corpus_serial(std::span<const TechnologySeries> corpus, const HindcastOptions& options);
// OpenMP over series; output identical to the serial version.
CorpusHindcast hindcast_corpus(std::span<const TechnologySeries> corpus, const HindcastOptions& options);

// `technology,t0_year,tau,raw_error,norm_error,mu_hat,K_hat`
void write_hindcast_csv(std::ostream& out, std::span<const TechnologySeries> corpus,
                        std::span<const HindcastRecord> records);

// Per-horizon sums of squared normalized errors for one series (index = tau).
struct HorizonSums {
  std::vector<double> sum_sq;
  std::vector<std::size_t> count;

  void resize(std::size_t tau_cap);
  void add(int tau, double norm_error);
};

// Streaming form of hindcast_series for the Monte Carlo kernels: accumulates
// squared normalized errors without materializing records. Zero-volatility
// windows are skipped and counted.
void accumulate_squared_errors(std::span<const double> log_costs, std::size_t m, int tau_max, HorizonSums& sums,
                               std::size_t& skipped_windows);

// Appends rescaled errors epsilon* for every feasible forecast of one series.
void append_rescaled_errors(std::span<const double> log_costs, std::size_t m, int tau_max, double theta,
                            std::vector<double>& out);

enum class Weighting { pooled, equal_technology };

struct ErrorGrowthPoint {
  int tau = 0;
  std::size_t n_forecasts = 0;
  std::size_t n_technologies = 0;
  double xi = 0.0;
};

struct ErrorGrowthCurve {
  Weighting weighting = Weighting::pooled;
  std::vector<ErrorGrowthPoint> points;  // ascending tau, empty horizons omitted

  const ErrorGrowthPoint* at(int tau) const;
};

// Pooled: mean of (E/K_hat)^2 over all records at tau. Equal-technology: mean
// over technologies of their per-technology means.
ErrorGrowthCurve error_growth(std::span<const HindcastRecord> records, int tau_max,
                              Weighting weighting = Weighting::pooled);
ErrorGrowthCurve error_growth_from_sums(std::span<const HorizonSums> per_series, int tau_max,
                                        Weighting weighting = Weighting::pooled);

struct RescaledDistribution {
  Ecdf pooled;
  std::map<int, Ecdf> by_horizon;  // filled when split by horizon
};

enum class HorizonSplit { all, by_horizon };

// epsilon* for every record, rescaled with variance_factors(tau, m, theta).
std::vector<double> rescaled_errors(std::span<const HindcastRecord> records, double theta);
RescaledDistribution pooled_rescaled_distribution(std::span<const HindcastRecord> records, double theta,
                                                  HorizonSplit split = HorizonSplit::all);

// Nominal two-sided t-test of zero mean error at one horizon. Records overlap
// and are correlated, so the p-value is indicative only.
double bias_test(std::span<const HindcastRecord> records, int tau);

}  // namespace techfc
