#pragma once

// Surrogate-data Monte Carlo: parametric replicas of a corpus, hindcast exactly
// like the observed data, give null distributions for any hindcast statistic.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "techfc/dataset.hpp"
#include "techfc/hindcast.hpp"
#include "techfc/models.hpp"
#include "techfc/rng.hpp"
#include "vendor_json.hpp"

namespace techfc {

inline constexpr std::uint64_t kDefaultSeed = 20160101;

// Full-sample parameters of one technology, used to generate its replicas.
struct TemplateEntry {
  std::string name;
  std::size_t T = 0;
  double mu = 0.0;
  double K = 0.0;
};

std::vector<TemplateEntry> template_from_summaries(std::span<const SeriesSummary> summaries);

struct SurrogateConfig {
  std::size_t replications = 1000;
  double theta = 0.0;
  Innovation innovation;
  std::size_t m = 5;
  int tau_max = 20;
  std::uint64_t seed = kDefaultSeed;
  std::vector<TemplateEntry> corpus_template;
  Weighting weighting = Weighting::pooled;

  void validate() const;
};

// One IMA(1,1) series per template entry with mu = mu_j, K = K_j, the given
// theta (sigma = K_j / sqrt(1 + theta^2)) and the template length.
std::vector<TechnologySeries> surrogate_corpus(const SurrogateConfig& config, Rng& rng);

// Replication r draws from Rng(config.seed).split(r).
Rng replication_rng(const SurrogateConfig& config, std::size_t replication);

// Simulated Xi(tau), one row per replication, columns tau = 1..tau_max.
// NaN where a replication has no forecast at that horizon.
struct XiMatrix {
  std::size_t replications = 0;
  int tau_max = 0;
  std::vector<double> values;  // row-major

  double at(std::size_t replication, int tau) const {
    return values[replication * static_cast<std::size_t>(tau_max) + static_cast<std::size_t>(tau - 1)];
  }
  // Column mean over replications (NaNs ignored).
  std::vector<double> mean_curve() const;
};

XiMatrix simulate_xi_matrix_serial(const SurrogateConfig& config);
// OpenMP over replications; bit-identical to the serial version.
XiMatrix simulate_xi_matrix(const SurrogateConfig& config);

struct NullEnsemble {
  std::string statistic;
  std::vector<double> values;
  double q025 = 0.0;
  double q50 = 0.0;
  double q975 = 0.0;
  double mean = 0.0;
  double std_error = 0.0;  // Monte Carlo standard error of the mean
  double observed = 0.0;
  double p_value = 1.0;      // (#{values >= observed} + 1) / (n + 1)
  double p_value_raw = 1.0;  // #{values >= observed} / n
};

// Linear-interpolation sample quantile (Hyndman-Fan type 7).
double sample_quantile(std::vector<double> values, double q);
NullEnsemble make_null_ensemble(std::string statistic, std::vector<double> values, double observed);

struct XiBand {
  std::vector<int> taus;
  std::vector<NullEnsemble> per_tau;
};

// Per-horizon null distribution of Xi(tau) and the observed curve's p-values.
XiBand null_xi_band(const SurrogateConfig& config, const ErrorGrowthCurve& observed);
XiBand null_xi_band(const XiMatrix& simulated, const ErrorGrowthCurve& observed);

// Distance between the ECDF of rescaled errors and the t(m - 1) CDF on 1000
// equally spaced points of [-15, 15]; the ECDF counts observations strictly
// below each point.
struct DeviationMeasures {
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  double max_abs = 0.0;
};

class StudentGrid {
 public:
  StudentGrid(double df, std::size_t points = 1000, double lo = -15.0, double hi = 15.0);
  DeviationMeasures deviation(std::vector<double> sample) const;
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& cdf() const { return cdf_; }

 private:
  std::vector<double> x_;
  std::vector<double> cdf_;
};

struct DeviationTest {
  DeviationMeasures observed;
  NullEnsemble abs_sum;
  NullEnsemble sq_sum;
  NullEnsemble max_abs;
};

DeviationTest distribution_deviation_test(std::span<const HindcastRecord> records, double theta,
                                          const SurrogateConfig& config);
DeviationTest distribution_deviation_test_serial(std::span<const HindcastRecord> records, double theta,
                                                 const SurrogateConfig& config);

struct ThetaWeighted {
  double theta = 0.0;
  std::vector<double> per_tau;  // theta_w(tau), tau = 1..tau_max (NaN when no weight)
  std::vector<std::string> excluded;
};

// Count-weighted mean of per-technology theta at each horizon (weights: number
// of records of that technology at tau), averaged over tau = 1..tau_max.
// Boundary-flagged technologies are excluded. `records[i].series` indexes
// `summaries`.
ThetaWeighted estimate_theta_weighted(std::span<const SeriesSummary> summaries,
                                      std::span<const HindcastRecord> records, int tau_max = 20);

struct ThetaMatch {
  double theta = 0.0;
  std::vector<double> grid;
  std::vector<double> Z;  // mean over tau of Xi_emp / Xi_sim
  bool bracketed = true;
  std::string warning;
};

// Z(theta) = mean_{tau=1..tau_max} Xi_emp(tau) / Xi_sim,theta(tau); returns the
// grid point minimizing |Z - 1|. All grid points share the base seed (common
// random numbers), so Z is smooth in theta.
ThetaMatch estimate_theta_matched(const ErrorGrowthCurve& observed, const SurrogateConfig& base,
                                  std::span<const double> grid);

struct ThetaSweep {
  std::vector<double> grid;
  std::vector<int> horizons;
  // [horizon][grid point]: mean squared normalized error of IMA forecasts.
  std::vector<std::vector<double>> mse;
  // mse divided by the theta = 0 (random walk) value at the same horizon.
  std::vector<std::vector<double>> ratio;
  std::vector<double> best_theta;
};

// Forecasts y_t + mu_hat tau + theta v_hat_t, where v_hat_t comes from the
// innovations recursion over the estimation window started at zero.
ThetaSweep theta_forecast_sweep(std::span<const TechnologySeries> corpus, std::size_t m,
                                std::span<const double> grid, std::span<const int> horizons);

nlohmann::json to_json(const NullEnsemble& e, bool include_values = false);
nlohmann::json to_json(const DeviationTest& t);
nlohmann::json to_json(const ThetaWeighted& t);
nlohmann::json to_json(const ThetaMatch& t);
nlohmann::json to_json(const ThetaSweep& t);
nlohmann::json to_json(const SurrogateConfig& c);

}  // namespace techfc
