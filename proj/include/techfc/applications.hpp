#pragma once

// Use cases built on the distributional forecast: named-technology forecasts,
// two-technology crossing probabilities and deterministic trend crossings.

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "techfc/dataset.hpp"
#include "techfc/forecasting.hpp"

namespace techfc {

struct TechnologyState {
  double current_log_cost = 0.0;
  double mu = 0.0;
  double K = 0.0;
  std::size_t m = 0;
};

// The two cost processes are treated as independent and share theta.
struct CrossingSpec {
  TechnologyState a;  // the incumbent (e.g. the conventional technology C)
  TechnologyState b;  // the challenger (e.g. solar S)
  double theta = 0.0;
  void validate() const;
};

// P(y_a - y_b > 0) at horizon tau, i.e. the probability that b is cheaper.
double crossing_probability(const CrossingSpec& spec, double tau);

// Horizon where the crossing probability is 0.5 (root of the mean of Z),
// located by bisection on [lo, hi]. Empty if the sign does not change.
std::optional<double> even_odds_horizon(const CrossingSpec& spec, double lo = 1.0, double hi = 200.0);

// Forecasts for tau = 1..tau_max from the last observation. m = nullopt uses
// every first difference (m = T - 1).
std::vector<DistributionalForecast> forecast_technology(const TechnologySeries& series, int tau_max, double theta,
                                                        std::optional<std::size_t> m = std::nullopt);

struct BandRow {
  int tau = 0;
  double q05 = 0.0;
  double q16 = 0.0;
  double q50 = 0.0;
  double q84 = 0.0;
  double q95 = 0.0;
};

BandRow forecast_bands(const DistributionalForecast& f);

// Shaded bands at 1, 1.5 and 2 standard deviations around the log median, in
// cost units.
struct SigmaBand {
  double k = 0.0;
  double lower_cost = 0.0;
  double upper_cost = 0.0;
};
std::vector<SigmaBand> sigma_bands(const DistributionalForecast& f);

// `tau,q05,q16,q50,q84,q95` in cost units.
void write_forecast_csv(std::ostream& out, std::span<const DistributionalForecast> forecasts);

class NoCrossingError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Years t solving f g_f^t = s g_s^t. Requires f, s > 0, s >= f and g_s > 0.
// Throws NoCrossingError when g_f <= g_s.
double deterministic_trend_crossing(double f, double g_f, double s, double g_s);

}  // namespace techfc
