#pragma once

// Point forecasts, analytic variance factors and distributional forecasts for
// the random walk with drift, generalized to IMA(1,1) increments.

#include <cstddef>
#include <string>

#include "techfc/models.hpp"
#include "vendor_json.hpp"

namespace techfc {

// y_t + mu_hat * tau. tau = 0 returns y_t.
double point_forecast(const RwdEstimate& est, double y_t, double tau);

// A = tau + tau^2 / m.
double variance_factor(double tau, std::size_t m);

// A* = -2 theta + (1 + 2 (m - 1) theta / m + theta^2) (tau + tau^2 / m).
double a_star(double tau, std::size_t m, double theta);

// The same quantity written as the sum of squared coefficients of the
// independent innovations entering the forecast error. Test oracle for a_star.
double a_star_expanded(double tau, std::size_t m, double theta);

struct VarianceFactors {
  double tau = 0.0;
  std::size_t m = 0;
  double theta = 0.0;
  double A = 0.0;
  double A_star = 0.0;
  // Expected squared normalized error ((m-1)/(m-3)) A* / (1 + theta^2).
  double xi = 0.0;

  // sqrt(A* / (1 + theta^2)), the divisor that maps E/K_hat onto t(m-1).
  double rescale_divisor() const;
};

// Requires tau >= 1 (tau >= 0 accepted for continuous-horizon callers),
// m > 3 and |theta| < 1.
VarianceFactors variance_factors(double tau, std::size_t m, double theta);

// E / K_hat. Throws std::domain_error when K_hat = 0.
double normalize_error(double raw_error, const RwdEstimate& est);
double normalize_error(double raw_error, double K_hat);

// epsilon* = norm_error / sqrt(A* / (1 + theta^2)), predicted ~ t(m - 1).
double rescale_error(double norm_error, const VarianceFactors& factors);

// Forecast distribution of the log cost tau years ahead. Centre and scale follow
// the normal form N(y_t + mu_hat tau, K_hat^2 A*/(1+theta^2)); quantiles and
// exceedance probabilities use the Student t(m - 1) shape with that scale.
class DistributionalForecast {
 public:
  DistributionalForecast() = default;
  DistributionalForecast(double origin_log_cost, double horizon, double mean_log, double sd_log, double df);

  double origin_log_cost() const { return origin_log_cost_; }
  double horizon() const { return horizon_; }
  double mean_log() const { return mean_log_; }
  double sd_log() const { return sd_log_; }
  double degrees_of_freedom() const { return df_; }
  double median_cost() const;

  double quantile(double p) const;
  double quantile_cost(double p) const;
  // P(y_{t+tau} >= log_level).
  double prob_exceeds(double log_level) const;
  double prob_below(double log_level) const { return 1.0 - prob_exceeds(log_level); }

 private:
  double origin_log_cost_ = 0.0;
  double horizon_ = 0.0;
  double mean_log_ = 0.0;
  double sd_log_ = 0.0;
  double df_ = 1.0;
};

DistributionalForecast distributional_forecast(const RwdEstimate& est, double y_t, double tau, double theta);

// {technology, origin_year, horizon, mean_log, sd_log, quantiles: {p05, p16,
// p50, p84, p95}, median_cost}
nlohmann::json forecast_to_json(const DistributionalForecast& f, const std::string& technology,
                                int origin_year);

}  // namespace techfc
