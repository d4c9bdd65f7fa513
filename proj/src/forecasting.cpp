#include "techfc/forecasting.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "techfc/stats.hpp"

namespace techfc {

double point_forecast(const RwdEstimate& est, double y_t, double tau) {
  if (tau < 0.0) throw std::invalid_argument("point_forecast: horizon must be >= 0");
  return y_t + est.mu_hat * tau;
}

double variance_factor(double tau, std::size_t m) {
  if (m == 0) throw std::invalid_argument("variance factor needs m >= 1");
  return tau + tau * tau / static_cast<double>(m);
}

double a_star(double tau, std::size_t m, double theta) {
  const auto md = static_cast<double>(m);
  return -2.0 * theta + (1.0 + 2.0 * (md - 1.0) * theta / md + theta * theta) * variance_factor(tau, m);
}

double a_star_expanded(double tau, std::size_t m, double theta) {
  if (m == 0) throw std::invalid_argument("a_star_expanded needs m >= 1");
  const auto md = static_cast<double>(m);
  const double oldest = tau * theta / md;                  // v_{t-m}
  const double window = tau * (1.0 + theta) / md;          // v_{t-m+1} .. v_{t-1}
  const double origin = theta - tau / md;                  // v_t
  const double future = 1.0 + theta;                       // v_{t+1} .. v_{t+tau-1}
  return oldest * oldest + (md - 1.0) * window * window + origin * origin + (tau - 1.0) * future * future + 1.0;
}

double VarianceFactors::rescale_divisor() const { return std::sqrt(A_star / (1.0 + theta * theta)); }

VarianceFactors variance_factors(double tau, std::size_t m, double theta) {
  if (m <= 3) {
    throw std::domain_error("variance_factors: m = " + std::to_string(m) +
                            " <= 3, the (m-1)/(m-3) prefactor diverges (t(m-1) has no finite variance)");
  }
  if (tau < 0.0) throw std::invalid_argument("variance_factors: horizon must be >= 0");
  if (!(std::fabs(theta) < 1.0)) throw std::invalid_argument("variance_factors: theta must lie in (-1, 1)");
  VarianceFactors f;
  f.tau = tau;
  f.m = m;
  f.theta = theta;
  f.A = variance_factor(tau, m);
  f.A_star = a_star(tau, m, theta);
  const auto md = static_cast<double>(m);
  f.xi = (md - 1.0) / (md - 3.0) * f.A_star / (1.0 + theta * theta);
  return f;
}

double normalize_error(double raw_error, double K_hat) {
  if (!(K_hat > 0.0)) throw std::domain_error("normalize_error: K_hat = 0, window has no volatility");
  return raw_error / K_hat;
}

double normalize_error(double raw_error, const RwdEstimate& est) { return normalize_error(raw_error, est.K_hat); }

double rescale_error(double norm_error, const VarianceFactors& factors) {
  return norm_error / factors.rescale_divisor();
}

DistributionalForecast::DistributionalForecast(double origin_log_cost, double horizon, double mean_log,
                                               double sd_log, double df)
    : origin_log_cost_(origin_log_cost), horizon_(horizon), mean_log_(mean_log), sd_log_(sd_log), df_(df) {
  if (sd_log < 0.0) throw std::invalid_argument("forecast sd must be >= 0");
  if (!(df > 0.0)) throw std::invalid_argument("forecast degrees of freedom must be > 0");
}

double DistributionalForecast::median_cost() const { return std::exp(mean_log_); }

double DistributionalForecast::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile: p must lie in (0, 1)");
  if (sd_log_ == 0.0) return mean_log_;
  return mean_log_ + sd_log_ * student_t_quantile(p, df_);
}

double DistributionalForecast::quantile_cost(double p) const { return std::exp(quantile(p)); }

double DistributionalForecast::prob_exceeds(double log_level) const {
  if (sd_log_ == 0.0) return mean_log_ >= log_level ? 1.0 : 0.0;
  return 1.0 - student_t_cdf((log_level - mean_log_) / sd_log_, df_);
}

DistributionalForecast distributional_forecast(const RwdEstimate& est, double y_t, double tau, double theta) {
  if (tau < 1.0) throw std::invalid_argument("distributional_forecast: horizon must be >= 1");
  if (est.K_hat < 0.0) throw std::invalid_argument("distributional_forecast: K_hat must be >= 0");
  const auto factors = variance_factors(tau, est.m, theta);
  return {y_t, tau, point_forecast(est, y_t, tau), est.K_hat * factors.rescale_divisor(),
          static_cast<double>(est.m) - 1.0};
}

nlohmann::json forecast_to_json(const DistributionalForecast& f, const std::string& technology,
                                int origin_year) {
  nlohmann::json j;
  j["technology"] = technology;
  j["origin_year"] = origin_year;
  j["horizon"] = f.horizon();
  j["mean_log"] = f.mean_log();
  j["sd_log"] = f.sd_log();
  j["quantiles"] = {{"p05", f.quantile(0.05)},
                    {"p16", f.quantile(0.16)},
                    {"p50", f.quantile(0.50)},
                    {"p84", f.quantile(0.84)},
                    {"p95", f.quantile(0.95)}};
  j["median_cost"] = f.median_cost();
  return j;
}

}  // namespace techfc
