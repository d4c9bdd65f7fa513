#include "techfc/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "techfc/error.hpp"
#include "techfc/stats.hpp"

namespace techfc {

RwdEstimate estimate_rwd(std::span<const double> log_costs, std::size_t origin_index, std::size_t m) {
  if (m < 2) throw std::invalid_argument("estimate_rwd: window m must be >= 2");
  if (origin_index < m || origin_index >= log_costs.size()) {
    throw std::out_of_range("estimate_rwd: window of " + std::to_string(m) + " differences ending at index " +
                            std::to_string(origin_index) + " does not fit a series of length " +
                            std::to_string(log_costs.size()));
  }
  RwdEstimate est;
  est.m = m;
  est.origin_index = origin_index;
  const std::size_t begin = origin_index - m;
  const auto md = static_cast<double>(m);
  est.mu_hat = (log_costs[origin_index] - log_costs[begin]) / md;
  double ss = 0.0;
  for (std::size_t i = begin; i < origin_index; ++i) {
    const double r = (log_costs[i + 1] - log_costs[i]) - est.mu_hat;
    ss += r * r;
  }
  est.K_hat = std::sqrt(ss / (md - 1.0));
  return est;
}

ImaParams ImaParams::from_sigma(double mu, double sigma, double theta) {
  if (sigma < 0.0) throw std::invalid_argument("IMA sigma must be >= 0");
  ImaParams p;
  p.mu = mu;
  p.sigma = sigma;
  p.theta = theta;
  p.K = sigma * std::sqrt(1.0 + theta * theta);
  p.boundary = std::fabs(std::fabs(theta) - 1.0) <= 1e-6;
  return p;
}

ImaParams ImaParams::from_volatility(double mu, double K, double theta) {
  if (K < 0.0) throw std::invalid_argument("IMA volatility K must be >= 0");
  return from_sigma(mu, K / std::sqrt(1.0 + theta * theta), theta);
}

namespace {

struct Profile {
  double loglik;
  double mu;
  double sigma2;
};

// v_t = d_t - mu - theta v_{t-1}, v_0 = 0, is affine in mu: v_t = a_t - mu b_t.
Profile profile(std::span<const double> d, double theta) {
  double a = 0.0;
  double b = 0.0;
  double sab = 0.0;
  double sbb = 0.0;
  double saa = 0.0;
  for (double x : d) {
    a = x - theta * a;
    b = 1.0 - theta * b;
    sab += a * b;
    sbb += b * b;
    saa += a * a;
  }
  const double mu = sab / sbb;
  const auto n = static_cast<double>(d.size());
  const double sigma2 = std::max(saa - mu * sab, 0.0) / n;
  const double ll = sigma2 > 0.0 ? -0.5 * n * std::log(sigma2) : std::numeric_limits<double>::infinity();
  return {ll, mu, sigma2};
}

}  // namespace

double ima_profile_loglik(std::span<const double> diffs, double theta) { return profile(diffs, theta).loglik; }

ImaParams fit_ima_mle_diffs(std::span<const double> diffs) {
  if (diffs.size() < 3) throw DataError("IMA(1,1) fit needs at least 4 observations");
  const double d_mean = mean(diffs);
  if (std::sqrt(sample_variance(diffs)) <= 1e-12 * std::max(1.0, std::fabs(d_mean))) {
    // Constant increments: no innovations to fit.
    return ImaParams::from_sigma(d_mean, 0.0, 0.0);
  }

  // Coarse grid over [-1, 1].
  double best_theta = -1.0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 200; ++i) {
    const double theta = -1.0 + 0.01 * i;
    const double ll = profile(diffs, theta).loglik;
    if (std::isnan(ll)) throw NumericalError("IMA(1,1) likelihood is not finite");
    if (ll > best_ll) {
      best_ll = ll;
      best_theta = theta;
    }
  }
  if (std::isinf(best_ll)) throw NumericalError("IMA(1,1) likelihood is unbounded");

  // Golden-section refinement within one grid step of the best point.
  double lo = std::max(-1.0, best_theta - 0.01);
  double hi = std::min(1.0, best_theta + 0.01);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = profile(diffs, x1).loglik;
  double f2 = profile(diffs, x2).loglik;
  for (int it = 0; it < 100 && hi - lo > 1e-10; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = profile(diffs, x2).loglik;
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = profile(diffs, x1).loglik;
    }
  }
  double theta = 0.5 * (lo + hi);
  // Keep the grid point if refinement did not improve on it (e.g. at the bound).
  if (profile(diffs, theta).loglik < best_ll) theta = best_theta;
  const Profile p = profile(diffs, theta);
  if (!std::isfinite(p.mu) || !std::isfinite(p.sigma2)) throw NumericalError("IMA(1,1) fit is not finite");
  return ImaParams::from_sigma(p.mu, std::sqrt(p.sigma2), theta);
}

ImaParams fit_ima_mle(const TechnologySeries& series) {
  if (series.size() < 4) throw DataError(series.name + ": IMA(1,1) fit needs at least 4 observations");
  const auto d = series.first_differences();
  return fit_ima_mle_diffs(d);
}

void Innovation::validate() const {
  if (family == Family::student && !(df > 2.0)) {
    throw std::invalid_argument("student innovations need df > 2 for a finite variance");
  }
}

double draw_innovation(Rng& rng, const Innovation& innovation) {
  if (innovation.family == Innovation::Family::normal) return rng.normal();
  return rng.student_t(innovation.df) * std::sqrt((innovation.df - 2.0) / innovation.df);
}

void simulate_rwd_into(std::span<double> out, double mu, double K, Rng& rng, const Innovation& innovation) {
  if (K < 0.0) throw std::invalid_argument("simulate_rwd: K must be >= 0");
  innovation.validate();
  if (out.empty()) return;
  out[0] = 0.0;
  for (std::size_t t = 1; t < out.size(); ++t) out[t] = out[t - 1] + mu + K * draw_innovation(rng, innovation);
}

TechnologySeries simulate_rwd(double mu, double K, std::size_t T, Rng& rng, const Innovation& innovation) {
  if (T < 2) throw std::invalid_argument("simulate_rwd: T must be >= 2");
  std::vector<double> y(T);
  simulate_rwd_into(y, mu, K, rng, innovation);
  auto s = TechnologySeries::from_log_costs("rwd", 0, std::move(y));
  return s;
}

void simulate_ima_into(std::span<double> out, const ImaParams& params, Rng& rng, const Innovation& innovation) {
  innovation.validate();
  if (out.empty()) return;
  double v_prev = params.sigma * draw_innovation(rng, innovation);
  out[0] = 0.0;
  for (std::size_t t = 1; t < out.size(); ++t) {
    const double v = params.sigma * draw_innovation(rng, innovation);
    out[t] = out[t - 1] + params.mu + v + params.theta * v_prev;
    v_prev = v;
  }
}

TechnologySeries simulate_ima(const ImaParams& params, std::size_t T, Rng& rng, const Innovation& innovation) {
  if (T < 2) throw std::invalid_argument("simulate_ima: T must be >= 2");
  std::vector<double> y(T);
  simulate_ima_into(y, params, rng, innovation);
  return TechnologySeries::from_log_costs("ima", 0, std::move(y));
}

TechnologySeries simulate_trend_stationary(double y0, double mu, double sd, std::size_t T, Rng& rng) {
  if (T < 2) throw std::invalid_argument("simulate_trend_stationary: T must be >= 2");
  if (sd < 0.0) throw std::invalid_argument("simulate_trend_stationary: sd must be >= 0");
  std::vector<double> y(T);
  for (std::size_t t = 0; t < T; ++t) y[t] = y0 + mu * static_cast<double>(t) + sd * rng.normal();
  return TechnologySeries::from_log_costs("trend", 0, std::move(y));
}

}  // namespace techfc
