#pragma once

#include <cstddef>
#include <span>

#include "techfc/dataset.hpp"
#include "techfc/rng.hpp"

namespace techfc {

// Rolling-window drift/volatility estimate anchored at a forecast origin.
// `origin_index` is 0-based; the window is log_costs[origin - m .. origin].
struct RwdEstimate {
  double mu_hat = 0.0;
  double K_hat = 0.0;
  std::size_t m = 0;
  std::size_t origin_index = 0;
};

// mu_hat = (y[origin] - y[origin - m]) / m, K_hat^2 with Bessel correction.
RwdEstimate estimate_rwd(std::span<const double> log_costs, std::size_t origin_index, std::size_t m);
inline RwdEstimate estimate_rwd(const TechnologySeries& s, std::size_t origin_index, std::size_t m) {
  return estimate_rwd(s.log_costs, origin_index, m);
}

// IMA(1,1): y_t - y_{t-1} = mu + v_t + theta v_{t-1}, v ~ N(0, sigma^2).
struct ImaParams {
  double mu = 0.0;
  double sigma = 0.0;
  double theta = 0.0;
  double K = 0.0;  // sd of first differences, sigma * sqrt(1 + theta^2)
  bool boundary = false;

  static ImaParams from_sigma(double mu, double sigma, double theta);
  // sigma chosen so that the increments have standard deviation K.
  static ImaParams from_volatility(double mu, double K, double theta);
};

// Conditional (v_0 = 0) Gaussian maximum likelihood with theta in [-1, 1].
// mu and sigma are profiled out; theta is located on a 0.01 grid and refined by
// golden-section search. Throws DataError for fewer than 4 observations and
// NumericalError if the likelihood is not finite.
ImaParams fit_ima_mle(const TechnologySeries& series);
ImaParams fit_ima_mle_diffs(std::span<const double> diffs);

// Profile log-likelihood of theta for the differenced series (up to a constant).
double ima_profile_loglik(std::span<const double> diffs, double theta);

struct Innovation {
  enum class Family { normal, student };
  Family family = Family::normal;
  double df = 0.0;

  static Innovation normal() { return {}; }
  static Innovation student(double df) { return {Family::student, df}; }
  // Throws if the family cannot be scaled to unit variance (student with df <= 2).
  void validate() const;
};

// Unit-variance innovation draw from the chosen family.
double draw_innovation(Rng& rng, const Innovation& innovation);

// y_0 = 0, increments IID with mean mu and sd K.
void simulate_rwd_into(std::span<double> out, double mu, double K, Rng& rng,
                       const Innovation& innovation = Innovation::normal());
TechnologySeries simulate_rwd(double mu, double K, std::size_t T, Rng& rng,
                              const Innovation& innovation = Innovation::normal());

// y_0 = 0, v_0 drawn from the stationary N(0, sigma^2).
void simulate_ima_into(std::span<double> out, const ImaParams& params, Rng& rng,
                       const Innovation& innovation = Innovation::normal());
TechnologySeries simulate_ima(const ImaParams& params, std::size_t T, Rng& rng,
                              const Innovation& innovation = Innovation::normal());

// y_t = y0 + mu t + e_t with transitory IID N(0, sd^2) noise.
TechnologySeries simulate_trend_stationary(double y0, double mu, double sd, std::size_t T, Rng& rng);

}  // namespace techfc
