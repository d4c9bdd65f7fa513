#include "techfc/applications.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "techfc/error.hpp"
#include "techfc/models.hpp"
#include "techfc/stats.hpp"

namespace techfc {

namespace {

void check_state(const TechnologyState& t, const char* which) {
  if (!std::isfinite(t.current_log_cost) || !std::isfinite(t.mu) || !std::isfinite(t.K)) {
    throw std::invalid_argument(std::string(which) + ": non-finite parameter");
  }
  if (t.K < 0.0) throw std::invalid_argument(std::string(which) + ": K must be >= 0");
  if (t.m <= 3) throw std::invalid_argument(std::string(which) + ": m must exceed 3");
}

double mean_z(const CrossingSpec& spec, double tau) {
  return (spec.a.current_log_cost - spec.b.current_log_cost) + tau * (spec.a.mu - spec.b.mu);
}

}  // namespace

void CrossingSpec::validate() const {
  check_state(a, "technology a");
  check_state(b, "technology b");
  if (a.m != b.m) throw std::invalid_argument("both technologies must share the estimation window m");
  if (!(std::abs(theta) < 1.0)) throw std::invalid_argument("theta must lie in (-1, 1)");
}

double crossing_probability(const CrossingSpec& spec, double tau) {
  spec.validate();
  if (!(tau >= 1.0)) throw std::invalid_argument("tau must be >= 1");
  const double mu_z = mean_z(spec, tau);
  const auto vf = variance_factors(tau, spec.a.m, spec.theta);
  const double var_z = vf.A_star / (1.0 + spec.theta * spec.theta) * (spec.a.K * spec.a.K + spec.b.K * spec.b.K);
  if (var_z <= 0.0) {
    if (mu_z > 0.0) return 1.0;
    if (mu_z < 0.0) return 0.0;
    return 0.5;
  }
  return 0.5 * (1.0 + std::erf(mu_z / (std::sqrt(2.0) * std::sqrt(var_z))));
}

std::optional<double> even_odds_horizon(const CrossingSpec& spec, double lo, double hi) {
  spec.validate();
  double flo = crossing_probability(spec, lo) - 0.5;
  const double fhi = crossing_probability(spec, hi) - 0.5;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) return std::nullopt;
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = crossing_probability(spec, mid) - 0.5;
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<DistributionalForecast> forecast_technology(const TechnologySeries& series, int tau_max, double theta,
                                                        std::optional<std::size_t> m) {
  if (tau_max < 1) throw std::invalid_argument("tau_max must be >= 1");
  if (series.size() < 2) throw DataError(series.name + ": need at least two observations");
  const std::size_t window = m.value_or(series.size() - 1);
  if (window + 1 > series.size()) {
    throw DataError(series.name + ": series of length " + std::to_string(series.size()) +
                    " is shorter than m + 1 = " + std::to_string(window + 1));
  }
  const std::size_t origin = series.size() - 1;
  const auto est = estimate_rwd(series.log_costs, origin, window);
  std::vector<DistributionalForecast> out;
  out.reserve(static_cast<std::size_t>(tau_max));
  for (int tau = 1; tau <= tau_max; ++tau) {
    out.push_back(distributional_forecast(est, series.log_costs[origin], tau, theta));
  }
  return out;
}

BandRow forecast_bands(const DistributionalForecast& f) {
  return {static_cast<int>(std::lround(f.horizon())), f.quantile_cost(0.05), f.quantile_cost(0.16),
          f.quantile_cost(0.50), f.quantile_cost(0.84), f.quantile_cost(0.95)};
}

std::vector<SigmaBand> sigma_bands(const DistributionalForecast& f) {
  std::vector<SigmaBand> out;
  for (double k : {1.0, 1.5, 2.0}) {
    // Student quantile at the normal coverage of k sd.
    const double p = normal_cdf(k);
    out.push_back({k, f.quantile_cost(1.0 - p), f.quantile_cost(p)});
  }
  return out;
}

void write_forecast_csv(std::ostream& out, std::span<const DistributionalForecast> forecasts) {
  out << "tau,q05,q16,q50,q84,q95\n";
  char buf[256];
  for (const auto& f : forecasts) {
    const auto r = forecast_bands(f);
    std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.10g,%.10g,%.10g\n", r.tau, r.q05, r.q16, r.q50, r.q84, r.q95);
    out << buf;
  }
}

double deterministic_trend_crossing(double f, double g_f, double s, double g_s) {
  if (!(f > 0.0) || !(s > 0.0)) throw std::invalid_argument("shares must be positive");
  if (!(g_s > 0.0) || !(g_f > 0.0)) throw std::invalid_argument("growth factors must be positive");
  if (s < f) throw std::invalid_argument("target share must not be below the starting share");
  if (s == f) return 0.0;
  if (g_f <= g_s) throw NoCrossingError("no crossing: growth factor of the follower does not exceed the target's");
  return std::log(s / f) / std::log(g_f / g_s);
}

}  // namespace techfc
