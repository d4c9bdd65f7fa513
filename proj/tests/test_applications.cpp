#include <doctest.h>

#include <cmath>
#include <sstream>

#include "techfc/applications.hpp"
#include "techfc/error.hpp"

using namespace techfc;

namespace {

CrossingSpec solar_vs_flat(double K_a) {
  CrossingSpec s;
  s.a = {std::log(1.0), 0.0, K_a, 33};
  s.b = {std::log(3.0), -0.10, 0.15, 33};
  s.theta = 0.63;
  return s;
}

}  // namespace

TEST_CASE("crossing probability basics") {
  auto s = solar_vs_flat(0.1);
  s.a.current_log_cost = s.b.current_log_cost;
  s.a.mu = s.b.mu;
  for (double tau : {1.0, 7.0, 30.0}) CHECK(crossing_probability(s, tau) == doctest::Approx(0.5));

  auto z = solar_vs_flat(0.0);
  z.b.K = 0.0;
  CHECK(crossing_probability(z, 5) == 0.0);
  CHECK(crossing_probability(z, 20) == 1.0);

  auto bad = solar_vs_flat(0.1);
  bad.b.m = 20;
  CHECK_THROWS_AS(crossing_probability(bad, 3), std::invalid_argument);
  CHECK_THROWS_AS(crossing_probability(solar_vs_flat(0.1), 0.5), std::invalid_argument);
}

TEST_CASE("crossing horizon does not depend on the noise level") {
  for (double k : {0.05, 0.15, 0.4}) {
    const auto root = even_odds_horizon(solar_vs_flat(k));
    REQUIRE(root.has_value());
    CHECK(*root == doctest::Approx(std::log(3.0) / 0.10).epsilon(1e-9));
  }
}

TEST_CASE("crossing probability is shift invariant") {
  auto s = solar_vs_flat(0.2);
  const double p = crossing_probability(s, 8);
  s.a.current_log_cost += 4.0;
  s.b.current_log_cost += 4.0;
  CHECK(crossing_probability(s, 8) == doctest::Approx(p).epsilon(1e-12));
}

TEST_CASE("forecast a technology from its full history") {
  std::vector<double> y;
  for (int t = 0; t < 34; ++t) y.push_back(-0.1 * t + (t % 2 == 0 ? 0.1 : -0.1));
  const auto s = TechnologySeries::from_log_costs("pv", 1980, y);
  const auto f = forecast_technology(s, 17, 0.63);
  REQUIRE(f.size() == 17);
  CHECK(f[0].degrees_of_freedom() == 32);
  CHECK(f[16].horizon() == 17);
  CHECK_THROWS_AS(forecast_technology(s, 5, 0.0, 40), DataError);

  std::ostringstream out;
  write_forecast_csv(out, f);
  CHECK(out.str().rfind("tau,q05,q16,q50,q84,q95\n", 0) == 0);

  const auto bands = sigma_bands(f[4]);
  REQUIRE(bands.size() == 3);
  CHECK(bands[0].lower_cost > bands[2].lower_cost);
  CHECK(bands[0].upper_cost < bands[2].upper_cost);
}

TEST_CASE("degenerate series collapse the bands") {
  const auto s = TechnologySeries::from_log_costs("lin", 2000, {0, -0.1, -0.2, -0.3, -0.4, -0.5});
  const auto f = forecast_technology(s, 3, 0.3);
  const auto r = forecast_bands(f[2]);
  CHECK(r.q05 == doctest::Approx(r.q95));
  CHECK(r.q50 == doctest::Approx(std::exp(-0.8)));
}

TEST_CASE("deterministic trend crossing") {
  CHECK(deterministic_trend_crossing(0.0022, 1.425, 0.2, 1.026) == doctest::Approx(13.728).epsilon(1e-4));
  CHECK(deterministic_trend_crossing(0.1, 1.3, 0.1, 1.1) == 0.0);
  CHECK(deterministic_trend_crossing(0.01, 1.2, 0.5, 1.0) == doctest::Approx(std::log(50.0) / std::log(1.2)));
  CHECK_THROWS_AS(deterministic_trend_crossing(0.01, 1.02, 0.5, 1.02), NoCrossingError);
  CHECK_THROWS_AS(deterministic_trend_crossing(0.01, 1.0, 0.5, 1.02), NoCrossingError);
}
