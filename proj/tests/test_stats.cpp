#include <doctest.h>

#include <cmath>
#include <vector>

#include "techfc/error.hpp"
#include "techfc/stats.hpp"

using namespace techfc;

// Reference values below were computed with scipy.stats / scipy.special.

TEST_CASE("student t cdf") {
  struct Row { double x, df, p; };
  const Row rows[] = {{-2.5, 3, 0.04385332350403277},   {0.3, 4, 0.6104392858612702},
                      {1.96, 32, 0.9706235779884177},   {-0.7, 1.5, 0.2882191204413434},
                      {4.0, 100, 0.9999392381778497},   {-12.0, 5, 3.544746258580764e-05}};
  for (const auto& r : rows) CHECK(student_t_cdf(r.x, r.df) == doctest::Approx(r.p).epsilon(1e-10));
  CHECK(student_t_cdf(0.0, 7.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(student_t_cdf(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("student t quantile") {
  CHECK(student_t_quantile(0.05, 4) == doctest::Approx(-2.13184678632665).epsilon(1e-8));
  CHECK(student_t_quantile(0.975, 32) == doctest::Approx(2.036933343460101).epsilon(1e-8));
  CHECK(student_t_quantile(0.16, 39) == doctest::Approx(-1.007299396433104).epsilon(1e-8));
  CHECK(student_t_quantile(0.999, 3) == doctest::Approx(10.214531852405331).epsilon(1e-8));
  CHECK(std::abs(student_t_quantile(0.5, 7)) < 1e-8);
  for (double p : {0.001, 0.2, 0.7, 0.99}) {
    CHECK(student_t_cdf(student_t_quantile(p, 5.5), 5.5) == doctest::Approx(p).epsilon(1e-9));
  }
}

TEST_CASE("incomplete beta and normal cdf") {
  CHECK(incomplete_beta(0.5, 0.5, 0.3) == doctest::Approx(0.36901011956554536).epsilon(1e-12));
  CHECK(incomplete_beta(2, 3, 0.4) == doctest::Approx(0.5248).epsilon(1e-12));
  CHECK(incomplete_beta(10, 0.5, 0.95) == doctest::Approx(0.317151575465545).epsilon(1e-11));
  CHECK(incomplete_beta(50, 60, 0.45) == doctest::Approx(0.46423529143060444).epsilon(1e-10));
  CHECK(incomplete_beta(2, 3, 0.0) == 0.0);
  CHECK(incomplete_beta(2, 3, 1.0) == 1.0);
  CHECK(normal_cdf(-3.1) == doctest::Approx(0.0009676032132183563).epsilon(1e-13));
  CHECK(normal_cdf(1.2) == doctest::Approx(0.8849303297782918).epsilon(1e-14));
}

TEST_CASE("mean and variance") {
  const std::vector<double> xs{1, 2, 3, 4};
  CHECK(mean(xs) == doctest::Approx(2.5));
  CHECK(sample_variance(xs) == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("ols against a reference fit") {
  const std::vector<double> x{-0.05, -0.1, -0.2, -0.08, -0.3, -0.15};
  const std::vector<double> y{0.04, 0.1, 0.17, 0.07, 0.25, 0.13};
  const auto f = ols_fit(x, y);
  CHECK(f.intercept == doctest::Approx(0.00667716535433073).epsilon(1e-10));
  CHECK(f.slope == doctest::Approx(-0.8181102362204724).epsilon(1e-10));
  CHECK(f.r_squared == doctest::Approx(0.9930099713003165).epsilon(1e-10));
  CHECK(f.se_intercept == doctest::Approx(0.005800618311382423).epsilon(1e-9));
  CHECK(f.se_slope == doctest::Approx(0.034319780822358016).epsilon(1e-9));
  CHECK(f.n == 6);

  const std::vector<double> flat{1, 1, 1};
  const std::vector<double> any{1, 2, 3};
  CHECK_THROWS_AS(ols_fit(flat, any), SingularDesignError);
}

TEST_CASE("t tests") {
  const std::vector<double> d{-0.1, 0.05, -0.2, -0.03, -0.12};
  CHECK(one_sided_t_test(d) == doctest::Approx(0.06580854255691267).epsilon(1e-10));
  CHECK(two_sided_t_test(d) == doctest::Approx(0.13161708511382533).epsilon(1e-10));
  CHECK(one_sided_t_test(std::vector<double>{-0.5, -0.5, -0.5}) == 0.0);
  CHECK(one_sided_t_test(std::vector<double>{0.5, 0.5}) == 1.0);
  CHECK(one_sided_t_test(std::vector<double>{0.0, 0.0}) == 0.5);
}

TEST_CASE("ecdf conventions") {
  const Ecdf e(std::vector<double>{3, 1, 2, 2});
  CHECK(e(2.0) == doctest::Approx(0.75));
  CHECK(e.below(2.0) == doctest::Approx(0.25));
  CHECK(e.upper_tail(2.0) == doctest::Approx(0.25));
  CHECK(e.lower_tail(-1.5) == doctest::Approx(0.25));
  CHECK(e(0.0) == 0.0);
  CHECK(e(10.0) == 1.0);
}

TEST_CASE("kolmogorov smirnov") {
  CHECK(kolmogorov_sf(0.5) == doctest::Approx(0.9639452436648751).epsilon(1e-9));
  CHECK(kolmogorov_sf(1.0) == doctest::Approx(0.26999967167735456).epsilon(1e-9));
  CHECK(kolmogorov_sf(1.36) == doctest::Approx(0.049485876755377876).epsilon(1e-9));

  const std::vector<double> s{-1.2, 0.4, 0.05, 2.1, -0.3, 0.9, -0.8, 1.5, 0.2, -2.0};
  const auto r = ks_one_sample(s, [](double x) { return normal_cdf(x); });
  CHECK(r.statistic == doctest::Approx(0.13319279873114187).epsilon(1e-12));
  const double lambda = (std::sqrt(10.0) + 0.12 + 0.11 / std::sqrt(10.0)) * r.statistic;
  CHECK(r.p_value == doctest::Approx(kolmogorov_sf(lambda)));

  const std::vector<double> b{0.1, 0.3, -0.5, 1.1, 2.4, 0.7, 0.0};
  CHECK(ks_two_sample(s, b).statistic == doctest::Approx(0.3));
  CHECK(ks_two_sample(s, s).statistic == 0.0);
}
