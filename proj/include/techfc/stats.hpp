#pragma once

// Statistical kernel: distribution functions, least squares, t-tests,
// empirical CDFs and Kolmogorov-Smirnov statistics.

#include <cstddef>
#include <span>
#include <vector>

namespace techfc {

double mean(std::span<const double> xs);
// Unbiased (n - 1) sample variance. Requires n >= 2.
double sample_variance(std::span<const double> xs);

// Standard normal CDF, accurate to ~1e-16 absolute.
double normal_cdf(double x);

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

// Student t CDF for df > 0. Throws std::invalid_argument otherwise.
double student_t_cdf(double x, double df);
// Inverse of student_t_cdf by bisection; |cdf(result) - p| <= 1e-9.
double student_t_quantile(double p, double df);

struct OlsFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
  double se_intercept = 0.0;
  double se_slope = 0.0;
  std::size_t n = 0;
};

// Simple linear regression y = intercept + slope * x with classical standard
// errors. Throws SingularDesignError when x is constant.
OlsFit ols_fit(std::span<const double> x, std::span<const double> y);

// p-value of H0: mean = 0 against H1: mean < 0.
// Zero spread: all negative -> 0, all positive -> 1, all zero -> 0.5.
double one_sided_t_test(std::span<const double> diffs);
// Two-sided p-value of H0: mean = 0. Zero spread: all zero -> 1, otherwise 0.
double two_sided_t_test(std::span<const double> xs);

// Empirical distribution of a sample. Sorted copy; queries are O(log n).
class Ecdf {
 public:
  Ecdf() = default;
  explicit Ecdf(std::vector<double> sample);

  std::size_t size() const { return sorted_.size(); }
  bool empty() const { return sorted_.empty(); }
  const std::vector<double>& sorted() const { return sorted_; }

  // Share of observations <= x.
  double operator()(double x) const;
  // Share of observations strictly below x.
  double below(double x) const;
  // Share of observations strictly above x (positive tail).
  double upper_tail(double x) const;
  // Share of observations strictly below -x (negative tail, plotted at -x).
  double lower_tail(double x) const { return below(-x); }

 private:
  std::vector<double> sorted_;
};

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Asymptotic Kolmogorov survival function Q(lambda).
double kolmogorov_sf(double lambda);

template <class Cdf>
KsResult ks_one_sample(std::span<const double> sample, Cdf&& cdf);
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// Implementation detail shared by the template below.
KsResult ks_one_sample_sorted(const std::vector<double>& sorted,
                              const std::vector<double>& cdf_values);

template <class Cdf>
KsResult ks_one_sample(std::span<const double> sample, Cdf&& cdf) {
  Ecdf e(std::vector<double>(sample.begin(), sample.end()));
  std::vector<double> values;
  values.reserve(e.size());
  for (double x : e.sorted()) values.push_back(cdf(x));
  return ks_one_sample_sorted(e.sorted(), values);
}

}  // namespace techfc
