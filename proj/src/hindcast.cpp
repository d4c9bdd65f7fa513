#include "techfc/hindcast.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "techfc/error.hpp"
#include "techfc/forecasting.hpp"
#include "techfc/models.hpp"

namespace techfc {

namespace {

// Windows whose sample volatility is below this are treated as K_hat = 0
// (repeated list prices produce exactly flat windows up to rounding).
constexpr double kZeroVolatility = 1e-12;

bool is_flat(double K_hat) { return K_hat <= kZeroVolatility; }

}  // namespace

int HindcastOptions::effective_tau_max(std::size_t T) const {
  const int longest = T > m + 1 ? static_cast<int>(T - m - 1) : 0;
  return tau_max <= 0 ? longest : std::min(tau_max, longest);
}

std::size_t feasible_forecast_count(std::size_t T, std::size_t m, int tau_max) {
  std::size_t total = 0;
  for (std::size_t t0 = m; t0 + 1 < T; ++t0) {
    const auto horizons = T - 1 - t0;
    total += tau_max <= 0 ? horizons : std::min<std::size_t>(horizons, static_cast<std::size_t>(tau_max));
  }
  return total;
}

SeriesHindcast hindcast_series(const TechnologySeries& series, const HindcastOptions& options,
                               std::size_t series_index) {
  if (options.m < 4) throw std::invalid_argument("hindcast: window m must be >= 4");
  SeriesHindcast out;
  const std::size_t T = series.size();
  const std::size_t m = options.m;
  if (T < m + 2) {
    out.note = series.name + ": " + std::to_string(T) + " observations, need at least m + 2 = " +
               std::to_string(m + 2);
    return out;
  }
  const auto& y = series.log_costs;
  out.records.reserve(feasible_forecast_count(T, m, options.tau_max));
  for (std::size_t t0 = m; t0 + 1 < T; ++t0) {
    const RwdEstimate est = estimate_rwd(y, t0, m);
    if (is_flat(est.K_hat)) {
      if (!options.skip_zero_volatility) {
        throw DataError(series.name + ": zero volatility window ending at " + std::to_string(series.years[t0]));
      }
      ++out.skipped_windows;
      continue;
    }
    const int horizons = static_cast<int>(T - 1 - t0);
    const int cap = options.tau_max <= 0 ? horizons : std::min(horizons, options.tau_max);
    for (int tau = 1; tau <= cap; ++tau) {
      HindcastRecord r;
      r.series = series_index;
      r.origin_index = t0;
      r.tau = tau;
      r.m = m;
      r.raw_error = y[t0 + static_cast<std::size_t>(tau)] - point_forecast(est, y[t0], tau);
      r.norm_error = r.raw_error / est.K_hat;
      r.mu_hat = est.mu_hat;
      r.K_hat = est.K_hat;
      out.records.push_back(r);
    }
  }
  return out;
}

namespace {

CorpusHindcast merge(std::vector<SeriesHindcast>& parts) {
  CorpusHindcast out;
  std::size_t total = 0;
  for (const auto& p : parts) total += p.records.size();
  out.records.reserve(total);
  for (auto& p : parts) {
    out.records.insert(out.records.end(), p.records.begin(), p.records.end());
    out.skipped_windows += p.skipped_windows;
    if (!p.note.empty()) out.notes.push_back(std::move(p.note));
  }
  return out;
}

}  // namespace

CorpusHindcast hindcast_corpus_serial(std::span<const TechnologySeries> corpus, const HindcastOptions& options) {
  std::vector<SeriesHindcast> parts(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) parts[i] = hindcast_series(corpus[i], options, i);
  return merge(parts);
}

CorpusHindcast hindcast_corpus(std::span<const TechnologySeries> corpus, const HindcastOptions& options) {
  if (options.m < 4) throw std::invalid_argument("hindcast: window m must be >= 4");
  std::vector<SeriesHindcast> parts(corpus.size());
  const auto n = static_cast<std::ptrdiff_t>(corpus.size());
  bool failed = false;
  std::string failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      parts[static_cast<std::size_t>(i)] =
          hindcast_series(corpus[static_cast<std::size_t>(i)], options, static_cast<std::size_t>(i));
    } catch (const std::exception& e) {
#pragma omp critical(techfc_hindcast_error)
      {
        if (!failed) {
          failed = true;
          failure = e.what();
        }
      }
    }
  }
  if (failed) throw DataError(failure);
  return merge(parts);
}

void write_hindcast_csv(std::ostream& out, std::span<const TechnologySeries> corpus,
                        std::span<const HindcastRecord> records) {
  out << "technology,t0_year,tau,raw_error,norm_error,mu_hat,K_hat\n";
  std::ostringstream row;
  row << std::setprecision(12);
  for (const auto& r : records) {
    const auto& s = corpus[r.series];
    row.str("");
    row << s.name << ',' << s.years[r.origin_index] << ',' << r.tau << ',' << r.raw_error << ',' << r.norm_error
        << ',' << r.mu_hat << ',' << r.K_hat << '\n';
    out << row.str();
  }
}

void HorizonSums::resize(std::size_t tau_cap) {
  sum_sq.assign(tau_cap + 1, 0.0);
  count.assign(tau_cap + 1, 0);
}

void HorizonSums::add(int tau, double norm_error) {
  const auto k = static_cast<std::size_t>(tau);
  if (k >= sum_sq.size()) {
    sum_sq.resize(k + 1, 0.0);
    count.resize(k + 1, 0);
  }
  sum_sq[k] += norm_error * norm_error;
  ++count[k];
}

void accumulate_squared_errors(std::span<const double> y, std::size_t m, int tau_max, HorizonSums& sums,
                               std::size_t& skipped_windows) {
  const std::size_t T = y.size();
  if (T < m + 2) return;
  const auto md = static_cast<double>(m);
  for (std::size_t t0 = m; t0 + 1 < T; ++t0) {
    const double mu_hat = (y[t0] - y[t0 - m]) / md;
    double ss = 0.0;
    for (std::size_t i = t0 - m; i < t0; ++i) {
      const double r = (y[i + 1] - y[i]) - mu_hat;
      ss += r * r;
    }
    const double K_hat = std::sqrt(ss / (md - 1.0));
    if (is_flat(K_hat)) {
      ++skipped_windows;
      continue;
    }
    const int horizons = static_cast<int>(T - 1 - t0);
    const int cap = tau_max <= 0 ? horizons : std::min(horizons, tau_max);
    for (int tau = 1; tau <= cap; ++tau) {
      const double e = (y[t0 + static_cast<std::size_t>(tau)] - (y[t0] + mu_hat * tau)) / K_hat;
      sums.add(tau, e);
    }
  }
}

void append_rescaled_errors(std::span<const double> y, std::size_t m, int tau_max, double theta,
                            std::vector<double>& out) {
  const std::size_t T = y.size();
  if (T < m + 2) return;
  const auto md = static_cast<double>(m);
  const int longest = static_cast<int>(T - m - 1);
  const int cap_all = tau_max <= 0 ? longest : std::min(longest, tau_max);
  std::vector<double> divisor(static_cast<std::size_t>(cap_all) + 1, 1.0);
  for (int tau = 1; tau <= cap_all; ++tau) {
    divisor[static_cast<std::size_t>(tau)] = variance_factors(tau, m, theta).rescale_divisor();
  }
  for (std::size_t t0 = m; t0 + 1 < T; ++t0) {
    const double mu_hat = (y[t0] - y[t0 - m]) / md;
    double ss = 0.0;
    for (std::size_t i = t0 - m; i < t0; ++i) {
      const double r = (y[i + 1] - y[i]) - mu_hat;
      ss += r * r;
    }
    const double K_hat = std::sqrt(ss / (md - 1.0));
    if (is_flat(K_hat)) continue;
    const int horizons = static_cast<int>(T - 1 - t0);
    const int cap = std::min(horizons, cap_all);
    for (int tau = 1; tau <= cap; ++tau) {
      const double e = (y[t0 + static_cast<std::size_t>(tau)] - (y[t0] + mu_hat * tau)) / K_hat;
      out.push_back(e / divisor[static_cast<std::size_t>(tau)]);
    }
  }
}

const ErrorGrowthPoint* ErrorGrowthCurve::at(int tau) const {
  for (const auto& p : points) {
    if (p.tau == tau) return &p;
  }
  return nullptr;
}

ErrorGrowthCurve error_growth_from_sums(std::span<const HorizonSums> per_series, int tau_max, Weighting weighting) {
  std::size_t cap = 0;
  for (const auto& s : per_series) cap = std::max(cap, s.count.size());
  if (tau_max > 0) cap = std::min(cap, static_cast<std::size_t>(tau_max) + 1);
  ErrorGrowthCurve curve;
  curve.weighting = weighting;
  for (std::size_t tau = 1; tau < cap; ++tau) {
    ErrorGrowthPoint p;
    p.tau = static_cast<int>(tau);
    double pooled_sum = 0.0;
    double tech_mean_sum = 0.0;
    for (const auto& s : per_series) {
      if (tau >= s.count.size() || s.count[tau] == 0) continue;
      p.n_forecasts += s.count[tau];
      ++p.n_technologies;
      pooled_sum += s.sum_sq[tau];
      tech_mean_sum += s.sum_sq[tau] / static_cast<double>(s.count[tau]);
    }
    if (p.n_forecasts == 0) continue;
    p.xi = weighting == Weighting::pooled ? pooled_sum / static_cast<double>(p.n_forecasts)
                                          : tech_mean_sum / static_cast<double>(p.n_technologies);
    curve.points.push_back(p);
  }
  return curve;
}

ErrorGrowthCurve error_growth(std::span<const HindcastRecord> records, int tau_max, Weighting weighting) {
  if (records.empty()) throw std::invalid_argument("error_growth: no records");
  std::map<std::size_t, HorizonSums> by_series;
  for (const auto& r : records) {
    if (tau_max > 0 && r.tau > tau_max) continue;
    by_series[r.series].add(r.tau, r.norm_error);
  }
  std::vector<HorizonSums> sums;
  sums.reserve(by_series.size());
  for (auto& [idx, s] : by_series) sums.push_back(std::move(s));
  return error_growth_from_sums(sums, tau_max, weighting);
}

std::vector<double> rescaled_errors(std::span<const HindcastRecord> records, double theta) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    out.push_back(rescale_error(r.norm_error, variance_factors(r.tau, r.m, theta)));
  }
  return out;
}

RescaledDistribution pooled_rescaled_distribution(std::span<const HindcastRecord> records, double theta,
                                                  HorizonSplit split) {
  if (!records.empty()) {
    const auto m = records.front().m;
    for (const auto& r : records) {
      if (r.m != m) throw std::invalid_argument("pooled_rescaled_distribution: records mix window sizes");
    }
  }
  RescaledDistribution d;
  auto eps = rescaled_errors(records, theta);
  if (split == HorizonSplit::by_horizon) {
    std::map<int, std::vector<double>> groups;
    for (std::size_t i = 0; i < records.size(); ++i) groups[records[i].tau].push_back(eps[i]);
    for (auto& [tau, v] : groups) d.by_horizon.emplace(tau, Ecdf(std::move(v)));
  }
  d.pooled = Ecdf(std::move(eps));
  return d;
}

double bias_test(std::span<const HindcastRecord> records, int tau) {
  std::vector<double> errors;
  for (const auto& r : records) {
    if (r.tau == tau) errors.push_back(r.norm_error);
  }
  if (errors.size() < 2) throw std::invalid_argument("bias_test: need at least 2 records at this horizon");
  return two_sided_t_test(errors);
}

}  // namespace techfc
