#include "techfc/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "techfc/forecasting.hpp"
#include "techfc/models.hpp"
#include "techfc/stats.hpp"

namespace techfc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::vector<TemplateEntry> template_from_summaries(std::span<const SeriesSummary> summaries) {
  std::vector<TemplateEntry> out;
  out.reserve(summaries.size());
  for (const auto& s : summaries) out.push_back({s.name, s.T, s.mu_full, s.K_full});
  return out;
}

void SurrogateConfig::validate() const {
  if (replications < 1) throw std::invalid_argument("surrogate replications must be >= 1");
  if (corpus_template.empty()) throw std::invalid_argument("surrogate corpus template is empty");
  if (m < 4) throw std::invalid_argument("surrogate window m must be >= 4");
  if (!(std::fabs(theta) < 1.0)) throw std::invalid_argument("surrogate theta must lie in (-1, 1)");
  innovation.validate();
  for (const auto& e : corpus_template) {
    if (e.T < 2) throw std::invalid_argument("template entry " + e.name + " is shorter than 2");
    if (e.K < 0.0) throw std::invalid_argument("template entry " + e.name + " has negative K");
  }
}

Rng replication_rng(const SurrogateConfig& config, std::size_t replication) {
  return Rng(config.seed).split(replication);
}

std::vector<TechnologySeries> surrogate_corpus(const SurrogateConfig& config, Rng& rng) {
  config.validate();
  std::vector<TechnologySeries> corpus;
  corpus.reserve(config.corpus_template.size());
  for (const auto& e : config.corpus_template) {
    auto s = simulate_ima(ImaParams::from_volatility(e.mu, e.K, config.theta), e.T, rng, config.innovation);
    s.name = e.name;
    corpus.push_back(std::move(s));
  }
  return corpus;
}

namespace {

// Xi(tau) for one replication, written into row[0 .. tau_max).
void replicate_xi(const SurrogateConfig& config, std::size_t replication, std::span<double> row) {
  Rng rng = replication_rng(config, replication);
  std::vector<HorizonSums> sums(config.corpus_template.size());
  std::vector<double> buffer;
  std::size_t skipped = 0;
  for (std::size_t j = 0; j < config.corpus_template.size(); ++j) {
    const auto& e = config.corpus_template[j];
    buffer.resize(e.T);
    simulate_ima_into(buffer, ImaParams::from_volatility(e.mu, e.K, config.theta), rng, config.innovation);
    sums[j].resize(static_cast<std::size_t>(config.tau_max));
    accumulate_squared_errors(buffer, config.m, config.tau_max, sums[j], skipped);
  }
  const auto curve = error_growth_from_sums(sums, config.tau_max, config.weighting);
  std::fill(row.begin(), row.end(), kNaN);
  for (const auto& p : curve.points) row[static_cast<std::size_t>(p.tau - 1)] = p.xi;
}

void check_xi_config(const SurrogateConfig& config) {
  config.validate();
  if (config.tau_max <= 0) throw std::invalid_argument("simulated Xi needs a finite tau_max");
}

}  // namespace

std::vector<double> XiMatrix::mean_curve() const {
  std::vector<double> out(static_cast<std::size_t>(tau_max), kNaN);
  for (int tau = 1; tau <= tau_max; ++tau) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t r = 0; r < replications; ++r) {
      const double v = at(r, tau);
      if (std::isnan(v)) continue;
      sum += v;
      ++n;
    }
    if (n > 0) out[static_cast<std::size_t>(tau - 1)] = sum / static_cast<double>(n);
  }
  return out;
}

XiMatrix simulate_xi_matrix_serial(const SurrogateConfig& config) {
  check_xi_config(config);
  XiMatrix xm;
  xm.replications = config.replications;
  xm.tau_max = config.tau_max;
  const auto width = static_cast<std::size_t>(config.tau_max);
  xm.values.assign(config.replications * width, kNaN);
  for (std::size_t r = 0; r < config.replications; ++r) {
    replicate_xi(config, r, std::span<double>(xm.values).subspan(r * width, width));
  }
  return xm;
}

XiMatrix simulate_xi_matrix(const SurrogateConfig& config) {
  check_xi_config(config);
  XiMatrix xm;
  xm.replications = config.replications;
  xm.tau_max = config.tau_max;
  const auto width = static_cast<std::size_t>(config.tau_max);
  xm.values.assign(config.replications * width, kNaN);
  const auto n = static_cast<std::ptrdiff_t>(config.replications);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    const auto ru = static_cast<std::size_t>(r);
    replicate_xi(config, ru, std::span<double>(xm.values).subspan(ru * width, width));
  }
  return xm;
}

double sample_quantile(std::vector<double> values, double q) {
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

NullEnsemble make_null_ensemble(std::string statistic, std::vector<double> values, double observed) {
  NullEnsemble e;
  e.statistic = std::move(statistic);
  values.erase(std::remove_if(values.begin(), values.end(), [](double v) { return std::isnan(v); }),
               values.end());
  e.values = std::move(values);
  e.observed = observed;
  if (e.values.empty()) {
    e.q025 = e.q50 = e.q975 = e.mean = kNaN;
    e.p_value = e.p_value_raw = kNaN;
    return e;
  }
  e.q025 = sample_quantile(e.values, 0.025);
  e.q50 = sample_quantile(e.values, 0.5);
  e.q975 = sample_quantile(e.values, 0.975);
  e.mean = mean(e.values);
  e.std_error = e.values.size() > 1 ? std::sqrt(sample_variance(e.values) / static_cast<double>(e.values.size()))
                                    : 0.0;
  if (std::isnan(observed)) {
    e.p_value = e.p_value_raw = kNaN;
  } else {
    const auto exceed = static_cast<double>(
        std::count_if(e.values.begin(), e.values.end(), [&](double v) { return v >= observed; }));
    const auto n = static_cast<double>(e.values.size());
    e.p_value = (exceed + 1.0) / (n + 1.0);
    e.p_value_raw = exceed / n;
  }
  return e;
}

XiBand null_xi_band(const XiMatrix& simulated, const ErrorGrowthCurve& observed) {
  XiBand band;
  for (int tau = 1; tau <= simulated.tau_max; ++tau) {
    std::vector<double> column;
    column.reserve(simulated.replications);
    for (std::size_t r = 0; r < simulated.replications; ++r) column.push_back(simulated.at(r, tau));
    const auto* obs = observed.at(tau);
    band.taus.push_back(tau);
    band.per_tau.push_back(
        make_null_ensemble("xi(" + std::to_string(tau) + ")", std::move(column), obs ? obs->xi : kNaN));
  }
  return band;
}

XiBand null_xi_band(const SurrogateConfig& config, const ErrorGrowthCurve& observed) {
  return null_xi_band(simulate_xi_matrix(config), observed);
}

StudentGrid::StudentGrid(double df, std::size_t points, double lo, double hi) {
  if (points < 2) throw std::invalid_argument("StudentGrid needs at least 2 points");
  x_.resize(points);
  cdf_.resize(points);
  for (std::size_t k = 0; k < points; ++k) {
    x_[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    cdf_[k] = student_t_cdf(x_[k], df);
  }
}

DeviationMeasures StudentGrid::deviation(std::vector<double> sample) const {
  if (sample.empty()) throw std::invalid_argument("deviation of an empty sample");
  std::sort(sample.begin(), sample.end());
  DeviationMeasures d;
  const auto n = static_cast<double>(sample.size());
  std::size_t below = 0;
  for (std::size_t k = 0; k < x_.size(); ++k) {
    while (below < sample.size() && sample[below] < x_[k]) ++below;
    const double delta = static_cast<double>(below) / n - cdf_[k];
    d.abs_sum += std::fabs(delta);
    d.sq_sum += delta * delta;
    d.max_abs = std::max(d.max_abs, std::fabs(delta));
  }
  return d;
}

namespace {

DeviationMeasures replicate_deviation(const SurrogateConfig& config, const StudentGrid& grid,
                                      std::size_t replication) {
  Rng rng = replication_rng(config, replication);
  std::vector<double> buffer;
  std::vector<double> eps;
  for (const auto& e : config.corpus_template) {
    buffer.resize(e.T);
    simulate_ima_into(buffer, ImaParams::from_volatility(e.mu, e.K, config.theta), rng, config.innovation);
    append_rescaled_errors(buffer, config.m, config.tau_max, config.theta, eps);
  }
  if (eps.empty()) throw std::invalid_argument("surrogate corpus produced no forecasts");
  return grid.deviation(std::move(eps));
}

DeviationTest deviation_test_impl(std::span<const HindcastRecord> records, double theta,
                                  const SurrogateConfig& base, bool parallel) {
  if (records.empty()) throw std::invalid_argument("distribution_deviation_test: no records");
  SurrogateConfig config = base;
  config.theta = theta;
  config.m = records.front().m;
  config.validate();
  const StudentGrid grid(static_cast<double>(config.m) - 1.0);

  std::vector<HindcastRecord> kept;
  for (const auto& r : records) {
    if (config.tau_max <= 0 || r.tau <= config.tau_max) kept.push_back(r);
  }
  DeviationTest out;
  out.observed = grid.deviation(rescaled_errors(kept, theta));

  std::vector<DeviationMeasures> sims(config.replications);
  const auto n = static_cast<std::ptrdiff_t>(config.replications);
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t r = 0; r < n; ++r) {
      sims[static_cast<std::size_t>(r)] = replicate_deviation(config, grid, static_cast<std::size_t>(r));
    }
  } else {
    for (std::ptrdiff_t r = 0; r < n; ++r) {
      sims[static_cast<std::size_t>(r)] = replicate_deviation(config, grid, static_cast<std::size_t>(r));
    }
  }
  std::vector<double> a;
  std::vector<double> s;
  std::vector<double> mx;
  for (const auto& d : sims) {
    a.push_back(d.abs_sum);
    s.push_back(d.sq_sum);
    mx.push_back(d.max_abs);
  }
  out.abs_sum = make_null_ensemble("sum_abs_delta", std::move(a), out.observed.abs_sum);
  out.sq_sum = make_null_ensemble("sum_sq_delta", std::move(s), out.observed.sq_sum);
  out.max_abs = make_null_ensemble("max_abs_delta", std::move(mx), out.observed.max_abs);
  return out;
}

}  // namespace

DeviationTest distribution_deviation_test(std::span<const HindcastRecord> records, double theta,
                                          const SurrogateConfig& config) {
  return deviation_test_impl(records, theta, config, true);
}

DeviationTest distribution_deviation_test_serial(std::span<const HindcastRecord> records, double theta,
                                                 const SurrogateConfig& config) {
  return deviation_test_impl(records, theta, config, false);
}

ThetaWeighted estimate_theta_weighted(std::span<const SeriesSummary> summaries,
                                      std::span<const HindcastRecord> records, int tau_max) {
  if (tau_max <= 0) throw std::invalid_argument("estimate_theta_weighted needs tau_max >= 1");
  ThetaWeighted out;
  std::vector<bool> usable(summaries.size());
  for (std::size_t j = 0; j < summaries.size(); ++j) {
    usable[j] = !summaries[j].theta_boundary && std::isfinite(summaries[j].theta_full);
    if (!usable[j]) out.excluded.push_back(summaries[j].name);
  }
  if (std::none_of(usable.begin(), usable.end(), [](bool b) { return b; })) {
    throw std::invalid_argument("estimate_theta_weighted: every technology has a boundary theta estimate");
  }
  // counts[tau][j]
  const auto width = static_cast<std::size_t>(tau_max);
  std::vector<std::vector<double>> counts(width + 1, std::vector<double>(summaries.size(), 0.0));
  for (const auto& r : records) {
    if (r.tau < 1 || r.tau > tau_max) continue;
    if (r.series >= summaries.size()) throw std::out_of_range("record refers to an unknown technology");
    counts[static_cast<std::size_t>(r.tau)][r.series] += 1.0;
  }
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t tau = 1; tau <= width; ++tau) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < summaries.size(); ++j) {
      if (!usable[j]) continue;
      num += counts[tau][j] * summaries[j].theta_full;
      den += counts[tau][j];
    }
    const double value = den > 0.0 ? num / den : kNaN;
    out.per_tau.push_back(value);
    if (den > 0.0) {
      total += value;
      ++used;
    }
  }
  if (used == 0) throw std::invalid_argument("estimate_theta_weighted: no usable forecasts");
  out.theta = total / static_cast<double>(used);
  return out;
}

ThetaMatch estimate_theta_matched(const ErrorGrowthCurve& observed, const SurrogateConfig& base,
                                  std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("estimate_theta_matched: empty theta grid");
  ThetaMatch out;
  out.grid.assign(grid.begin(), grid.end());
  for (double theta : grid) {
    SurrogateConfig config = base;
    config.theta = theta;
    const auto sim = simulate_xi_matrix(config).mean_curve();
    double sum = 0.0;
    std::size_t n = 0;
    for (int tau = 1; tau <= config.tau_max; ++tau) {
      const auto* p = observed.at(tau);
      const double s = sim[static_cast<std::size_t>(tau - 1)];
      if (p == nullptr || std::isnan(s) || !(s > 0.0)) continue;
      sum += p->xi / s;
      ++n;
    }
    out.Z.push_back(n > 0 ? sum / static_cast<double>(n) : kNaN);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < out.Z.size(); ++i) {
    if (std::fabs(out.Z[i] - 1.0) < std::fabs(out.Z[best] - 1.0)) best = i;
  }
  out.theta = out.grid[best];
  const double first = out.Z.front() - 1.0;
  const double last = out.Z.back() - 1.0;
  out.bracketed = first * last <= 0.0;
  if (!out.bracketed) {
    out.warning = "Z(theta) - 1 has the same sign at both ends of the grid; returning the closest grid point";
  }
  return out;
}

ThetaSweep theta_forecast_sweep(std::span<const TechnologySeries> corpus, std::size_t m,
                                std::span<const double> grid, std::span<const int> horizons) {
  if (m < 4) throw std::invalid_argument("theta_forecast_sweep: m must be >= 4");
  if (grid.empty() || horizons.empty()) throw std::invalid_argument("theta_forecast_sweep: empty grid or horizons");
  ThetaSweep out;
  out.grid.assign(grid.begin(), grid.end());
  out.horizons.assign(horizons.begin(), horizons.end());
  const std::size_t ng = grid.size();
  const std::size_t nh = horizons.size();
  std::vector<std::vector<double>> sum(nh, std::vector<double>(ng + 1, 0.0));  // last column: theta = 0
  std::vector<std::size_t> count(nh, 0);
  auto forecast_errors = [&](const std::vector<double>& y, std::size_t t0, double mu_hat, double K_hat,
                             double theta, std::size_t h_index) {
    // innovations recursion over the window, v = 0 at its start
    double v = 0.0;
    for (std::size_t i = t0 - m + 1; i <= t0; ++i) v = (y[i] - y[i - 1]) - mu_hat - theta * v;
    const auto tau = static_cast<std::size_t>(horizons[h_index]);
    const double forecast = y[t0] + mu_hat * static_cast<double>(tau) + theta * v;
    const double e = (y[t0 + tau] - forecast) / K_hat;
    return e * e;
  };

  for (const auto& s : corpus) {
    const auto& y = s.log_costs;
    const std::size_t T = y.size();
    if (T < m + 2) continue;
    for (std::size_t t0 = m; t0 + 1 < T; ++t0) {
      const auto est = estimate_rwd(y, t0, m);
      if (est.K_hat <= 1e-12) continue;
      for (std::size_t h = 0; h < nh; ++h) {
        if (horizons[h] < 1 || t0 + static_cast<std::size_t>(horizons[h]) >= T) continue;
        for (std::size_t g = 0; g < ng; ++g) sum[h][g] += forecast_errors(y, t0, est.mu_hat, est.K_hat, grid[g], h);
        sum[h][ng] += forecast_errors(y, t0, est.mu_hat, est.K_hat, 0.0, h);
        ++count[h];
      }
    }
  }
  out.mse.assign(nh, std::vector<double>(ng, kNaN));
  out.ratio.assign(nh, std::vector<double>(ng, kNaN));
  out.best_theta.assign(nh, kNaN);
  for (std::size_t h = 0; h < nh; ++h) {
    if (count[h] == 0) continue;
    const double base = sum[h][ng] / static_cast<double>(count[h]);
    std::size_t best = 0;
    for (std::size_t g = 0; g < ng; ++g) {
      out.mse[h][g] = sum[h][g] / static_cast<double>(count[h]);
      out.ratio[h][g] = out.mse[h][g] / base;
      if (out.mse[h][g] < out.mse[h][best]) best = g;
    }
    out.best_theta[h] = grid[best];
  }
  return out;
}

namespace {

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

}  // namespace

nlohmann::json to_json(const NullEnsemble& e, bool include_values) {
  nlohmann::json j;
  j["statistic"] = e.statistic;
  j["replications"] = e.values.size();
  j["observed"] = number_or_null(e.observed);
  j["mean"] = number_or_null(e.mean);
  j["std_error"] = number_or_null(e.std_error);
  j["q025"] = number_or_null(e.q025);
  j["q50"] = number_or_null(e.q50);
  j["q975"] = number_or_null(e.q975);
  j["p_value"] = number_or_null(e.p_value);
  j["p_value_raw"] = number_or_null(e.p_value_raw);
  if (include_values) j["values"] = e.values;
  return j;
}

nlohmann::json to_json(const DeviationTest& t) {
  return {{"observed",
           {{"sum_abs_delta", t.observed.abs_sum},
            {"sum_sq_delta", t.observed.sq_sum},
            {"max_abs_delta", t.observed.max_abs}}},
          {"sum_abs_delta", to_json(t.abs_sum)},
          {"sum_sq_delta", to_json(t.sq_sum)},
          {"max_abs_delta", to_json(t.max_abs)}};
}

nlohmann::json to_json(const ThetaWeighted& t) {
  nlohmann::json per_tau = nlohmann::json::array();
  for (double v : t.per_tau) per_tau.push_back(number_or_null(v));
  return {{"theta_w", t.theta}, {"per_tau", per_tau}, {"excluded", t.excluded}};
}

nlohmann::json to_json(const ThetaMatch& t) {
  nlohmann::json z = nlohmann::json::array();
  for (double v : t.Z) z.push_back(number_or_null(v));
  nlohmann::json j{{"theta_m", t.theta}, {"grid", t.grid}, {"Z", z}, {"bracketed", t.bracketed}};
  if (!t.warning.empty()) j["warning"] = t.warning;
  return j;
}

nlohmann::json to_json(const ThetaSweep& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t h = 0; h < t.horizons.size(); ++h) {
    nlohmann::json ratio = nlohmann::json::array();
    for (double v : t.ratio[h]) ratio.push_back(number_or_null(v));
    rows.push_back({{"tau", t.horizons[h]}, {"ratio", ratio}, {"best_theta", number_or_null(t.best_theta[h])}});
  }
  return {{"grid", t.grid}, {"horizons", rows}};
}

nlohmann::json to_json(const SurrogateConfig& c) {
  nlohmann::json tmpl = nlohmann::json::array();
  for (const auto& e : c.corpus_template) tmpl.push_back({{"name", e.name}, {"T", e.T}, {"mu", e.mu}, {"K", e.K}});
  nlohmann::json innovation = c.innovation.family == Innovation::Family::normal
                                  ? nlohmann::json{{"family", "normal"}}
                                  : nlohmann::json{{"family", "student"}, {"df", c.innovation.df}};
  return {{"replications", c.replications},
          {"theta", c.theta},
          {"innovation", innovation},
          {"m", c.m},
          {"tau_max", c.tau_max},
          {"seed", c.seed},
          {"weighting", c.weighting == Weighting::pooled ? "pooled" : "equal-tech"},
          {"corpus_template", tmpl}};
}

}  // namespace techfc
