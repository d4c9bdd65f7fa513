#include "techfc/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "techfc/applications.hpp"
#include "techfc/dataset.hpp"
#include "techfc/error.hpp"
#include "techfc/forecasting.hpp"
#include "techfc/hindcast.hpp"
#include "techfc/robustness.hpp"
#include "techfc/surrogate.hpp"

namespace techfc {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Matched estimate of theta for the cost corpus; used wherever a theta is
// needed and none is given.
constexpr double kDefaultTheta = 0.63;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string input;
  std::string out = ".";
  std::size_t m = 5;
  int tau_max = 20;
  std::optional<double> theta;
  std::string theta_from;
  double alpha = 0.10;
  std::uint64_t seed = kDefaultSeed;
  std::size_t reps = 1000;
  std::string weighting = "pooled";
  int threads = 0;
};

std::string fmt(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Weighting parse_weighting(const std::string& w) {
  return w == "equal-tech" ? Weighting::equal_technology : Weighting::pooled;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("bad grid component '" + tok + "'");
    }
  }
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw UsageError("grid expects lo:hi:step with hi >= lo and step > 0");
  }
  std::vector<double> grid;
  const auto n = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (long i = 0; i <= n; ++i) grid.push_back(std::round((parts[0] + i * parts[2]) * 1e10) / 1e10);
  for (double g : grid) {
    if (!(std::abs(g) < 1.0)) throw UsageError("grid values must lie in (-1, 1)");
  }
  return grid;
}

fs::path prepare_out(const Common& c) {
  fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path.string());
  f << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json common_json(const std::string& command, const Common& c) {
  json j;
  j["command"] = command;
  j["input"] = c.input;
  j["out"] = c.out;
  j["m"] = c.m;
  j["tau_max"] = c.tau_max;
  j["theta"] = c.theta ? json(*c.theta) : json();
  j["theta_from"] = c.theta_from.empty() ? json() : json(c.theta_from);
  j["alpha"] = c.alpha;
  j["seed"] = c.seed;
  j["reps"] = c.reps;
  j["weighting"] = c.weighting;
  j["threads"] = c.threads;
  return j;
}

IngestResult load(const Common& c) {
  if (c.input.empty()) throw UsageError("--input is required");
  auto data = ingest_csv(c.input);
  for (const auto& w : data.warnings) std::cerr << "warning: " << w << "\n";
  if (data.series.empty()) throw DataError(c.input + ": no technologies found");
  return data;
}

json ols_json(const OlsFit& f) {
  return {{"intercept", f.intercept},       {"slope", f.slope},       {"r_squared", f.r_squared},
          {"se_intercept", f.se_intercept}, {"se_slope", f.se_slope}, {"n", f.n}};
}

int cmd_describe(const Common& c) {
  const auto data = load(c);
  std::vector<SeriesSummary> summaries;
  json too_short = json::array();
  for (const auto& s : data.series) {
    if (s.size() < 3) {
      too_short.push_back(s.name);
      continue;
    }
    summaries.push_back(summarize(s, c.alpha));
  }
  if (summaries.empty()) throw DataError("no technology has at least 3 observations");
  const auto dir = prepare_out(c);
  std::ostringstream csv;
  write_describe_csv(csv, summaries);
  write_text(dir / "describe.csv", csv.str());

  std::vector<SeriesSummary> improving;
  json excluded = json::array();
  for (const auto& s : summaries) {
    if (s.improving) {
      improving.push_back(s);
    } else {
      excluded.push_back(s.name);
    }
  }
  json report;
  report["technologies"] = summaries.size();
  report["improving"] = improving.size();
  report["excluded"] = excluded;
  report["too_short"] = too_short;
  try {
    const auto reg = mu_k_regression(improving);
    report["mu_k_linear"] = ols_json(reg.linear);
    report["mu_k_log_log"] = ols_json(reg.log_log);
    report["log_log_excluded"] = reg.log_log_excluded;
  } catch (const DataError& e) {
    report["mu_k_note"] = e.what();
  } catch (const std::invalid_argument& e) {
    report["mu_k_note"] = e.what();
  }
  write_json(dir / "describe.json", report);
  write_json(dir / "run.json", common_json("describe", c));

  std::cout << summaries.size() << " technologies, " << improving.size() << " improving at alpha = " << fmt(c.alpha)
            << ", " << excluded.size() << " excluded\n";
  if (report.contains("mu_k_linear")) {
    const auto& l = report["mu_k_linear"];
    std::cout << "K = " << fmt(l["intercept"].get<double>()) << " + " << fmt(l["slope"].get<double>())
              << " mu  (R^2 " << fmt(l["r_squared"].get<double>()) << ")\n";
  }
  return 0;
}

struct Observed {
  std::vector<TechnologySeries> corpus;
  std::vector<SeriesSummary> summaries;
  CorpusHindcast hindcast;
};

Observed observe(const Common& c) {
  if (c.m <= 3) throw UsageError("--window must exceed 3");
  const auto data = load(c);
  const auto sel = select_improving(data.series, c.alpha);
  if (sel.improving.empty()) throw DataError("no technology passes the improvement test at alpha = " + fmt(c.alpha));
  Observed o;
  o.corpus = sel.improving;
  o.summaries = sel.improving_summaries;
  HindcastOptions opt;
  opt.m = c.m;
  opt.tau_max = c.tau_max;
  o.hindcast = hindcast_corpus(o.corpus, opt);
  for (const auto& n : o.hindcast.notes) std::cerr << "note: " << n << "\n";
  if (o.hindcast.skipped_windows > 0) {
    std::cerr << "note: " << o.hindcast.skipped_windows << " zero-volatility windows skipped\n";
  }
  if (o.hindcast.records.empty()) throw DataError("no feasible forecasts at m = " + std::to_string(c.m));
  return o;
}

int cmd_hindcast(const Common& c) {
  const auto o = observe(c);
  const auto dir = prepare_out(c);
  {
    std::ostringstream s;
    write_hindcast_csv(s, o.corpus, o.hindcast.records);
    write_text(dir / "hindcast_records.csv", s.str());
  }
  const double theta = c.theta.value_or(kDefaultTheta);
  int tmax = c.tau_max;
  if (tmax <= 0) {
    for (const auto& r : o.hindcast.records) tmax = std::max(tmax, r.tau);
  }
  const auto curve = error_growth(o.hindcast.records, tmax, parse_weighting(c.weighting));
  std::ostringstream s;
  s << "tau,n_forecasts,n_technologies,xi_empirical,xi_pred_theta0,xi_pred_theta\n";
  for (const auto& p : curve.points) {
    s << p.tau << ',' << p.n_forecasts << ',' << p.n_technologies << ',' << fmt(p.xi) << ','
      << fmt(variance_factors(p.tau, c.m, 0.0).xi) << ',' << fmt(variance_factors(p.tau, c.m, theta).xi) << '\n';
  }
  write_text(dir / "error_growth.csv", s.str());
  json run = common_json("hindcast", c);
  run["theta_resolved"] = theta;
  run["records"] = o.hindcast.records.size();
  run["technologies"] = o.corpus.size();
  run["skipped_windows"] = o.hindcast.skipped_windows;
  write_json(dir / "run.json", run);
  std::cout << o.hindcast.records.size() << " forecasts from " << o.corpus.size() << " technologies (m = " << c.m
            << ")\n";
  return 0;
}

struct ValidateOpts {
  std::size_t deviation_reps = 10000;
  std::string grid = "0:0.9:0.01";
  std::size_t grid_reps = 0;  // 0: same as --reps
  std::string sweep_grid;
  std::vector<std::size_t> vary_m;
  std::size_t half_trials = 0;
  int extended_tau_max = 0;
  std::vector<double> fat_df;
};

void write_band_csv(const fs::path& path, const XiBand& band, std::size_t m, double theta) {
  std::ostringstream s;
  s << "tau,xi_empirical,q025,q50,q975,p_value,xi_pred_theta0,xi_pred_theta\n";
  for (std::size_t i = 0; i < band.taus.size(); ++i) {
    const auto& e = band.per_tau[i];
    const int tau = band.taus[i];
    s << tau << ',' << fmt(e.observed) << ',' << fmt(e.q025) << ',' << fmt(e.q50) << ',' << fmt(e.q975) << ','
      << fmt(e.p_value) << ',' << fmt(variance_factors(tau, m, 0.0).xi) << ','
      << fmt(variance_factors(tau, m, theta).xi) << '\n';
  }
  write_text(path, s.str());
}

json band_json(const XiBand& band) {
  json a = json::array();
  for (std::size_t i = 0; i < band.taus.size(); ++i) {
    json e = to_json(band.per_tau[i]);
    e["tau"] = band.taus[i];
    a.push_back(e);
  }
  return a;
}

int cmd_validate(const Common& c, const ValidateOpts& v) {
  if (c.reps == 0) throw UsageError("--reps must be >= 1");
  if (v.deviation_reps == 0) throw UsageError("--deviation-reps must be >= 1");
  if (c.tau_max <= 0) throw UsageError("validate needs a finite --tau-max");
  if (c.theta && !c.theta_from.empty()) throw UsageError("give either --theta or --theta-from, not both");
  if (c.theta && !(std::abs(*c.theta) < 1.0)) throw UsageError("--theta must lie in (-1, 1)");
  const auto grid = parse_grid(v.grid);
  const auto sweep = v.sweep_grid.empty() ? std::vector<double>{} : parse_grid(v.sweep_grid);
  const auto o = observe(c);
  const auto dir = prepare_out(c);
  const auto weighting = parse_weighting(c.weighting);
  const auto observed = error_growth(o.hindcast.records, c.tau_max, weighting);

  SurrogateConfig base;
  base.replications = c.reps;
  base.m = c.m;
  base.tau_max = c.tau_max;
  base.seed = c.seed;
  base.weighting = weighting;
  base.corpus_template = template_from_summaries(o.summaries);

  json report;
  std::optional<ThetaWeighted> tw;
  try {
    tw = estimate_theta_weighted(o.summaries, o.hindcast.records, c.tau_max);
    report["theta_weighted"] = to_json(*tw);
  } catch (const std::invalid_argument& e) {
    report["theta_weighted_note"] = e.what();
  }

  // Without --theta the matched estimate is always computed; --theta-from
  // only decides which estimate drives the tests below.
  std::optional<ThetaMatch> tm;
  if (!c.theta) {
    SurrogateConfig g = base;
    if (v.grid_reps > 0) g.replications = v.grid_reps;
    tm = estimate_theta_matched(observed, g, grid);
    report["theta_matched"] = to_json(*tm);
    if (!tm->warning.empty()) std::cerr << "warning: " << tm->warning << "\n";
    std::ostringstream s;
    s << "theta,Z\n";
    for (std::size_t i = 0; i < tm->grid.size(); ++i) s << fmt(tm->grid[i]) << ',' << fmt(tm->Z[i]) << '\n';
    write_text(dir / "theta_matched.csv", s.str());
  }
  double theta = 0.0;
  if (c.theta) {
    theta = *c.theta;
  } else if (c.theta_from == "weighted") {
    if (!tw) throw DataError("theta_w is undefined for this corpus");
    theta = tw->theta;
  } else {
    theta = tm->theta;
  }
  report["theta_used"] = theta;

  SurrogateConfig rwd = base;
  rwd.theta = 0.0;
  const auto band0 = null_xi_band(rwd, observed);
  write_band_csv(dir / "xi_band_theta0.csv", band0, c.m, theta);
  report["xi_band_theta0"] = band_json(band0);
  SurrogateConfig ima = base;
  ima.theta = theta;
  const auto band = null_xi_band(ima, observed);
  write_band_csv(dir / "xi_band_theta.csv", band, c.m, theta);
  report["xi_band_theta"] = band_json(band);

  SurrogateConfig dev = base;
  dev.replications = v.deviation_reps;
  const auto dt = distribution_deviation_test(o.hindcast.records, theta, dev);
  report["deviation_test"] = to_json(dt);
  std::optional<DeviationTest> dt_w;
  if (tw && std::abs(tw->theta - theta) > 1e-12) {
    dt_w = distribution_deviation_test(o.hindcast.records, tw->theta, dev);
    report["deviation_test_theta_weighted"] = to_json(*dt_w);
  }

  if (!sweep.empty()) {
    std::vector<int> hs;
    for (int h : {1, 2, 3, 5, 10, 15, 20}) {
      if (h <= c.tau_max) hs.push_back(h);
    }
    report["theta_sweep"] = to_json(theta_forecast_sweep(o.corpus, c.m, sweep, hs));
  }

  RobustnessSpec rs;
  rs.m = c.m;
  rs.tau_max = c.tau_max;
  rs.theta = theta;
  rs.seed = c.seed;
  rs.replications = c.reps;
  if (!v.vary_m.empty()) rs.vary_m = v.vary_m;
  if (v.half_trials > 0) rs.half_dataset_trials = v.half_trials;
  if (v.extended_tau_max > 0) rs.extended_tau_max = v.extended_tau_max;
  if (!v.fat_df.empty()) rs.fat_tail_dfs = v.fat_df;
  if (rs.vary_m || rs.half_dataset_trials || rs.extended_tau_max || rs.fat_tail_dfs) {
    report["robustness"] = to_json(robustness_suite(o.corpus, rs), theta, c.m);
  }

  write_json(dir / "validate.json", report);
  json run = common_json("validate", c);
  run["theta_resolved"] = theta;
  run["deviation_reps"] = v.deviation_reps;
  run["grid"] = v.grid;
  run["grid_reps"] = v.grid_reps == 0 ? c.reps : v.grid_reps;
  run["sweep_grid"] = v.sweep_grid;
  run["vary_m"] = v.vary_m;
  run["half_trials"] = v.half_trials;
  run["extended_tau_max"] = v.extended_tau_max;
  run["fat_df"] = v.fat_df;
  run["surrogate"] = to_json(ima);
  write_json(dir / "run.json", run);

  if (tw) std::cout << "theta_w = " << fmt(tw->theta) << "\n";
  if (tm) std::cout << "theta_m = " << fmt(tm->theta) << "\n";
  std::cout << "deviation p-values at theta = " << fmt(theta) << ": " << fmt(dt.abs_sum.p_value) << ", "
            << fmt(dt.sq_sum.p_value) << ", " << fmt(dt.max_abs.p_value) << "\n";
  if (dt_w) {
    std::cout << "deviation p-values at theta_w = " << fmt(tw->theta) << ": " << fmt(dt_w->abs_sum.p_value) << ", "
              << fmt(dt_w->sq_sum.p_value) << ", " << fmt(dt_w->max_abs.p_value) << "\n";
  }
  return 0;
}

struct ForecastOpts {
  std::string tech;
  int horizon = 20;
  std::optional<std::size_t> window;
  std::optional<double> mu;
  std::optional<double> K;
  std::optional<double> last_cost;
  int origin_year = 0;
  std::optional<double> threshold_cost;
};

int cmd_forecast(const Common& c, const ForecastOpts& f) {
  if (f.horizon < 1) throw UsageError("--horizon must be >= 1");
  const double theta = c.theta.value_or(kDefaultTheta);
  std::vector<DistributionalForecast> fc;
  std::string name;
  int origin_year = f.origin_year;
  json estimate;
  if (!c.input.empty()) {
    if (f.tech.empty()) throw UsageError("--tech is required with --input");
    const auto data = load(c);
    const TechnologySeries* s = nullptr;
    for (const auto& x : data.series) {
      if (x.name == f.tech) s = &x;
    }
    if (s == nullptr) throw DataError("technology '" + f.tech + "' not found in " + c.input);
    fc = forecast_technology(*s, f.horizon, theta, f.window);
    name = s->name;
    origin_year = s->years.back();
    const auto m = f.window.value_or(s->size() - 1);
    const auto est = estimate_rwd(s->log_costs, s->size() - 1, m);
    estimate = {{"mu_hat", est.mu_hat}, {"K_hat", est.K_hat}, {"m", m}, {"last_cost", std::exp(s->log_costs.back())}};
  } else {
    if (!f.mu || !f.K || !f.last_cost || !f.window) {
      throw UsageError("without --input, give --mu, --K, --m and --last-cost");
    }
    if (!(*f.last_cost > 0.0)) throw UsageError("--last-cost must be positive");
    if (*f.K < 0.0) throw UsageError("--K must be >= 0");
    name = f.tech.empty() ? "technology" : f.tech;
    const RwdEstimate est{*f.mu, *f.K, *f.window, 0};
    const double y = std::log(*f.last_cost);
    for (int tau = 1; tau <= f.horizon; ++tau) fc.push_back(distributional_forecast(est, y, tau, theta));
    estimate = {{"mu_hat", *f.mu}, {"K_hat", *f.K}, {"m", *f.window}, {"last_cost", *f.last_cost}};
  }
  const auto dir = prepare_out(c);
  json out;
  out["forecasts"] = json::array();
  for (const auto& x : fc) {
    json j = forecast_to_json(x, name, origin_year);
    json bands = json::array();
    for (const auto& b : sigma_bands(x)) {
      bands.push_back({{"k", b.k}, {"lower_cost", b.lower_cost}, {"upper_cost", b.upper_cost}});
    }
    j["sigma_bands"] = bands;
    j["prob_above_origin_cost"] = x.prob_exceeds(x.origin_log_cost());
    if (f.threshold_cost) j["prob_above_threshold"] = x.prob_exceeds(std::log(*f.threshold_cost));
    out["forecasts"].push_back(j);
  }
  write_json(dir / "forecast.json", out);
  std::ostringstream s;
  write_forecast_csv(s, fc);
  write_text(dir / "forecast.csv", s.str());
  json run = common_json("forecast", c);
  run["tech"] = name;
  run["horizon"] = f.horizon;
  run["theta_resolved"] = theta;
  run["origin_year"] = origin_year;
  run["estimate"] = estimate;
  if (f.threshold_cost) run["threshold_cost"] = *f.threshold_cost;
  write_json(dir / "run.json", run);
  const auto& last = fc.back();
  std::cout << name << ": tau = " << f.horizon << ", median cost " << fmt(last.median_cost()) << ", 90% interval ["
            << fmt(last.quantile_cost(0.05)) << ", " << fmt(last.quantile_cost(0.95))
            << "], P(cost >= current) = " << fmt(last.prob_exceeds(last.origin_log_cost())) << "\n";
  return 0;
}

struct CompareOpts {
  double cost_a = 1.0;
  double cost_b = 3.0;
  double mu_a = 0.0;
  double mu_b = -0.10;
  std::vector<double> K_a{0.1, 0.2, 0.3};
  double K_b = 0.15;
  std::size_t m = 33;
  int tau_max = 40;
};

int cmd_compare(const Common& c, const CompareOpts& o) {
  if (!(o.cost_a > 0.0) || !(o.cost_b > 0.0)) throw UsageError("costs must be positive");
  if (o.tau_max < 1) throw UsageError("--tau-max must be >= 1");
  if (o.K_a.empty()) throw UsageError("--K-a needs at least one value");
  const double theta = c.theta.value_or(kDefaultTheta);
  std::vector<CrossingSpec> specs;
  for (double k : o.K_a) {
    CrossingSpec spec;
    spec.a = {std::log(o.cost_a), o.mu_a, k, o.m};
    spec.b = {std::log(o.cost_b), o.mu_b, o.K_b, o.m};
    spec.theta = theta;
    spec.validate();
    specs.push_back(spec);
  }
  const auto dir = prepare_out(c);
  json report;
  report["scenarios"] = json::array();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    std::ostringstream s;
    s << "tau,p_cross\n";
    json ps = json::array();
    for (int tau = 1; tau <= o.tau_max; ++tau) {
      const double p = crossing_probability(specs[i], tau);
      s << tau << ',' << fmt(p) << '\n';
      ps.push_back(p);
    }
    const auto file = "compare_k" + std::to_string(i) + ".csv";
    write_text(dir / file, s.str());
    const auto root = even_odds_horizon(specs[i], 1.0, std::max(200.0, 10.0 * o.tau_max));
    report["scenarios"].push_back(
        {{"K_a", o.K_a[i]}, {"file", file}, {"p_cross", ps}, {"even_odds_tau", root ? json(*root) : json()}});
    std::cout << "K_a = " << fmt(o.K_a[i]) << ": p = 0.5 at tau = " << (root ? fmt(*root) : "none") << "\n";
  }
  write_json(dir / "compare.json", report);
  json run = common_json("compare", c);
  run["tau_max"] = o.tau_max;
  run["theta_resolved"] = theta;
  run["cost_a"] = o.cost_a;
  run["cost_b"] = o.cost_b;
  run["mu_a"] = o.mu_a;
  run["mu_b"] = o.mu_b;
  run["K_a"] = o.K_a;
  run["K_b"] = o.K_b;
  run["m"] = o.m;
  write_json(dir / "run.json", run);
  return 0;
}

struct TrendOpts {
  double f = 0.0;
  double gf = 0.0;
  double s = 0.0;
  double gs = 0.0;
};

int cmd_trend(const Common& c, const TrendOpts& t) {
  const double years = deterministic_trend_crossing(t.f, t.gf, t.s, t.gs);
  const auto dir = prepare_out(c);
  json run = common_json("trend", c);
  run["f"] = t.f;
  run["gf"] = t.gf;
  run["s"] = t.s;
  run["gs"] = t.gs;
  write_json(dir / "run.json", run);
  write_json(dir / "trend.json", {{"years", years}});
  std::cout << fmt(years) << "\n";
  return 0;
}

void add_common(CLI::App* sub, Common& c, bool data_opts) {
  sub->add_option("-o,--out", c.out, "Output directory")->capture_default_str();
  sub->add_option("--threads", c.threads, "Thread cap (0: OpenMP default)")->check(CLI::NonNegativeNumber);
  if (!data_opts) return;
  sub->add_option("-i,--input", c.input, "Cost CSV (technology,year,cost[,sector])");
  sub->add_option("--alpha", c.alpha, "Improvement test threshold")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
}

void add_weighting(CLI::App* sub, Common& c) {
  sub->add_option("--weighting", c.weighting, "pooled | equal-tech")
      ->check(CLI::IsMember({"pooled", "equal-tech"}))
      ->capture_default_str();
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Distributional forecasts of technology costs from a random walk with drift"};
  app.require_subcommand(1);
  Common c;
  ValidateOpts vo;
  ForecastOpts fo;
  CompareOpts co;
  TrendOpts to;

  auto* describe = app.add_subcommand("describe", "Per-technology statistics and the mu-K regression");
  add_common(describe, c, true);

  auto* hindcast = app.add_subcommand("hindcast", "Rolling-origin hindcast and error growth");
  add_common(hindcast, c, true);
  hindcast->add_option("--window,--m", c.m, "Estimation window m")->capture_default_str();
  hindcast->add_option("--tau-max", c.tau_max, "Horizon cap (<= 0: unrestricted)")->capture_default_str();
  hindcast->add_option("--theta", c.theta, "Theta for the predicted Xi column (default 0.63)");
  add_weighting(hindcast, c);

  auto* validate = app.add_subcommand("validate", "Surrogate-data tests and theta estimates");
  add_common(validate, c, true);
  validate->add_option("--window,--m", c.m, "Estimation window m")->capture_default_str();
  validate->add_option("--tau-max", c.tau_max, "Horizon cap")->capture_default_str();
  validate->add_option("--theta", c.theta, "Test this theta instead of an estimate");
  validate->add_option("--theta-from", c.theta_from, "weighted | matched (default matched)")
      ->check(CLI::IsMember({"weighted", "matched"}));
  validate->add_option("--seed", c.seed, "Base seed")->capture_default_str();
  validate->add_option("--reps", c.reps, "Replications for the Xi bands")->capture_default_str();
  validate->add_option("--deviation-reps", vo.deviation_reps, "Replications for the deviation test")
      ->capture_default_str();
  validate->add_option("--grid", vo.grid, "Theta grid lo:hi:step for the matched estimate")->capture_default_str();
  validate->add_option("--grid-reps", vo.grid_reps, "Replications per grid point (default: --reps)");
  validate->add_option("--sweep", vo.sweep_grid, "Theta grid lo:hi:step for the IMA forecast sweep");
  validate->add_option("--vary-m", vo.vary_m, "Windows for the window-size check, comma separated")
      ->delimiter(',');
  validate->add_option("--half-trials", vo.half_trials, "Random half-corpus trials");
  validate->add_option("--extended-tau-max", vo.extended_tau_max, "Horizon cap for an extra long hindcast");
  validate->add_option("--fat-df", vo.fat_df, "Student df values for fat-tailed increments")->delimiter(',');
  add_weighting(validate, c);

  auto* forecast = app.add_subcommand("forecast", "Distributional forecast for one technology");
  add_common(forecast, c, true);
  forecast->add_option("--tech", fo.tech, "Technology name");
  forecast->add_option("--horizon", fo.horizon, "Forecast horizon in years")->capture_default_str();
  forecast->add_option("--theta", c.theta, "IMA theta (default 0.63)");
  forecast->add_option("--window,--m", fo.window, "Estimation window (default: all differences)");
  forecast->add_option("--mu", fo.mu, "Drift, when no --input is given");
  forecast->add_option("--K", fo.K, "Volatility, when no --input is given");
  forecast->add_option("--last-cost", fo.last_cost, "Current cost, when no --input is given");
  forecast->add_option("--origin-year", fo.origin_year, "Year of the last observation");
  forecast->add_option("--threshold-cost", fo.threshold_cost, "Also report P(cost >= threshold)");

  auto* compare = app.add_subcommand("compare", "Probability that technology b becomes cheaper than a");
  add_common(compare, c, false);
  compare->add_option("--cost-a", co.cost_a, "Current cost of a")->capture_default_str();
  compare->add_option("--cost-b", co.cost_b, "Current cost of b")->capture_default_str();
  compare->add_option("--mu-a", co.mu_a, "Drift of a")->capture_default_str();
  compare->add_option("--mu-b", co.mu_b, "Drift of b")->capture_default_str();
  compare->add_option("--K-a", co.K_a, "Volatilities of a, comma separated; one CSV per value")
      ->delimiter(',')
      ->capture_default_str();
  compare->add_option("--K-b", co.K_b, "Volatility of b")->capture_default_str();
  compare->add_option("--m", co.m, "Shared estimation window")->capture_default_str();
  compare->add_option("--theta", c.theta, "Shared theta (default 0.63)");
  compare->add_option("--tau-max", co.tau_max, "Last horizon written")->capture_default_str();

  auto* trend = app.add_subcommand("trend", "Years until f g_f^t reaches s g_s^t");
  add_common(trend, c, false);
  trend->add_option("--f", to.f, "Starting share")->required();
  trend->add_option("--gf", to.gf, "Growth factor of the share")->required();
  trend->add_option("--s", to.s, "Target share")->required();
  trend->add_option("--gs", to.gs, "Growth factor of the target")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (c.threads > 0) omp_set_num_threads(c.threads);
  try {
    if (*describe) return cmd_describe(c);
    if (*hindcast) return cmd_hindcast(c);
    if (*validate) return cmd_validate(c, vo);
    if (*forecast) return cmd_forecast(c, fo);
    if (*compare) return cmd_compare(c, co);
    if (*trend) return cmd_trend(c, to);
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace techfc
