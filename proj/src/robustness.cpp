#include "techfc/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "techfc/forecasting.hpp"

namespace techfc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

}  // namespace

std::vector<WindowResult> vary_window(std::span<const TechnologySeries> corpus, std::span<const std::size_t> windows,
                                      int tau_max, double theta, Weighting weighting) {
  std::vector<WindowResult> out;
  for (std::size_t m : windows) {
    WindowResult w;
    w.m = m;
    HindcastOptions opt;
    opt.m = m;
    opt.tau_max = tau_max;
    const auto h = hindcast_corpus(corpus, opt);
    w.series_used = corpus.size() - h.notes.size();
    if (h.records.empty()) {
      w.note = "no technology has at least m + 2 = " + std::to_string(m + 2) + " observations";
      out.push_back(std::move(w));
      continue;
    }
    if (!h.notes.empty()) w.note = std::to_string(h.notes.size()) + " technologies too short for this window";
    w.curve = error_growth(h.records, tau_max, weighting);
    for (const auto& p : w.curve.points) w.predicted.push_back(variance_factors(p.tau, m, theta).xi);
    out.push_back(std::move(w));
  }
  return out;
}

HalfDatasetResult half_dataset(std::span<const TechnologySeries> corpus, std::size_t trials, std::size_t m,
                               int tau_max, std::uint64_t seed, std::size_t subset_size) {
  if (corpus.size() < 2) throw std::invalid_argument("half_dataset needs at least 2 technologies");
  if (tau_max <= 0) throw std::invalid_argument("half_dataset needs a finite tau_max");
  if (trials == 0) throw std::invalid_argument("half_dataset needs at least one trial");
  HalfDatasetResult out;
  out.trials = trials;
  out.subset_size = subset_size == 0 ? corpus.size() / 2 : subset_size;
  if (out.subset_size > corpus.size()) throw std::invalid_argument("subset larger than corpus");

  std::vector<HorizonSums> sums(corpus.size());
  std::size_t skipped = 0;
  for (std::size_t j = 0; j < corpus.size(); ++j) {
    sums[j].resize(static_cast<std::size_t>(tau_max));
    accumulate_squared_errors(corpus[j].log_costs, m, tau_max, sums[j], skipped);
  }
  const auto full = error_growth_from_sums(sums, tau_max);

  const auto width = static_cast<std::size_t>(tau_max);
  std::vector<double> matrix(trials * width, kNaN);
  const auto n = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    Rng rng = Rng(seed).split(static_cast<std::uint64_t>(t));
    std::vector<std::size_t> idx(corpus.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < out.subset_size; ++i) {
      const auto k = i + rng.below(idx.size() - i);
      std::swap(idx[i], idx[k]);
    }
    std::vector<HorizonSums> subset;
    subset.reserve(out.subset_size);
    for (std::size_t i = 0; i < out.subset_size; ++i) subset.push_back(sums[idx[i]]);
    const auto curve = error_growth_from_sums(subset, tau_max);
    for (const auto& p : curve.points) {
      matrix[static_cast<std::size_t>(t) * width + static_cast<std::size_t>(p.tau - 1)] = p.xi;
    }
  }
  for (int tau = 1; tau <= tau_max; ++tau) {
    std::vector<double> col;
    for (std::size_t t = 0; t < trials; ++t) {
      const double v = matrix[t * width + static_cast<std::size_t>(tau - 1)];
      if (!std::isnan(v)) col.push_back(v);
    }
    const auto* p = full.at(tau);
    if (p == nullptr || col.empty()) continue;
    out.taus.push_back(tau);
    out.full.push_back(p->xi);
    out.q025.push_back(sample_quantile(col, 0.025));
    out.q975.push_back(sample_quantile(col, 0.975));
    out.full_inside.push_back(p->xi >= out.q025.back() && p->xi <= out.q975.back());
  }
  return out;
}

FatTailResult fat_tails(const SurrogateConfig& base, std::span<const double> dfs, double ima_theta) {
  FatTailResult out;
  for (int tau = 1; tau <= base.tau_max; ++tau) out.taus.push_back(tau);
  auto run = [&](std::string label, double theta, Innovation innovation) {
    SurrogateConfig c = base;
    c.theta = theta;
    c.innovation = innovation;
    out.models.push_back({std::move(label), simulate_xi_matrix(c).mean_curve()});
  };
  run("rwd-normal", 0.0, Innovation::normal());
  for (double df : dfs) run("rwd-student-" + std::to_string(static_cast<int>(df)), 0.0, Innovation::student(df));
  run("ima-normal", ima_theta, Innovation::normal());
  return out;
}

RobustnessReport robustness_suite(std::span<const TechnologySeries> corpus, const RobustnessSpec& spec) {
  RobustnessReport report;
  if (spec.vary_m) report.windows = vary_window(corpus, *spec.vary_m, spec.tau_max, spec.theta);
  if (spec.half_dataset_trials) {
    report.half = half_dataset(corpus, *spec.half_dataset_trials, spec.m, spec.tau_max, spec.seed);
  }
  if (spec.extended_tau_max) {
    HindcastOptions opt;
    opt.m = spec.m;
    opt.tau_max = *spec.extended_tau_max;
    const auto h = hindcast_corpus(corpus, opt);
    if (!h.records.empty()) report.extended = error_growth(h.records, *spec.extended_tau_max);
  }
  if (spec.fat_tail_dfs) {
    std::vector<SeriesSummary> summaries;
    for (const auto& s : corpus) {
      if (s.size() >= 3) summaries.push_back(summarize(s));
    }
    SurrogateConfig c;
    c.replications = spec.replications;
    c.m = spec.m;
    c.tau_max = spec.tau_max;
    c.seed = spec.seed;
    c.corpus_template = template_from_summaries(summaries);
    report.fat = fat_tails(c, *spec.fat_tail_dfs, spec.theta);
  }
  return report;
}

nlohmann::json to_json(const ErrorGrowthCurve& c) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : c.points) {
    pts.push_back({{"tau", p.tau}, {"n_forecasts", p.n_forecasts}, {"n_technologies", p.n_technologies}, {"xi", p.xi}});
  }
  return {{"weighting", c.weighting == Weighting::pooled ? "pooled" : "equal-tech"}, {"points", pts}};
}

nlohmann::json to_json(const RobustnessReport& r, double theta, std::size_t m) {
  nlohmann::json j;
  if (!r.windows.empty()) {
    nlohmann::json ws = nlohmann::json::array();
    for (const auto& w : r.windows) {
      nlohmann::json wj{{"m", w.m}, {"series_used", w.series_used}, {"curve", to_json(w.curve)},
                        {"predicted_xi", w.predicted}};
      if (!w.note.empty()) wj["note"] = w.note;
      ws.push_back(wj);
    }
    j["vary_m"] = ws;
  }
  if (r.half) {
    const auto& h = *r.half;
    j["half_dataset"] = {{"trials", h.trials}, {"subset_size", h.subset_size}, {"tau", h.taus},
                         {"xi_full", h.full},  {"q025", h.q025},               {"q975", h.q975},
                         {"full_inside", h.full_inside}};
  }
  if (r.extended) {
    nlohmann::json pred0 = nlohmann::json::array();
    nlohmann::json pred = nlohmann::json::array();
    for (const auto& p : r.extended->points) {
      pred0.push_back(variance_factors(p.tau, m, 0.0).xi);
      pred.push_back(variance_factors(p.tau, m, theta).xi);
    }
    j["extended_tau_max"] = {{"curve", to_json(*r.extended)}, {"xi_pred_theta0", pred0}, {"xi_pred_theta", pred}};
  }
  if (r.fat) {
    nlohmann::json models = nlohmann::json::array();
    for (const auto& mdl : r.fat->models) {
      nlohmann::json xi = nlohmann::json::array();
      for (double v : mdl.xi) xi.push_back(number_or_null(v));
      models.push_back({{"model", mdl.label}, {"xi", xi}});
    }
    j["fat_tails"] = {{"tau", r.fat->taus}, {"models", models}};
  }
  return j;
}

}  // namespace techfc
