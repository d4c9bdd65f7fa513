#pragma once

// Robustness experiments around the baseline hindcast: window size, random
// half-corpus subsets, longer horizons and fat-tailed increments.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "techfc/dataset.hpp"
#include "techfc/hindcast.hpp"
#include "techfc/surrogate.hpp"
#include "vendor_json.hpp"

namespace techfc {

struct WindowResult {
  std::size_t m = 0;
  std::size_t series_used = 0;
  ErrorGrowthCurve curve;
  std::vector<double> predicted;  // analytic Xi at each curve point for the given theta
  std::string note;
};

// Hindcast at each window; series shorter than m + 2 are left out.
std::vector<WindowResult> vary_window(std::span<const TechnologySeries> corpus, std::span<const std::size_t> windows,
                                      int tau_max, double theta, Weighting weighting = Weighting::pooled);

struct HalfDatasetResult {
  std::size_t trials = 0;
  std::size_t subset_size = 0;
  std::vector<int> taus;
  std::vector<double> full;  // full-corpus Xi
  std::vector<double> q025;
  std::vector<double> q975;
  std::vector<bool> full_inside;
};

// Xi(tau) over `trials` random subsets of `subset_size` technologies (default:
// half the corpus, rounded down).
HalfDatasetResult half_dataset(std::span<const TechnologySeries> corpus, std::size_t trials, std::size_t m,
                               int tau_max, std::uint64_t seed, std::size_t subset_size = 0);

struct FatTailModel {
  std::string label;
  std::vector<double> xi;  // mean simulated Xi, tau = 1..tau_max
};

struct FatTailResult {
  std::vector<int> taus;
  std::vector<FatTailModel> models;  // RWD normal first, then RWD student(df)..., then IMA(theta)
};

// Mean simulated Xi(tau) for RWD with normal and Student increments and for an
// IMA(theta) baseline on the same template.
FatTailResult fat_tails(const SurrogateConfig& base, std::span<const double> dfs, double ima_theta);

struct RobustnessSpec {
  std::size_t m = 5;
  int tau_max = 20;
  double theta = 0.0;
  std::uint64_t seed = kDefaultSeed;
  std::size_t replications = 1000;
  std::optional<std::vector<std::size_t>> vary_m;
  std::optional<std::size_t> half_dataset_trials;
  std::optional<int> extended_tau_max;
  std::optional<std::vector<double>> fat_tail_dfs;
};

struct RobustnessReport {
  std::vector<WindowResult> windows;
  std::optional<HalfDatasetResult> half;
  std::optional<ErrorGrowthCurve> extended;
  std::optional<FatTailResult> fat;
};

RobustnessReport robustness_suite(std::span<const TechnologySeries> corpus, const RobustnessSpec& spec);

nlohmann::json to_json(const ErrorGrowthCurve& c);
nlohmann::json to_json(const RobustnessReport& r, double theta, std::size_t m);

}  // namespace techfc
