#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "techfc/stats.hpp"

namespace techfc {

// One technology's annual log-cost trajectory. Years are consecutive.
struct TechnologySeries {
  std::string name;
  std::string sector;
  std::vector<int> years;
  std::vector<double> log_costs;

  std::size_t size() const { return log_costs.size(); }
  std::vector<double> first_differences() const;

  // Checks the consecutive-years / finite-values invariants.
  void validate() const;

  static TechnologySeries from_log_costs(std::string name, int first_year,
                                         std::vector<double> log_costs);
};

struct IngestResult {
  std::vector<TechnologySeries> series;
  std::vector<std::string> warnings;
};

// Long-format CSV `technology,year,cost` (an optional trailing `sector` column
// is accepted). Technologies keep first-appearance order; observations are
// sorted by year. Gapped series keep their longest contiguous run.
IngestResult parse_csv(std::istream& in);
IngestResult ingest_csv(const std::filesystem::path& path);
void write_csv(std::ostream& out, std::span<const TechnologySeries> series);

struct SeriesSummary {
  std::string name;
  std::string sector;
  std::size_t T = 0;
  double mu_full = 0.0;
  double K_full = 0.0;
  double theta_full = 0.0;
  bool theta_boundary = false;
  double p_value = 1.0;
  bool improving = false;
};

// Full-sample drift, volatility, IMA(1,1) theta and the one-sided t-test
// p-value. `improving` is set with the default 0.10 threshold.
SeriesSummary summarize(const TechnologySeries& series, double alpha = 0.10);

struct Selection {
  std::vector<TechnologySeries> improving;
  std::vector<TechnologySeries> excluded;
  std::vector<SeriesSummary> improving_summaries;
  std::vector<SeriesSummary> excluded_summaries;
};

// Partition by p < alpha. alpha >= 1 admits every series.
Selection select_improving(std::span<const TechnologySeries> series, double alpha = 0.10);

struct MuKRegression {
  OlsFit linear;   // K = a + b * mu
  OlsFit log_log;  // ln K = a + b * ln(-mu)
  std::vector<std::string> log_log_excluded;
};

MuKRegression mu_k_regression(std::span<const SeriesSummary> summaries);

// `technology,sector,T,mu,p_value,K,theta,improving`
void write_describe_csv(std::ostream& out, std::span<const SeriesSummary> summaries);

}  // namespace techfc
