#include "techfc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "techfc/error.hpp"
#include "techfc/models.hpp"

namespace techfc {

std::vector<double> TechnologySeries::first_differences() const {
  std::vector<double> d;
  if (log_costs.size() < 2) return d;
  d.reserve(log_costs.size() - 1);
  for (std::size_t i = 1; i < log_costs.size(); ++i) d.push_back(log_costs[i] - log_costs[i - 1]);
  return d;
}

void TechnologySeries::validate() const {
  if (years.size() != log_costs.size()) {
    throw DataError(name + ": years and log costs differ in length");
  }
  if (log_costs.size() < 2) throw DataError(name + ": need at least 2 observations");
  for (std::size_t i = 1; i < years.size(); ++i) {
    if (years[i] != years[i - 1] + 1) throw DataError(name + ": years are not consecutive");
  }
  for (double y : log_costs) {
    if (!std::isfinite(y)) throw DataError(name + ": non-finite log cost");
  }
}

TechnologySeries TechnologySeries::from_log_costs(std::string name, int first_year,
                                                  std::vector<double> log_costs) {
  TechnologySeries s;
  s.name = std::move(name);
  s.years.resize(log_costs.size());
  for (std::size_t i = 0; i < log_costs.size(); ++i) s.years[i] = first_year + static_cast<int>(i);
  s.log_costs = std::move(log_costs);
  return s;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

template <class T>
bool parse_number(const std::string& s, T& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

struct Observation {
  int year;
  double cost;
};

struct RawTechnology {
  std::string sector;
  std::vector<Observation> obs;
};

}  // namespace

IngestResult parse_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  // header
  bool have_header = false;
  bool has_sector = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto header = split_row(line);
    if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0] = header[0].substr(3);
    if (header.size() < 3 || header[0] != "technology" || header[1] != "year" || header[2] != "cost" ||
        header.size() > 4 || (header.size() == 4 && header[3] != "sector")) {
      throw DataError("line " + std::to_string(line_no) +
                      ": expected header `technology,year,cost[,sector]`");
    }
    has_sector = header.size() == 4;
    have_header = true;
    break;
  }
  if (!have_header) throw DataError("empty CSV: no header and no observations");

  std::vector<std::string> order;
  std::map<std::string, RawTechnology> raw;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_row(line);
    const std::size_t expected = has_sector ? 4 : 3;
    if (f.size() != expected) {
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(expected) +
                      " fields, found " + std::to_string(f.size()));
    }
    int year = 0;
    double cost = 0.0;
    if (f[0].empty()) throw DataError("line " + std::to_string(line_no) + ": empty technology name");
    if (!parse_number(f[1], year)) {
      throw DataError("line " + std::to_string(line_no) + ": cannot parse year `" + f[1] + "`");
    }
    if (!parse_number(f[2], cost) || !std::isfinite(cost)) {
      throw DataError("line " + std::to_string(line_no) + ": cannot parse cost `" + f[2] + "`");
    }
    if (!(cost > 0.0)) {
      throw DataError("line " + std::to_string(line_no) + ": nonpositive cost " + f[2] + " for " + f[0] +
                      " in " + f[1]);
    }
    auto [it, inserted] = raw.try_emplace(f[0]);
    if (inserted) order.push_back(f[0]);
    if (has_sector && it->second.sector.empty()) it->second.sector = f[3];
    it->second.obs.push_back({year, cost});
  }
  if (order.empty()) throw DataError("empty CSV: no observations");

  IngestResult result;
  for (const auto& name : order) {
    auto& tech = raw[name];
    std::sort(tech.obs.begin(), tech.obs.end(),
              [](const Observation& a, const Observation& b) { return a.year < b.year; });
    for (std::size_t i = 1; i < tech.obs.size(); ++i) {
      if (tech.obs[i].year == tech.obs[i - 1].year) {
        throw DataError("duplicate observation for " + name + " in " + std::to_string(tech.obs[i].year));
      }
    }
    // Longest contiguous run; ties go to the most recent run.
    std::size_t best_begin = 0;
    std::size_t best_len = 0;
    std::size_t run_begin = 0;
    for (std::size_t i = 1; i <= tech.obs.size(); ++i) {
      if (i == tech.obs.size() || tech.obs[i].year != tech.obs[i - 1].year + 1) {
        const std::size_t len = i - run_begin;
        if (len >= best_len) {
          best_len = len;
          best_begin = run_begin;
        }
        run_begin = i;
      }
    }
    if (best_len != tech.obs.size()) {
      std::ostringstream w;
      w << name << ": years not contiguous, kept " << tech.obs[best_begin].year << "-"
        << tech.obs[best_begin + best_len - 1].year << ", dropped " << (tech.obs.size() - best_len)
        << " observation(s) spanning " << tech.obs.front().year << "-" << tech.obs.back().year;
      result.warnings.push_back(w.str());
    }
    TechnologySeries s;
    s.name = name;
    s.sector = tech.sector;
    for (std::size_t i = best_begin; i < best_begin + best_len; ++i) {
      s.years.push_back(tech.obs[i].year);
      s.log_costs.push_back(std::log(tech.obs[i].cost));
    }
    result.series.push_back(std::move(s));
  }
  return result;
}

IngestResult ingest_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_csv(in);
}

void write_csv(std::ostream& out, std::span<const TechnologySeries> series) {
  const bool with_sector = std::any_of(series.begin(), series.end(),
                                       [](const TechnologySeries& s) { return !s.sector.empty(); });
  out << "technology,year,cost" << (with_sector ? ",sector" : "") << '\n';
  std::ostringstream num;
  num << std::setprecision(17);
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      num.str("");
      num << std::exp(s.log_costs[i]);
      out << s.name << ',' << s.years[i] << ',' << num.str();
      if (with_sector) out << ',' << s.sector;
      out << '\n';
    }
  }
}

SeriesSummary summarize(const TechnologySeries& series, double alpha) {
  if (series.size() < 3) throw DataError(series.name + ": summary needs at least 3 observations");
  const auto diffs = series.first_differences();
  SeriesSummary s;
  s.name = series.name;
  s.sector = series.sector;
  s.T = series.size();
  s.mu_full = mean(diffs);
  s.K_full = std::sqrt(sample_variance(diffs));
  s.p_value = one_sided_t_test(diffs);
  s.improving = s.p_value < alpha || alpha >= 1.0;
  if (series.size() >= 4) {
    const auto ima = fit_ima_mle(series);
    s.theta_full = ima.theta;
    s.theta_boundary = ima.boundary;
  } else {
    s.theta_full = std::nan("");
    s.theta_boundary = true;
  }
  return s;
}

Selection select_improving(std::span<const TechnologySeries> series, double alpha) {
  Selection sel;
  for (const auto& s : series) {
    auto summary = summarize(s, alpha);
    if (summary.improving) {
      sel.improving.push_back(s);
      sel.improving_summaries.push_back(std::move(summary));
    } else {
      sel.excluded.push_back(s);
      sel.excluded_summaries.push_back(std::move(summary));
    }
  }
  return sel;
}

MuKRegression mu_k_regression(std::span<const SeriesSummary> summaries) {
  if (summaries.size() < 3) throw DataError("mu-K regression needs at least 3 technologies");
  MuKRegression reg;
  std::vector<double> mu;
  std::vector<double> k;
  std::vector<double> log_neg_mu;
  std::vector<double> log_k;
  for (const auto& s : summaries) {
    mu.push_back(s.mu_full);
    k.push_back(s.K_full);
    if (s.mu_full < 0.0 && s.K_full > 0.0) {
      log_neg_mu.push_back(std::log(-s.mu_full));
      log_k.push_back(std::log(s.K_full));
    } else {
      reg.log_log_excluded.push_back(s.name);
    }
  }
  reg.linear = ols_fit(mu, k);
  reg.log_log = ols_fit(log_neg_mu, log_k);
  return reg;
}

void write_describe_csv(std::ostream& out, std::span<const SeriesSummary> summaries) {
  out << "technology,sector,T,mu,p_value,K,theta,improving\n";
  std::ostringstream row;
  row << std::setprecision(10);
  for (const auto& s : summaries) {
    row.str("");
    row << s.name << ',' << s.sector << ',' << s.T << ',' << s.mu_full << ',' << s.p_value << ',' << s.K_full
        << ',';
    if (std::isfinite(s.theta_full)) row << s.theta_full;
    row << ',' << (s.improving ? 1 : 0) << '\n';
    out << row.str();
  }
}

}  // namespace techfc
