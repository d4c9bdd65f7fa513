#pragma once

// Published full-sample descriptive statistics of the 66-technology cost
// corpus (rounded to two decimals). Used as a built-in surrogate template when
// the raw cost series are not available.

#include <span>
#include <string_view>
#include <vector>

#include "techfc/dataset.hpp"
#include "techfc/surrogate.hpp"

namespace techfc {

struct ReferenceRow {
  std::string_view name;
  std::string_view sector;
  std::size_t T;
  double mu;
  double p_value;
  double K;
  double theta;
};

// All 66 rows, ordered by p-value; the first 53 are the improving set.
std::span<const ReferenceRow> reference_table();
inline constexpr std::size_t kReferenceImprovingCount = 53;

// Summaries of the 53 improving rows (|theta| = 1.00 flagged as boundary).
std::vector<SeriesSummary> reference_improving_summaries();
std::vector<TemplateEntry> reference_improving_template();

}  // namespace techfc
