#include "techfc/reference_template.hpp"

#include <array>
#include <cmath>

namespace techfc {

namespace {

constexpr std::array<ReferenceRow, 66> kRows{{
    {"Transistor", "Hardware", 38, -0.50, 0.00, 0.24, 0.19},
    {"Geothermal.Electricity", "Energy", 26, -0.05, 0.00, 0.02, 0.15},
    {"Milk..US.", "Food", 79, -0.02, 0.00, 0.02, 0.04},
    {"DRAM", "Hardware", 37, -0.45, 0.00, 0.38, 0.14},
    {"Hard.Disk.Drive", "Hardware", 20, -0.58, 0.00, 0.32, -0.15},
    {"Automotive..US.", "Cons. Goods", 21, -0.08, 0.00, 0.05, 1.00},
    {"Low.Density.Polyethylene", "Chemical", 17, -0.10, 0.00, 0.06, 0.46},
    {"Polyvinylchloride", "Chemical", 23, -0.07, 0.00, 0.06, 0.32},
    {"Ethanolamine", "Chemical", 18, -0.06, 0.00, 0.04, 0.36},
    {"Concentrating.Solar", "Energy", 26, -0.07, 0.00, 0.07, 0.91},
    {"AcrylicFiber", "Chemical", 13, -0.10, 0.00, 0.06, 0.02},
    {"Styrene", "Chemical", 15, -0.07, 0.00, 0.05, 0.74},
    {"Titanium.Sponge", "Chemical", 19, -0.10, 0.00, 0.10, 0.61},
    {"VinylChloride", "Chemical", 11, -0.08, 0.00, 0.05, -0.22},
    {"Photovoltaics", "Energy", 34, -0.10, 0.00, 0.15, 0.05},
    {"PolyethyleneHD", "Chemical", 15, -0.09, 0.00, 0.08, 0.12},
    {"VinylAcetate", "Chemical", 13, -0.08, 0.00, 0.06, 0.33},
    {"Cyclohexane", "Chemical", 17, -0.05, 0.00, 0.05, 0.38},
    {"BisphenolA", "Chemical", 14, -0.06, 0.00, 0.05, -0.03},
    {"Monochrome.Television", "Cons. Goods", 22, -0.07, 0.00, 0.08, 0.02},
    {"PolyethyleneLD", "Chemical", 15, -0.08, 0.00, 0.08, 0.88},
    {"Laser.Diode", "Hardware", 13, -0.36, 0.00, 0.29, 0.37},
    {"PolyesterFiber", "Chemical", 13, -0.12, 0.00, 0.10, -0.16},
    {"Caprolactam", "Chemical", 11, -0.10, 0.00, 0.08, 0.40},
    {"IsopropylAlcohol", "Chemical", 9, -0.04, 0.00, 0.02, -0.24},
    {"Polystyrene", "Chemical", 26, -0.06, 0.00, 0.09, -0.04},
    {"Polypropylene", "Chemical", 10, -0.10, 0.00, 0.07, 0.26},
    {"Pentaerythritol", "Chemical", 21, -0.05, 0.00, 0.07, 0.30},
    {"Ethylene", "Chemical", 13, -0.06, 0.00, 0.06, -0.26},
    {"Wind.Turbine..Denmark.", "Energy", 20, -0.04, 0.00, 0.05, 0.75},
    {"Paraxylene", "Chemical", 12, -0.10, 0.00, 0.09, -1.00},
    {"DNA.Sequencing", "Genomics", 13, -0.84, 0.00, 0.83, 0.26},
    {"NeopreneRubber", "Chemical", 13, -0.02, 0.00, 0.02, 0.83},
    {"Formaldehyde", "Chemical", 11, -0.07, 0.00, 0.06, 0.36},
    {"SodiumChlorate", "Chemical", 15, -0.03, 0.00, 0.04, 0.85},
    {"Phenol", "Chemical", 14, -0.08, 0.00, 0.09, -1.00},
    {"Acrylonitrile", "Chemical", 14, -0.08, 0.01, 0.11, 1.00},
    {"Beer..Japan.", "Food", 18, -0.03, 0.01, 0.05, -1.00},
    {"Primary.Magnesium", "Chemical", 40, -0.04, 0.01, 0.09, 0.24},
    {"Ammonia", "Chemical", 13, -0.07, 0.02, 0.10, 1.00},
    {"Aniline", "Chemical", 12, -0.07, 0.02, 0.10, 0.75},
    {"Benzene", "Chemical", 17, -0.05, 0.02, 0.09, -0.10},
    {"Sodium", "Chemical", 16, -0.01, 0.02, 0.02, 0.42},
    {"Methanol", "Chemical", 16, -0.08, 0.02, 0.14, 0.29},
    {"MaleicAnhydride", "Chemical", 14, -0.07, 0.03, 0.11, 0.73},
    {"Urea", "Chemical", 12, -0.06, 0.03, 0.09, 0.04},
    {"Electric.Range", "Cons. Goods", 22, -0.02, 0.03, 0.04, -0.14},
    {"PhthalicAnhydride", "Chemical", 18, -0.08, 0.03, 0.15, 0.31},
    {"CarbonBlack", "Chemical", 9, -0.01, 0.03, 0.02, -1.00},
    {"Titanium.Dioxide", "Chemical", 9, -0.04, 0.04, 0.05, -0.41},
    {"Primary.Aluminum", "Chemical", 40, -0.02, 0.06, 0.08, 0.39},
    {"Sorbitol", "Chemical", 8, -0.03, 0.06, 0.05, -1.00},
    {"Aluminum", "Chemical", 17, -0.02, 0.09, 0.04, 0.73},
    {"Free.Standing.Gas.Range", "Cons. Goods", 22, -0.01, 0.10, 0.04, -0.30},
    {"CarbonDisulfide", "Chemical", 10, -0.03, 0.12, 0.06, -0.04},
    {"Ethanol..Brazil.", "Energy", 25, -0.05, 0.13, 0.22, -0.62},
    {"Refined.Cane.Sugar", "Food", 34, -0.01, 0.23, 0.06, -1.00},
    {"CCGT.Power", "Energy", 10, -0.04, 0.25, 0.15, -1.00},
    {"HydrofluoricAcid", "Chemical", 11, -0.01, 0.25, 0.04, 0.13},
    {"SodiumHydrosulfite", "Chemical", 9, -0.01, 0.29, 0.07, -1.00},
    {"Corn..US.", "Food", 34, -0.02, 0.30, 0.17, -1.00},
    {"Onshore.Gas.Pipeline", "Energy", 14, -0.02, 0.31, 0.14, 0.62},
    {"Motor.Gasoline", "Energy", 23, -0.00, 0.47, 0.05, 0.43},
    {"Magnesium", "Chemical", 19, -0.00, 0.47, 0.04, 0.58},
    {"Crude.Oil", "Energy", 23, 0.01, 0.66, 0.07, 0.63},
    {"Nuclear.Electricity", "Energy", 20, 0.13, 0.99, 0.22, -0.13},
}};

}  // namespace

std::span<const ReferenceRow> reference_table() { return kRows; }

std::vector<SeriesSummary> reference_improving_summaries() {
  std::vector<SeriesSummary> out;
  for (std::size_t i = 0; i < kReferenceImprovingCount; ++i) {
    const auto& r = kRows[i];
    SeriesSummary s;
    s.name = std::string(r.name);
    s.sector = std::string(r.sector);
    s.T = r.T;
    s.mu_full = r.mu;
    s.K_full = r.K;
    s.theta_full = r.theta;
    s.theta_boundary = std::fabs(std::fabs(r.theta) - 1.0) < 1e-9;
    s.p_value = r.p_value;
    s.improving = true;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<TemplateEntry> reference_improving_template() {
  const auto summaries = reference_improving_summaries();
  return template_from_summaries(summaries);
}

}  // namespace techfc
