#pragma once

#include <cstdint>
#include <random>

namespace techfc {

// Mixes a base seed with a stream id (SplitMix64 finalizer). Used to give each
// parallel task its own generator so results do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Seedable generator. Single owner; move it between threads, never share it.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  // Independent generator for task `stream`; does not advance *this.
  Rng split(std::uint64_t stream) const { return Rng(derive_seed(seed_, stream)); }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  // Student t with `df` degrees of freedom (unscaled).
  double student_t(double df);
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace techfc
