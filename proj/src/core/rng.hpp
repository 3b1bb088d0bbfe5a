#pragma once

#include <cstdint>
#include <random>

namespace qsiam {

// Deterministic helper on top of mt19937_64. The standard pins the engine's
// output sequence but not the distributions, so reductions live here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Closed range. The tiny modulo bias is irrelevant for data generation.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(gen_() % span);
  }

  double uniform(double lo, double hi) {
    const double u = (gen_() >> 11) * 0x1.0p-53;  // [0,1) with 53 bits
    return lo + u * (hi - lo);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace qsiam
