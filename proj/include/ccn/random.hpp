#pragma once

#include <cstdint>
#include <random>

namespace ccn {

/// Seeded generator whose output is identical on every platform.
///
/// std::uniform_real_distribution is implementation-defined, so doubles are
/// formed directly from the top 53 bits of mt19937_64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Stream for the i-th independent task derived from a base seed.
  static Rng for_index(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    Rng r(0);
    r.engine_.seed(seq);
    return r;
  }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ccn
