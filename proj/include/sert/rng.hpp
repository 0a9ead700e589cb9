#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace sert {

/// Deterministic random source. Wraps std::mt19937_64 but derives all draws
/// from raw engine output, so sequences are identical across platforms and
/// standard library implementations (std::uniform_*_distribution is not
/// portable).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound). Rejection sampling, unbiased.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t raw;
    do {
      raw = engine_();
    } while (raw >= limit);
    return raw % bound;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Fisher-Yates shuffle using this engine's draws.
  template <class T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sert
