#pragma once

#include <cstdint>
#include <random>

namespace ifsprobe {

// All randomness goes through std::mt19937_64, whose output sequence is fixed
// by the standard. The std:: distributions are implementation-defined, so the
// conversions below are done by hand to keep runs portable.
inline constexpr const char* kRngName = "mt19937_64";

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  // Derive an independent stream for sub-task `index`.
  Rng fork(std::uint64_t index) {
    return Rng(engine_() ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ifsprobe
