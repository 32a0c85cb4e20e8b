#pragma once

#include <cstdint>
#include <random>

namespace fracwell {

// MT19937-64 (std::mt19937_64). The engine's output sequence is fixed by the C++
// standard; the conversions to floating point below are written out explicitly
// because the standard distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double log_uniform(double lo, double hi);
  // Standard normal by Box-Muller (one draw per call, no cached pair).
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace fracwell
