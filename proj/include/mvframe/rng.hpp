#pragma once

#include <cstdint>
#include <random>

#include "mvframe/group.hpp"

namespace mvframe {

// Deterministic random source. mt19937_64 output is fixed by the standard and
// the derived doubles below avoid the implementation-defined std
// distributions, so a seed pins the exact stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  double uniform() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {  // Box-Muller, one fresh pair of uniforms per call
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  cplx complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re * 0.7071067811865475244, im * 0.7071067811865475244};
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace mvframe
