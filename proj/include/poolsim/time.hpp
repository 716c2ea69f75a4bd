#pragma once

#include <cmath>
#include <cstdint>

namespace poolsim {

// Simulation time in integer microseconds. Integer time keeps hand-traced
// tests exact and makes record serialization byte-stable.
using Micros = std::int64_t;

inline Micros seconds_to_micros(double s) {
  return static_cast<Micros>(std::llround(s * 1e6));
}

inline double micros_to_seconds(Micros us) {
  return static_cast<double>(us) / 1e6;
}

}  // namespace poolsim
