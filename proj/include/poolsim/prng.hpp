#pragma once

#include <cstdint>

namespace poolsim {

// 64-bit mix (splitmix64 finalizer). Full avalanche: every input bit
// affects every output bit.
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Deterministic pseudo-random generator (splitmix64). Implemented in-repo
// so identical seeds give identical streams on every platform.
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Derives an independent stream seed for a (trial, service) pair from the
// base seed. Fixed multiply-xor avalanche over the three words; distinct
// pairs collide only with ~2^-64 probability.
inline std::uint64_t derive_seed(std::uint64_t base_seed,
                                 std::uint64_t trial_index,
                                 std::uint64_t service_id) {
  std::uint64_t h = mix64(base_seed + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ (trial_index * 0xd1342543de82ef95ULL + 1));
  h = mix64(h ^ (service_id * 0xaf251af3b0f025b5ULL + 1));
  return h;
}

}  // namespace poolsim
