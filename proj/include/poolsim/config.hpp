#pragma once

#include <cstdint>

#include "poolsim/time.hpp"
#include "poolsim/workload.hpp"

namespace poolsim {

// Full scenario parameterization for one simulation condition.
// All durations are integer microseconds.
struct SimConfig {
  int n_services = 1;
  int requests_per_service = 1;
  ArrivalModel arrival{1.1, 1.0};

  Micros cold_init = 7'000'000;     // application cold-start initialization
  Micros migration = 2'000'000;     // pool pod migration latency
  Micros service_time = 0;          // warm per-request processing time
  Micros cooldown = 30'000'000;     // idle period before scale-to-zero

  int pool_size = 0;                // shared pool capacity
  bool replenish = true;
  Micros replenish_latency = 7'000'000;

  int max_instances_per_service = 1;
  int trials = 1;
  std::uint64_t base_seed = 42;
};

// Throws ConfigError naming the offending field and constraint.
void validate_config(const SimConfig& config);

}  // namespace poolsim
