#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "poolsim/prng.hpp"
#include "poolsim/time.hpp"

namespace poolsim {

// Thrown for invalid configuration values (maps to exit code 2 in the CLI).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Pareto inter-arrival model: shape alpha, scale x_m (seconds, the support
// minimum). Every sampled inter-arrival is >= scale.
struct ArrivalModel {
  double shape = 1.1;
  double scale = 1.0;
};

void validate_arrival_model(const ArrivalModel& model);

// Inverse-CDF Pareto sample: scale * (1 - u)^(-1/shape).
// u = 0 maps to the support minimum, so u in [0, 1) never divides by zero.
double pareto_sample(double u, const ArrivalModel& model);

// Per-service arrival trace; timestamps in microseconds, strictly increasing.
struct ArrivalTrace {
  int service_id = 0;
  std::vector<Micros> arrivals;
};

// Renewal-process trace: the first arrival lands at the first sampled
// inter-arrival (not at t = 0). Consumes exactly n uniforms from rng.
ArrivalTrace gen_trace(int service_id, int n, const ArrivalModel& model,
                       Prng& rng);

// Same construction from an arbitrary uniform source (stub generators).
ArrivalTrace gen_trace_with(int service_id, int n, const ArrivalModel& model,
                            const std::function<double()>& next_uniform);

}  // namespace poolsim
