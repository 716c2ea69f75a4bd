#include "poolsim/workload.hpp"

#include <cmath>

namespace poolsim {

void validate_arrival_model(const ArrivalModel& model) {
  if (!(model.shape > 0.0)) {
    throw ConfigError("pareto_shape must be > 0, got " +
                      std::to_string(model.shape));
  }
  if (!(model.scale >= 1e-6)) {
    throw ConfigError("pareto_scale must be >= 1e-6 seconds, got " +
                      std::to_string(model.scale));
  }
}

double pareto_sample(double u, const ArrivalModel& model) {
  validate_arrival_model(model);
  return model.scale * std::pow(1.0 - u, -1.0 / model.shape);
}

ArrivalTrace gen_trace(int service_id, int n, const ArrivalModel& model,
                       Prng& rng) {
  return gen_trace_with(service_id, n, model,
                        [&rng]() { return rng.next_uniform(); });
}

ArrivalTrace gen_trace_with(int service_id, int n, const ArrivalModel& model,
                            const std::function<double()>& next_uniform) {
  if (n < 1) {
    throw ConfigError("requests_per_service must be >= 1, got " +
                      std::to_string(n));
  }
  validate_arrival_model(model);
  ArrivalTrace trace;
  trace.service_id = service_id;
  trace.arrivals.reserve(static_cast<std::size_t>(n));
  Micros t = 0;
  for (int i = 0; i < n; ++i) {
    double gap_s = pareto_sample(next_uniform(), model);
    // gap_s >= scale >= 1us, so the rounded gap keeps arrivals strictly
    // increasing and above the support minimum.
    Micros gap = seconds_to_micros(gap_s);
    if (gap < 1) gap = 1;
    t += gap;
    trace.arrivals.push_back(t);
  }
  return trace;
}

}  // namespace poolsim
