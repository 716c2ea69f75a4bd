#include "poolsim/engine.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace poolsim {

const char* start_kind_name(StartKind kind) {
  switch (kind) {
    case StartKind::Warm: return "warm";
    case StartKind::PoolHit: return "pool_hit";
    case StartKind::ColdStart: return "cold_start";
    case StartKind::PendingOnStarting: return "pending_on_starting";
  }
  return "unknown";
}

ScaleUpSplit scale_up_split(int desired_new, int available) {
  ScaleUpSplit split;
  split.from_pool = std::min(desired_new, available);
  split.cold_spawns = desired_new - split.from_pool;
  return split;
}

void validate_config(const SimConfig& config) {
  if (config.n_services < 1)
    throw ConfigError("n_services must be >= 1, got " +
                      std::to_string(config.n_services));
  if (config.requests_per_service < 1)
    throw ConfigError("requests_per_service must be >= 1, got " +
                      std::to_string(config.requests_per_service));
  if (config.trials < 1)
    throw ConfigError("trials must be >= 1, got " +
                      std::to_string(config.trials));
  if (config.pool_size < 0)
    throw ConfigError("pool_size must be >= 0, got " +
                      std::to_string(config.pool_size));
  if (config.cold_init < 0)
    throw ConfigError("cold_init_s must be >= 0");
  if (config.migration < 0)
    throw ConfigError("migration_s must be >= 0");
  if (config.service_time < 0)
    throw ConfigError("service_time_s must be >= 0");
  if (config.cooldown < 0)
    throw ConfigError("cooldown_s must be >= 0");
  if (config.replenish_latency < 0)
    throw ConfigError("replenish_latency_s must be >= 0");
  if (config.max_instances_per_service != 1)
    throw ConfigError(
        "max_instances_per_service must be 1 (scaling beyond one instance "
        "per service is not modeled), got " +
        std::to_string(config.max_instances_per_service));
  validate_arrival_model(config.arrival);
}

TrialSim::TrialSim(const SimConfig& config, std::vector<ArrivalTrace> traces)
    : config_(config) {
  validate_config(config_);
  services_.resize(static_cast<std::size_t>(config_.n_services));
  pool_.capacity = config_.pool_size;
  pool_.available = config_.pool_size;
  pool_.warming = 0;
  records_.reserve(static_cast<std::size_t>(config_.n_services) *
                   static_cast<std::size_t>(config_.requests_per_service));
  for (const auto& trace : traces) {
    for (std::size_t i = 0; i < trace.arrivals.size(); ++i) {
      schedule(trace.arrivals[i], EventKind::Arrival, trace.service_id,
               static_cast<int>(i));
    }
  }
}

void TrialSim::schedule(Micros time, EventKind kind, int service,
                        int req_index, Origin origin, std::uint64_t epoch) {
  Event ev;
  ev.time = time;
  ev.seq = next_seq_++;
  ev.kind = kind;
  ev.service = service;
  ev.req_index = req_index;
  ev.origin = origin;
  ev.epoch = epoch;
  queue_.push(ev);
}

void TrialSim::emit(int service, int req_index, Micros arrival,
                    Micros response, StartKind kind) {
  records_.push_back({service, req_index, arrival, response, kind});
}

void TrialSim::touch_activity(int service, Micros now) {
  auto& st = services_[static_cast<std::size_t>(service)];
  st.last_activity = now;
  st.idle_epoch += 1;
  schedule(now + config_.cooldown, EventKind::IdleCheck, service, 0,
           Origin::Cold, st.idle_epoch);
}

Origin TrialSim::acquire_instance(int service, Micros now) {
  auto& st = services_[static_cast<std::size_t>(service)];
  if (st.phase != InstancePhase::None) {
    throw std::logic_error("acquire_instance: service " +
                           std::to_string(service) +
                           " already has an instance");
  }
  Origin origin;
  if (pool_.available > 0) {
    // Pool-first path: migrate a warm pod, then (optionally) start a
    // replacement warming toward capacity.
    pool_.available -= 1;
    origin = Origin::Pool;
    st.ready_at = now + config_.migration;
    if (config_.replenish) {
      pool_.warming += 1;
      schedule(now + config_.replenish_latency, EventKind::PoolPodReady);
    }
  } else {
    // Empty pool: original logic spawns the deficit cold.
    origin = Origin::Cold;
    st.ready_at = now + config_.cold_init;
  }
  st.phase = InstancePhase::Starting;
  st.origin = origin;
  schedule(st.ready_at, EventKind::InstanceReady, service, 0, origin);
  return origin;
}

void TrialSim::on_arrival(const Event& ev) {
  auto& st = services_[static_cast<std::size_t>(ev.service)];
  switch (st.phase) {
    case InstancePhase::Ready:
      emit(ev.service, ev.req_index, ev.time, config_.service_time,
           StartKind::Warm);
      touch_activity(ev.service, ev.time);
      break;
    case InstancePhase::Starting:
      st.pending.push_back(
          {ev.req_index, ev.time, StartKind::PendingOnStarting});
      break;
    case InstancePhase::None: {
      Origin origin = acquire_instance(ev.service, ev.time);
      StartKind kind = origin == Origin::Pool ? StartKind::PoolHit
                                              : StartKind::ColdStart;
      st.pending.push_back({ev.req_index, ev.time, kind});
      break;
    }
  }
}

void TrialSim::on_instance_ready(const Event& ev) {
  auto& st = services_[static_cast<std::size_t>(ev.service)];
  if (st.phase != InstancePhase::Starting) return;  // stale event
  st.phase = InstancePhase::Ready;
  for (const auto& req : st.pending) {
    emit(ev.service, req.req_index, req.arrival,
         (ev.time - req.arrival) + config_.service_time, req.kind);
  }
  st.pending.clear();
  touch_activity(ev.service, ev.time);
}

void TrialSim::on_idle_check(const Event& ev) {
  auto& st = services_[static_cast<std::size_t>(ev.service)];
  if (ev.epoch != st.idle_epoch) return;  // activity since scheduling
  if (st.phase != InstancePhase::Ready) return;
  if (!st.pending.empty()) return;
  if (ev.time - st.last_activity >= config_.cooldown) {
    // Scale to zero: the pod is destroyed, not returned to the pool.
    st.phase = InstancePhase::None;
  }
}

void TrialSim::on_pool_pod_ready(const Event&) {
  if (pool_.warming < 1) {
    throw std::logic_error("PoolPodReady with no warming pod");
  }
  pool_.warming -= 1;
  pool_.available += 1;
}

bool TrialSim::step() {
  if (queue_.empty()) return false;
  Event ev = queue_.top();
  queue_.pop();
  switch (ev.kind) {
    case EventKind::Arrival: on_arrival(ev); break;
    case EventKind::InstanceReady: on_instance_ready(ev); break;
    case EventKind::IdleCheck: on_idle_check(ev); break;
    case EventKind::PoolPodReady: on_pool_pod_ready(ev); break;
  }
  return true;
}

std::vector<RequestRecord> TrialSim::run() {
  while (step()) {
  }
  std::sort(records_.begin(), records_.end(),
            [](const RequestRecord& a, const RequestRecord& b) {
              if (a.service_id != b.service_id)
                return a.service_id < b.service_id;
              return a.req_index < b.req_index;
            });
  return records_;
}

std::vector<RequestRecord> run_trial_with_traces(
    const SimConfig& config, std::vector<ArrivalTrace> traces) {
  TrialSim sim(config, std::move(traces));
  return sim.run();
}

std::vector<RequestRecord> run_trial(const SimConfig& config,
                                     int trial_index) {
  validate_config(config);
  std::vector<ArrivalTrace> traces;
  traces.reserve(static_cast<std::size_t>(config.n_services));
  for (int s = 0; s < config.n_services; ++s) {
    Prng rng(derive_seed(config.base_seed,
                         static_cast<std::uint64_t>(trial_index),
                         static_cast<std::uint64_t>(s)));
    traces.push_back(
        gen_trace(s, config.requests_per_service, config.arrival, rng));
  }
  return run_trial_with_traces(config, std::move(traces));
}

std::string serialize_records(const std::vector<RequestRecord>& records) {
  std::ostringstream out;
  for (const auto& r : records) {
    out << r.service_id << ',' << r.req_index << ',' << r.arrival << ','
        << r.response << ',' << start_kind_name(r.kind) << '\n';
  }
  return out.str();
}

}  // namespace poolsim
