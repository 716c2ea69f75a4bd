#pragma once

#include <cstdint>
#include <deque>
#include <queue>
#include <string>
#include <vector>

#include "poolsim/config.hpp"
#include "poolsim/time.hpp"
#include "poolsim/workload.hpp"

namespace poolsim {

enum class StartKind { Warm, PoolHit, ColdStart, PendingOnStarting };

// Literal strings used in the records file schema.
const char* start_kind_name(StartKind kind);

struct RequestRecord {
  int service_id = 0;
  int req_index = 0;
  Micros arrival = 0;
  Micros response = 0;
  StartKind kind = StartKind::Warm;
};

enum class EventKind { Arrival, InstanceReady, IdleCheck, PoolPodReady };
enum class Origin { Cold, Pool };

// Totally ordered by (time, seq); seq is the insertion counter so ties
// resolve in scheduling order.
struct Event {
  Micros time = 0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::Arrival;
  int service = 0;
  int req_index = 0;          // Arrival
  Origin origin = Origin::Cold;  // InstanceReady
  std::uint64_t epoch = 0;    // IdleCheck
};

// Deficit rule: satisfy scale-up from the pool first, cold-start the rest.
struct ScaleUpSplit {
  int from_pool = 0;
  int cold_spawns = 0;
};
ScaleUpSplit scale_up_split(int desired_new, int available);

enum class InstancePhase { None, Starting, Ready };

struct PendingRequest {
  int req_index = 0;
  Micros arrival = 0;
  StartKind kind = StartKind::PendingOnStarting;
};

// Per-service 0<->1 desired-instance state machine.
struct ServiceState {
  InstancePhase phase = InstancePhase::None;
  Micros ready_at = 0;        // valid while Starting
  Origin origin = Origin::Cold;
  std::deque<PendingRequest> pending;
  Micros last_activity = 0;
  std::uint64_t idle_epoch = 0;  // invalidates stale IdleCheck events
};

// Shared warm pool occupancy. available + warming <= capacity always.
struct PoolState {
  int available = 0;
  int warming = 0;
  int capacity = 0;
};

// One trial: single-threaded, deterministic event-driven simulation.
// The per-event handlers are public so the state machine is directly
// testable without running a whole trial.
class TrialSim {
 public:
  TrialSim(const SimConfig& config, std::vector<ArrivalTrace> traces);

  // Drains the event queue and returns records sorted by
  // (service_id, req_index).
  std::vector<RequestRecord> run();

  void on_arrival(const Event& ev);
  Origin acquire_instance(int service, Micros now);
  void on_instance_ready(const Event& ev);
  void on_idle_check(const Event& ev);
  void on_pool_pod_ready(const Event& ev);

  void schedule(Micros time, EventKind kind, int service = 0,
                int req_index = 0, Origin origin = Origin::Cold,
                std::uint64_t epoch = 0);

  const PoolState& pool() const { return pool_; }
  const ServiceState& service(int id) const {
    return services_[static_cast<std::size_t>(id)];
  }
  const std::vector<RequestRecord>& records() const { return records_; }

  // Processes a single event; exposed for stepwise tests.
  bool step();

 private:
  void emit(int service, int req_index, Micros arrival, Micros response,
            StartKind kind);
  void touch_activity(int service, Micros now);

  SimConfig config_;
  std::vector<ServiceState> services_;
  PoolState pool_;
  std::vector<RequestRecord> records_;

  struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
  std::uint64_t next_seq_ = 0;
};

// Deterministic full trial: generates traces with
// derive_seed(base_seed, trial_index, service_id) and simulates them.
std::vector<RequestRecord> run_trial(const SimConfig& config, int trial_index);

// Same engine on caller-supplied traces (hand-trace tests, replay).
std::vector<RequestRecord> run_trial_with_traces(
    const SimConfig& config, std::vector<ArrivalTrace> traces);

// Stable serialization of a record list; used for byte-equality checks.
std::string serialize_records(const std::vector<RequestRecord>& records);

}  // namespace poolsim
