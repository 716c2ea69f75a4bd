#include <random>
#include <vector>

#include "doctest.h"
#include "poolsim/engine.hpp"
#include "reference_sim.hpp"

using namespace poolsim;

namespace {

constexpr Micros kSec = 1'000'000;

SimConfig base_config() {
  SimConfig c;
  c.n_services = 1;
  c.requests_per_service = 2;
  c.cold_init = 7 * kSec;
  c.migration = 2 * kSec;
  c.service_time = 0;
  c.cooldown = 30 * kSec;
  c.pool_size = 0;
  c.replenish = false;
  return c;
}

ArrivalTrace trace(int service, std::vector<Micros> arrivals) {
  return ArrivalTrace{service, std::move(arrivals)};
}

}  // namespace

TEST_CASE("scale_up_split deficit rule") {
  CHECK(scale_up_split(3, 2).from_pool == 2);
  CHECK(scale_up_split(3, 2).cold_spawns == 1);
  CHECK(scale_up_split(0, 5).from_pool == 0);
  CHECK(scale_up_split(0, 5).cold_spawns == 0);
  CHECK(scale_up_split(2, 0).from_pool == 0);
  CHECK(scale_up_split(2, 0).cold_spawns == 2);
  // desired is always covered, never over-drawing the pool
  for (int d = 0; d <= 8; ++d) {
    for (int a = 0; a <= 8; ++a) {
      auto s = scale_up_split(d, a);
      CHECK(s.from_pool + s.cold_spawns == d);
      CHECK(s.from_pool <= a);
      CHECK(s.cold_spawns >= 0);
    }
  }
}

TEST_CASE("hand trace: cold then warm") {
  auto cfg = base_config();
  auto recs =
      run_trial_with_traces(cfg, {trace(0, {10 * kSec, 20 * kSec})});
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].response == 7 * kSec);
  CHECK(recs[0].kind == StartKind::ColdStart);
  CHECK(recs[1].response == 0);
  CHECK(recs[1].kind == StartKind::Warm);
}

TEST_CASE("hand trace: cooldown expiry forces a second cold start") {
  // Ready at 17, idle expires at 47, second arrival at 50.
  auto cfg = base_config();
  auto recs =
      run_trial_with_traces(cfg, {trace(0, {10 * kSec, 50 * kSec})});
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].response == 7 * kSec);
  CHECK(recs[0].kind == StartKind::ColdStart);
  CHECK(recs[1].response == 7 * kSec);
  CHECK(recs[1].kind == StartKind::ColdStart);
}

TEST_CASE("hand trace: pool hit then drained pool") {
  auto cfg = base_config();
  cfg.pool_size = 1;
  auto recs =
      run_trial_with_traces(cfg, {trace(0, {10 * kSec, 50 * kSec})});
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].response == 2 * kSec);
  CHECK(recs[0].kind == StartKind::PoolHit);
  CHECK(recs[1].response == 7 * kSec);
  CHECK(recs[1].kind == StartKind::ColdStart);
}

TEST_CASE("hand trace: queue drains in arrival order at ready time") {
  auto cfg = base_config();
  cfg.requests_per_service = 3;
  // Cold start at 10, ready at 17; pendings arrived 5, 3, 1 s before ready.
  auto recs = run_trial_with_traces(
      cfg, {trace(0, {12 * kSec, 14 * kSec, 16 * kSec})});
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].response == 7 * kSec);
  CHECK(recs[0].kind == StartKind::ColdStart);
  CHECK(recs[1].response == 5 * kSec);
  CHECK(recs[1].kind == StartKind::PendingOnStarting);
  CHECK(recs[2].response == 3 * kSec);
  CHECK(recs[2].kind == StartKind::PendingOnStarting);
}

TEST_CASE("hand trace: simultaneous scale-up contends FIFO for the pool") {
  auto cfg = base_config();
  cfg.n_services = 2;
  cfg.requests_per_service = 1;
  cfg.pool_size = 1;
  auto recs = run_trial_with_traces(
      cfg, {trace(0, {5 * kSec}), trace(1, {5 * kSec})});
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].service_id == 0);
  CHECK(recs[0].kind == StartKind::PoolHit);
  CHECK(recs[0].response == 2 * kSec);
  CHECK(recs[1].service_id == 1);
  CHECK(recs[1].kind == StartKind::ColdStart);
  CHECK(recs[1].response == 7 * kSec);
}

TEST_CASE("hand trace: replenish restores the pool after the latency") {
  auto cfg = base_config();
  cfg.n_services = 2;
  cfg.requests_per_service = 1;
  cfg.pool_size = 1;
  cfg.replenish = true;
  cfg.replenish_latency = 7 * kSec;
  // Pool grant at 5 starts a replacement warming until 12; the second
  // service scales up at 20 and hits the replenished pod.
  auto recs = run_trial_with_traces(
      cfg, {trace(0, {5 * kSec}), trace(1, {20 * kSec})});
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].kind == StartKind::PoolHit);
  CHECK(recs[1].kind == StartKind::PoolHit);
  CHECK(recs[1].response == 2 * kSec);

  cfg.replenish = false;
  auto drained = run_trial_with_traces(
      cfg, {trace(0, {5 * kSec}), trace(1, {20 * kSec})});
  CHECK(drained[1].kind == StartKind::ColdStart);
  CHECK(drained[1].response == 7 * kSec);
}

TEST_CASE("stale idle check is a no-op after new activity") {
  auto cfg = base_config();
  cfg.requests_per_service = 2;
  // Ready at 17, check scheduled for 47; warm arrival at 30 re-arms the
  // timer, so the 47 check must not kill the instance.
  TrialSim sim(cfg, {trace(0, {10 * kSec, 30 * kSec})});
  auto recs = sim.run();
  REQUIRE(recs.size() == 2);
  CHECK(recs[1].kind == StartKind::Warm);
  // Final expiry at 60 did run: back to scale-zero.
  CHECK(sim.service(0).phase == InstancePhase::None);
}

TEST_CASE("idle check exactly at cooldown boundary destroys the instance") {
  auto cfg = base_config();
  cfg.requests_per_service = 1;
  TrialSim sim(cfg, {trace(0, {10 * kSec})});
  auto recs = sim.run();
  REQUIRE(recs.size() == 1);
  CHECK(sim.service(0).phase == InstancePhase::None);
  CHECK(sim.pool().available == 0);
}

TEST_CASE("arrival exactly at expiry time is served warm") {
  auto cfg = base_config();
  // Ready at 17; expiry check and arrival both at 47: arrival wins the tie.
  auto recs =
      run_trial_with_traces(cfg, {trace(0, {10 * kSec, 47 * kSec})});
  REQUIRE(recs.size() == 2);
  CHECK(recs[1].kind == StartKind::Warm);
  CHECK(recs[1].response == 0);
}

TEST_CASE("acquire_instance on an existing instance aborts the trial") {
  auto cfg = base_config();
  cfg.requests_per_service = 1;
  TrialSim sim(cfg, {trace(0, {10 * kSec})});
  sim.step();  // arrival -> Starting
  CHECK_THROWS_AS(sim.acquire_instance(0, 11 * kSec), std::logic_error);
}

TEST_CASE("pool pod ready without a warming pod is an invariant violation") {
  auto cfg = base_config();
  cfg.requests_per_service = 1;
  TrialSim sim(cfg, {trace(0, {10 * kSec})});
  Event ev;
  ev.kind = EventKind::PoolPodReady;
  CHECK_THROWS_AS(sim.on_pool_pod_ready(ev), std::logic_error);
}

TEST_CASE("pool accounting across grant and replenish") {
  auto cfg = base_config();
  cfg.pool_size = 2;
  cfg.replenish = true;
  cfg.replenish_latency = 7 * kSec;
  cfg.requests_per_service = 1;
  TrialSim sim(cfg, {trace(0, {10 * kSec})});
  CHECK(sim.pool().available == 2);
  sim.step();  // arrival: grant + warming
  CHECK(sim.pool().available == 1);
  CHECK(sim.pool().warming == 1);
  CHECK(sim.pool().capacity == 2);
  while (sim.step()) {
    CHECK(sim.pool().available >= 0);
    CHECK(sim.pool().warming >= 0);
    CHECK(sim.pool().available + sim.pool().warming <= sim.pool().capacity);
  }
  CHECK(sim.pool().available == 2);
  CHECK(sim.pool().warming == 0);
}

TEST_CASE("invalid configs are rejected before any event runs") {
  auto cfg = base_config();
  cfg.pool_size = -1;
  CHECK_THROWS_AS(run_trial(cfg, 0), ConfigError);
  cfg = base_config();
  cfg.n_services = 0;
  CHECK_THROWS_AS(run_trial(cfg, 0), ConfigError);
  cfg = base_config();
  cfg.max_instances_per_service = 2;
  CHECK_THROWS_AS(run_trial(cfg, 0), ConfigError);
  cfg = base_config();
  cfg.cold_init = -1;
  CHECK_THROWS_AS(run_trial(cfg, 0), ConfigError);
}

TEST_CASE("trial properties: conservation, floor, kind/latency coupling") {
  std::mt19937 gen(20240817);
  std::uniform_real_distribution<double> lat(0.5, 20.0);
  std::uniform_int_distribution<int> nsvc(1, 3);
  std::uniform_int_distribution<int> nreq(1, 40);
  std::uniform_int_distribution<int> pool(0, 2);
  for (int iter = 0; iter < 40; ++iter) {
    SimConfig cfg;
    cfg.n_services = nsvc(gen);
    cfg.requests_per_service = nreq(gen);
    cfg.arrival = {1.1, 1.0};
    cfg.cold_init = seconds_to_micros(lat(gen));
    cfg.migration = seconds_to_micros(lat(gen));
    cfg.cooldown = seconds_to_micros(lat(gen));
    cfg.service_time = seconds_to_micros(lat(gen) / 10.0);
    cfg.pool_size = pool(gen);
    cfg.replenish = iter % 2 == 0;
    cfg.replenish_latency = cfg.cold_init;
    cfg.base_seed = 1000 + static_cast<std::uint64_t>(iter);

    auto recs = run_trial(cfg, iter);
    CHECK(recs.size() == static_cast<std::size_t>(cfg.n_services) *
                             static_cast<std::size_t>(
                                 cfg.requests_per_service));
    int expect_svc = 0, expect_req = 0;
    for (const auto& r : recs) {
      CHECK(r.service_id == expect_svc);
      CHECK(r.req_index == expect_req);
      if (++expect_req == cfg.requests_per_service) {
        expect_req = 0;
        ++expect_svc;
      }
      CHECK(r.response >= cfg.service_time);
      if (r.kind == StartKind::Warm) {
        CHECK(r.response == cfg.service_time);
      } else if (r.kind == StartKind::ColdStart) {
        CHECK(r.response == cfg.cold_init + cfg.service_time);
      } else if (r.kind == StartKind::PoolHit) {
        CHECK(r.response == cfg.migration + cfg.service_time);
      }
    }
  }
}

TEST_CASE("run_trial is deterministic") {
  SimConfig cfg;
  cfg.n_services = 3;
  cfg.requests_per_service = 200;
  cfg.pool_size = 1;
  cfg.replenish = true;
  cfg.cold_init = 7 * kSec;
  cfg.replenish_latency = 7 * kSec;
  cfg.migration = 2 * kSec;
  cfg.cooldown = 30 * kSec;
  cfg.base_seed = 77;
  auto a = run_trial(cfg, 3);
  auto b = run_trial(cfg, 3);
  CHECK(serialize_records(a) == serialize_records(b));
  auto c = run_trial(cfg, 4);
  CHECK(serialize_records(a) != serialize_records(c));
}

TEST_CASE("first-start dominance for pool vs no pool") {
  // Same seed, pool 0 vs pool 1: the first request of the trial improves
  // by exactly cold_init - migration.
  SimConfig cfg;
  cfg.n_services = 2;
  cfg.requests_per_service = 50;
  cfg.cold_init = 7 * kSec;
  cfg.migration = 2 * kSec;
  cfg.cooldown = 30 * kSec;
  cfg.base_seed = 5150;
  cfg.pool_size = 0;
  auto no_pool = run_trial(cfg, 0);
  cfg.pool_size = 1;
  auto with_pool = run_trial(cfg, 0);
  REQUIRE(no_pool.size() == with_pool.size());
  // Earliest arrival across the whole trial.
  std::size_t first = 0;
  for (std::size_t i = 1; i < no_pool.size(); ++i) {
    if (no_pool[i].arrival < no_pool[first].arrival) first = i;
  }
  CHECK(no_pool[first].kind == StartKind::ColdStart);
  CHECK(with_pool[first].kind == StartKind::PoolHit);
  CHECK(no_pool[first].response - with_pool[first].response == 5 * kSec);
}

TEST_CASE("pool off matches the no-pool baseline oracle") {
  std::mt19937 gen(99);
  std::uniform_real_distribution<double> lat(0.5, 40.0);
  for (int iter = 0; iter < 20; ++iter) {
    SimConfig cfg;
    cfg.n_services = 1 + iter % 3;
    cfg.requests_per_service = 30;
    cfg.arrival = {1.2, 0.8};
    cfg.cold_init = seconds_to_micros(lat(gen));
    cfg.migration = seconds_to_micros(lat(gen));
    cfg.cooldown = seconds_to_micros(lat(gen));
    cfg.service_time = seconds_to_micros(lat(gen) / 20.0);
    cfg.pool_size = 0;
    cfg.base_seed = 31337 + static_cast<std::uint64_t>(iter);
    auto traces = poolsim_test::traces_for_trial(cfg, iter);
    auto engine = run_trial_with_traces(cfg, traces);
    auto oracle = poolsim_test::ref_run_nopool(cfg, traces);
    CHECK(serialize_records(engine) == serialize_records(oracle));
  }
}
