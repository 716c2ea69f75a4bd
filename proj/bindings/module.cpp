#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "poolsim/engine.hpp"
#include "poolsim/metrics.hpp"
#include "poolsim/runner.hpp"

namespace py = pybind11;
using namespace poolsim;

namespace {

// Durations cross the boundary in seconds; the core keeps microseconds.
void def_duration(py::class_<SimConfig>& cls, const char* name,
                  Micros SimConfig::*field) {
  cls.def_property(
      name, [field](const SimConfig& c) { return micros_to_seconds(c.*field); },
      [field](SimConfig& c, double s) { c.*field = seconds_to_micros(s); });
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Discrete-event simulator of scale-to-zero autoscaling with a "
            "shared warm-instance pool";

  py::register_exception<ConfigError>(m, "ConfigError");

  py::class_<ArrivalModel>(m, "ArrivalModel")
      .def(py::init<double, double>(), py::arg("shape") = 1.1,
           py::arg("scale") = 1.0)
      .def_readwrite("shape", &ArrivalModel::shape)
      .def_readwrite("scale", &ArrivalModel::scale);

  py::class_<Prng>(m, "Prng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("next_u64", &Prng::next_u64)
      .def("next_uniform", &Prng::next_uniform);

  m.def("mix64", &mix64, py::arg("x"));
  m.def("derive_seed", &derive_seed, py::arg("base_seed"),
        py::arg("trial_index"), py::arg("service_id"));
  m.def("pareto_sample", &pareto_sample, py::arg("u"), py::arg("model"));
  m.def(
      "gen_trace",
      [](int service_id, int n, const ArrivalModel& model,
         std::uint64_t seed) {
        Prng rng(seed);
        auto trace = gen_trace(service_id, n, model, rng);
        std::vector<double> out;
        out.reserve(trace.arrivals.size());
        for (Micros t : trace.arrivals) out.push_back(micros_to_seconds(t));
        return out;
      },
      py::arg("service_id"), py::arg("n"), py::arg("model"), py::arg("seed"),
      "Arrival timestamps in seconds for one service stream");

  py::enum_<StartKind>(m, "StartKind")
      .value("WARM", StartKind::Warm)
      .value("POOL_HIT", StartKind::PoolHit)
      .value("COLD_START", StartKind::ColdStart)
      .value("PENDING_ON_STARTING", StartKind::PendingOnStarting);

  py::class_<RequestRecord>(m, "RequestRecord")
      .def_readonly("service_id", &RequestRecord::service_id)
      .def_readonly("req_index", &RequestRecord::req_index)
      .def_property_readonly(
          "arrival_s",
          [](const RequestRecord& r) { return micros_to_seconds(r.arrival); })
      .def_property_readonly(
          "response_s",
          [](const RequestRecord& r) { return micros_to_seconds(r.response); })
      .def_readonly("start_kind", &RequestRecord::kind)
      .def("__repr__", [](const RequestRecord& r) {
        return "<RequestRecord service=" + std::to_string(r.service_id) +
               " req=" + std::to_string(r.req_index) + " response_s=" +
               std::to_string(micros_to_seconds(r.response)) + " " +
               start_kind_name(r.kind) + ">";
      });

  auto cfg = py::class_<SimConfig>(m, "SimConfig");
  cfg.def(py::init<>())
      .def_readwrite("n_services", &SimConfig::n_services)
      .def_readwrite("requests_per_service", &SimConfig::requests_per_service)
      .def_readwrite("arrival", &SimConfig::arrival)
      .def_readwrite("pool_size", &SimConfig::pool_size)
      .def_readwrite("replenish", &SimConfig::replenish)
      .def_readwrite("max_instances_per_service",
                     &SimConfig::max_instances_per_service)
      .def_readwrite("trials", &SimConfig::trials)
      .def_readwrite("base_seed", &SimConfig::base_seed);
  def_duration(cfg, "cold_init_s", &SimConfig::cold_init);
  def_duration(cfg, "migration_s", &SimConfig::migration);
  def_duration(cfg, "service_time_s", &SimConfig::service_time);
  def_duration(cfg, "cooldown_s", &SimConfig::cooldown);
  def_duration(cfg, "replenish_latency_s", &SimConfig::replenish_latency);

  m.def(
      "scale_up_split",
      [](int desired_new, int available) {
        auto s = scale_up_split(desired_new, available);
        return py::make_tuple(s.from_pool, s.cold_spawns);
      },
      py::arg("desired_new"), py::arg("available"));
  m.def("run_trial", &run_trial, py::arg("config"), py::arg("trial_index"),
        "Simulate one trial; returns records ordered by (service, request)");

  m.def("percentile_nearest_rank", &percentile_nearest_rank,
        py::arg("samples"), py::arg("q"));
  m.def(
      "cdf",
      [](std::vector<double> samples) {
        std::vector<std::pair<double, double>> out;
        for (const auto& pt : cdf(std::move(samples))) {
          out.emplace_back(pt.value, pt.fraction);
        }
        return out;
      },
      py::arg("samples"));
  m.def("reduction", &reduction, py::arg("baseline"), py::arg("treated"));
  m.def(
      "aggregate",
      [](const std::vector<double>& values) {
        auto a = aggregate(values);
        return py::make_tuple(a.mean, a.sample_std);
      },
      py::arg("values"), "Returns (mean, sample_std)");

  m.def(
      "scenario_config",
      [](const std::string& scenario) {
        return load_config(scenario, "", {}).config;
      },
      py::arg("scenario"),
      "Resolved SimConfig for a named preset (short, long, contention)");

  m.attr("__version__") = kToolVersion;
}
