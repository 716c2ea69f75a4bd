// poolsim: discrete-event simulator of scale-to-zero autoscaling with a
// shared warm-instance pool.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "poolsim/runner.hpp"

namespace {

int run_command(const std::string& scenario, const std::string& config_path,
                const poolsim::ConfigOverrides& overrides,
                const poolsim::EmitOptions& emit, int jobs) {
  poolsim::ResolvedRun run =
      poolsim::load_config(scenario, config_path, overrides);
  poolsim::SweepResult result =
      poolsim::run_sweep(run, jobs, emit.dump_records);
  auto files = poolsim::emit_outputs(result, emit);
  for (const auto& f : files) std::cout << "wrote " << f << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serverless warm-pool autoscaling simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a scenario sweep");

  std::string scenario = "custom";
  std::string config_path;
  std::string out_dir = "out";
  std::string format = "csv";
  std::string replenish = "";
  bool dump_records = false;
  int jobs = 0;
  std::vector<int> pool_sizes;
  std::vector<int> services;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> cold_init, migration, cooldown, service_time;
  std::optional<double> pareto_shape, pareto_scale;

  run->add_option("--scenario", scenario,
                  "Preset: short, long, contention or custom")
      ->check(CLI::IsMember({"short", "long", "contention", "custom"}));
  run->add_option("--config", config_path, "Flat JSON config file");
  run->add_option("--pool-size", pool_sizes,
                  "Pool size(s); a comma list sweeps the pool axis")
      ->delimiter(',');
  run->add_option("--services", services,
                  "Service count(s); a comma list sweeps the service axis")
      ->delimiter(',');
  run->add_option("--trials", trials, "Independent trials per condition");
  run->add_option("--seed", seed, "Base seed (u64)");
  run->add_option("--cold-init", cold_init, "Cold-start init latency (s)");
  run->add_option("--migration", migration, "Pool migration latency (s)");
  run->add_option("--cooldown", cooldown, "Scale-to-zero idle cooldown (s)");
  run->add_option("--service-time", service_time,
                  "Warm per-request service time (s)");
  run->add_option("--pareto-shape", pareto_shape, "Pareto shape alpha");
  run->add_option("--pareto-scale", pareto_scale, "Pareto scale x_m (s)");
  run->add_option("--replenish", replenish, "Pool replenishment: on or off")
      ->check(CLI::IsMember({"on", "off"}));
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  run->add_flag("--dump-records", dump_records,
                "Write per-request record tables");
  run->add_option("--jobs", jobs, "Worker threads (default: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    // Bad flags are configuration errors; --help stays 0.
    return code == 0 ? 0 : 2;
  }

  poolsim::ConfigOverrides overrides;
  if (!pool_sizes.empty()) overrides.pool_sizes = pool_sizes;
  if (!services.empty()) overrides.services = services;
  overrides.trials = trials;
  overrides.seed = seed;
  overrides.cold_init_s = cold_init;
  overrides.migration_s = migration;
  overrides.cooldown_s = cooldown;
  overrides.service_time_s = service_time;
  overrides.pareto_shape = pareto_shape;
  overrides.pareto_scale = pareto_scale;
  if (replenish == "on") overrides.replenish = true;
  if (replenish == "off") overrides.replenish = false;

  poolsim::EmitOptions emit;
  emit.out_dir = out_dir;
  emit.format = format;
  emit.dump_records = dump_records;

  try {
    return run_command(scenario, config_path, overrides, emit, jobs);
  } catch (const poolsim::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
