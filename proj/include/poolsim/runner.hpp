#pragma once

#include <optional>
#include <string>
#include <vector>

#include "poolsim/config.hpp"
#include "poolsim/metrics.hpp"

namespace poolsim {

inline constexpr const char* kToolVersion = "0.1.0";

// Thrown for runtime/I-O failures (maps to exit code 1 in the CLI).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

enum class SweepParam { PoolSize, NServices };

const char* sweep_param_name(SweepParam p);

struct SweepSpec {
  SweepParam param = SweepParam::PoolSize;
  std::vector<int> values;
};

// Command-line overrides; unset fields fall through to file/preset/defaults.
struct ConfigOverrides {
  std::optional<std::vector<int>> pool_sizes;
  std::optional<std::vector<int>> services;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> cold_init_s;
  std::optional<double> migration_s;
  std::optional<double> cooldown_s;
  std::optional<double> service_time_s;
  std::optional<double> pareto_shape;
  std::optional<double> pareto_scale;
  std::optional<bool> replenish;
};

struct ResolvedRun {
  std::string scenario;  // short | long | contention | custom
  SimConfig config;
  SweepSpec sweep;
};

// Precedence: built-in defaults < preset < config file < flags.
// config_path empty = no file. Unknown file keys raise ConfigError listing
// the valid keys; the result is validated against SimConfig invariants.
ResolvedRun load_config(const std::string& scenario,
                        const std::string& config_path,
                        const ConfigOverrides& overrides);

struct ConditionResult {
  std::string label;  // e.g. "services5_pool1"
  int sweep_value = 0;
  int n_services = 0;
  int pool_size = 0;
  bool is_baseline = false;
  PercentileReport report;
  CdfSeries cdf;  // responses pooled across trials
  // Reductions vs the pool-0 baseline at the same sweep point and seed.
  double red_p50 = 0.0, red_p95 = 0.0, red_p99 = 0.0, red_p995 = 0.0;
  std::vector<std::vector<RequestRecord>> per_trial_records;  // dump only
  SimConfig config;
};

struct SweepResult {
  std::string scenario;
  SweepParam param = SweepParam::PoolSize;
  std::vector<int> sweep_values;
  std::uint64_t base_seed = 0;
  std::vector<ConditionResult> conditions;
};

// Runs `trials` independent trials; results ordered by trial_index
// regardless of worker scheduling. jobs <= 0 means all hardware threads.
std::vector<std::vector<RequestRecord>> run_trials(const SimConfig& config,
                                                   int jobs);

// Executes every sweep point plus the pool-0 baseline needed for the
// reduction columns. keep_records retains per-trial records for dumping.
SweepResult run_sweep(const ResolvedRun& run, int jobs, bool keep_records);

struct EmitOptions {
  std::string out_dir;
  std::string format = "csv";  // csv | json
  bool dump_records = false;
};

// Writes summary, cdf, optional per-condition records, and manifest.json.
// Returns the list of written file paths.
std::vector<std::string> emit_outputs(const SweepResult& result,
                                      const EmitOptions& options);

}  // namespace poolsim
