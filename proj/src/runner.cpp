#include "poolsim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace poolsim {
namespace {

using nlohmann::json;

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", v);
  return buf;
}

const std::vector<std::string> kConfigKeys = {
    "n_services",     "requests_per_service",
    "pareto_shape",   "pareto_scale",
    "cold_init_s",    "migration_s",
    "service_time_s", "cooldown_s",
    "pool_size",      "replenish",
    "replenish_latency_s", "max_instances_per_service",
    "trials",         "base_seed"};

void apply_file(SimConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " +
                      e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config file must be a flat JSON object of key/value "
                      "pairs: " + path);
  }
  for (const auto& [key, value] : doc.items()) {
    if (key == "n_services") config.n_services = value.get<int>();
    else if (key == "requests_per_service")
      config.requests_per_service = value.get<int>();
    else if (key == "pareto_shape") config.arrival.shape = value.get<double>();
    else if (key == "pareto_scale") config.arrival.scale = value.get<double>();
    else if (key == "cold_init_s")
      config.cold_init = seconds_to_micros(value.get<double>());
    else if (key == "migration_s")
      config.migration = seconds_to_micros(value.get<double>());
    else if (key == "service_time_s")
      config.service_time = seconds_to_micros(value.get<double>());
    else if (key == "cooldown_s")
      config.cooldown = seconds_to_micros(value.get<double>());
    else if (key == "pool_size") config.pool_size = value.get<int>();
    else if (key == "replenish") {
      if (value.is_boolean()) config.replenish = value.get<bool>();
      else if (value == "on") config.replenish = true;
      else if (value == "off") config.replenish = false;
      else throw ConfigError("replenish must be true/false or \"on\"/\"off\"");
    } else if (key == "replenish_latency_s") {
      config.replenish_latency = seconds_to_micros(value.get<double>());
    } else if (key == "max_instances_per_service")
      config.max_instances_per_service = value.get<int>();
    else if (key == "trials") config.trials = value.get<int>();
    else if (key == "base_seed") config.base_seed = value.get<std::uint64_t>();
    else {
      std::ostringstream msg;
      msg << "unknown config key \"" << key << "\"; valid keys:";
      for (const auto& k : kConfigKeys) msg << ' ' << k;
      throw ConfigError(msg.str());
    }
  }
}

SimConfig paper_base_config() {
  SimConfig config;
  config.n_services = 5;
  config.requests_per_service = 1000;
  config.arrival = {1.1, 1.0};
  config.migration = 2'000'000;
  config.trials = 100;
  return config;
}

}  // namespace

const char* sweep_param_name(SweepParam p) {
  return p == SweepParam::PoolSize ? "pool_size" : "n_services";
}

ResolvedRun load_config(const std::string& scenario,
                        const std::string& config_path,
                        const ConfigOverrides& overrides) {
  ResolvedRun run;
  run.scenario = scenario.empty() ? "custom" : scenario;

  SimConfig& config = run.config;
  if (run.scenario == "short") {
    config = paper_base_config();
    config.cold_init = 7'000'000;
    config.cooldown = 30'000'000;
    run.sweep = {SweepParam::PoolSize, {0, 1}};
  } else if (run.scenario == "long") {
    config = paper_base_config();
    config.cold_init = 32'000'000;
    config.cooldown = 60'000'000;
    run.sweep = {SweepParam::PoolSize, {0, 1}};
  } else if (run.scenario == "contention") {
    config = paper_base_config();
    config.cold_init = 32'000'000;
    config.cooldown = 60'000'000;
    config.pool_size = 1;
    run.sweep = {SweepParam::NServices, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}};
  } else if (run.scenario == "custom") {
    run.sweep = {SweepParam::PoolSize, {}};  // filled after resolution
  } else {
    throw ConfigError("unknown scenario \"" + run.scenario +
                      "\"; expected short, long, contention or custom");
  }

  if (!config_path.empty()) {
    apply_file(config, config_path);
  }

  const auto& ov = overrides;
  if (ov.trials) config.trials = *ov.trials;
  if (ov.seed) config.base_seed = *ov.seed;
  if (ov.cold_init_s) config.cold_init = seconds_to_micros(*ov.cold_init_s);
  if (ov.migration_s) config.migration = seconds_to_micros(*ov.migration_s);
  if (ov.cooldown_s) config.cooldown = seconds_to_micros(*ov.cooldown_s);
  if (ov.service_time_s)
    config.service_time = seconds_to_micros(*ov.service_time_s);
  if (ov.pareto_shape) config.arrival.shape = *ov.pareto_shape;
  if (ov.pareto_scale) config.arrival.scale = *ov.pareto_scale;
  if (ov.replenish) config.replenish = *ov.replenish;

  bool multi_pool = ov.pool_sizes && ov.pool_sizes->size() > 1;
  bool multi_services = ov.services && ov.services->size() > 1;
  if (multi_pool && multi_services) {
    throw ConfigError("cannot sweep pool_size and n_services together");
  }
  if (ov.services) {
    if (multi_services) {
      run.sweep = {SweepParam::NServices, *ov.services};
    } else {
      config.n_services = ov.services->front();
      if (run.sweep.param == SweepParam::NServices)
        run.sweep.values = {config.n_services};
    }
  }
  if (ov.pool_sizes) {
    if (multi_pool) {
      if (run.sweep.param == SweepParam::NServices && multi_services) {
        throw ConfigError("cannot sweep pool_size and n_services together");
      }
      run.sweep = {SweepParam::PoolSize, *ov.pool_sizes};
    } else {
      config.pool_size = ov.pool_sizes->front();
      if (run.sweep.param == SweepParam::PoolSize && !run.sweep.values.empty())
        run.sweep.values = {config.pool_size};
    }
  }

  if (run.sweep.values.empty()) {
    run.sweep.values = {run.sweep.param == SweepParam::PoolSize
                            ? config.pool_size
                            : config.n_services};
  }
  for (int v : run.sweep.values) {
    if (v < 0 || (run.sweep.param == SweepParam::NServices && v < 1)) {
      throw ConfigError(std::string("invalid sweep value for ") +
                        sweep_param_name(run.sweep.param) + ": " +
                        std::to_string(v));
    }
  }

  validate_config(config);
  return run;
}

std::vector<std::vector<RequestRecord>> run_trials(const SimConfig& config,
                                                   int jobs) {
  validate_config(config);
  const int trials = config.trials;
  std::vector<std::vector<RequestRecord>> results(
      static_cast<std::size_t>(trials));
  if (jobs <= 0) {
    jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
  }
  jobs = std::min(jobs, trials);
  if (jobs == 1) {
    for (int t = 0; t < trials; ++t) {
      results[static_cast<std::size_t>(t)] = run_trial(config, t);
    }
    return results;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&]() {
      for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
        results[static_cast<std::size_t>(t)] = run_trial(config, t);
      }
    });
  }
  for (auto& th : workers) th.join();
  return results;
}

namespace {

ConditionResult evaluate_condition(const SimConfig& config, int sweep_value,
                                   bool is_baseline, int jobs,
                                   bool keep_records) {
  ConditionResult cond;
  cond.sweep_value = sweep_value;
  cond.n_services = config.n_services;
  cond.pool_size = config.pool_size;
  cond.is_baseline = is_baseline;
  cond.config = config;
  cond.label = "services" + std::to_string(config.n_services) + "_pool" +
               std::to_string(config.pool_size);

  auto records = run_trials(config, jobs);
  cond.report = percentile_report(records);
  std::vector<double> pooled;
  pooled.reserve(records.size() * records.front().size());
  for (const auto& trial : records) {
    for (const auto& r : trial) pooled.push_back(micros_to_seconds(r.response));
  }
  cond.cdf = cdf(std::move(pooled));
  if (keep_records) cond.per_trial_records = std::move(records);
  return cond;
}

// Reduction of the baseline-vs-treated aggregate means; a baseline mean of
// zero leaves no startup penalty to reduce, reported as 0.
double safe_reduction(double baseline_mean, double treated_mean) {
  if (!(baseline_mean > 0.0)) return 0.0;
  return reduction(baseline_mean, treated_mean);
}

void apply_reductions(ConditionResult& cond, const ConditionResult& base) {
  cond.red_p50 = safe_reduction(base.report.p50.mean, cond.report.p50.mean);
  cond.red_p95 = safe_reduction(base.report.p95.mean, cond.report.p95.mean);
  cond.red_p99 = safe_reduction(base.report.p99.mean, cond.report.p99.mean);
  cond.red_p995 =
      safe_reduction(base.report.p995.mean, cond.report.p995.mean);
}

}  // namespace

SweepResult run_sweep(const ResolvedRun& run, int jobs, bool keep_records) {
  validate_config(run.config);
  SweepResult out;
  out.scenario = run.scenario;
  out.param = run.sweep.param;
  out.sweep_values = run.sweep.values;
  out.base_seed = run.config.base_seed;

  if (run.sweep.param == SweepParam::PoolSize) {
    // One baseline serves every pool-size point: only pool_size varies.
    SimConfig base_config = run.config;
    base_config.pool_size = 0;
    ConditionResult baseline =
        evaluate_condition(base_config, 0, true, jobs, keep_records);
    apply_reductions(baseline, baseline);
    bool baseline_listed =
        std::find(run.sweep.values.begin(), run.sweep.values.end(), 0) !=
        run.sweep.values.end();
    if (!baseline_listed) out.conditions.push_back(baseline);
    for (int value : run.sweep.values) {
      if (value == 0) {
        out.conditions.push_back(baseline);
        continue;
      }
      SimConfig config = run.config;
      config.pool_size = value;
      ConditionResult cond =
          evaluate_condition(config, value, false, jobs, keep_records);
      apply_reductions(cond, baseline);
      out.conditions.push_back(std::move(cond));
    }
  } else {
    for (int value : run.sweep.values) {
      SimConfig base_config = run.config;
      base_config.n_services = value;
      base_config.pool_size = 0;
      ConditionResult baseline =
          evaluate_condition(base_config, value, true, jobs, keep_records);
      apply_reductions(baseline, baseline);
      out.conditions.push_back(baseline);
      if (run.config.pool_size > 0) {
        SimConfig config = run.config;
        config.n_services = value;
        ConditionResult cond =
            evaluate_condition(config, value, false, jobs, keep_records);
        apply_reductions(cond, out.conditions.back());
        out.conditions.push_back(std::move(cond));
      }
    }
  }
  return out;
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

struct SummaryRow {
  std::string percentile;
  const Aggregate* agg;
  double red;
};

std::vector<SummaryRow> summary_rows(const ConditionResult& c) {
  return {{"p50", &c.report.p50, c.red_p50},
          {"p95", &c.report.p95, c.red_p95},
          {"p99", &c.report.p99, c.red_p99},
          {"p99.5", &c.report.p995, c.red_p995}};
}

std::string render_summary_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "scenario,sweep_param,sweep_value,pool_size,percentile,mean_s,"
         "std_s,reduction_vs_nopool\n";
  for (const auto& cond : result.conditions) {
    for (const auto& row : summary_rows(cond)) {
      out << result.scenario << ',' << sweep_param_name(result.param) << ','
          << cond.sweep_value << ',' << cond.pool_size << ','
          << row.percentile << ',' << fmt6(row.agg->mean) << ','
          << fmt6(row.agg->sample_std) << ',' << fmt6(row.red) << '\n';
    }
  }
  return out.str();
}

std::string render_summary_json(const SweepResult& result) {
  std::ostringstream out;
  out << "[\n";
  bool first = true;
  for (const auto& cond : result.conditions) {
    for (const auto& row : summary_rows(cond)) {
      if (!first) out << ",\n";
      first = false;
      out << "  {\"scenario\": \"" << result.scenario
          << "\", \"sweep_param\": \"" << sweep_param_name(result.param)
          << "\", \"sweep_value\": " << cond.sweep_value
          << ", \"pool_size\": " << cond.pool_size << ", \"percentile\": \""
          << row.percentile << "\", \"mean_s\": " << fmt6(row.agg->mean)
          << ", \"std_s\": " << fmt6(row.agg->sample_std)
          << ", \"reduction_vs_nopool\": " << fmt6(row.red) << "}";
    }
  }
  out << "\n]\n";
  return out.str();
}

std::string render_cdf_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "condition,value_s,fraction\n";
  for (const auto& cond : result.conditions) {
    for (const auto& pt : cond.cdf) {
      out << cond.label << ',' << fmt6(pt.value) << ',' << fmt9(pt.fraction)
          << '\n';
    }
  }
  return out.str();
}

std::string render_cdf_json(const SweepResult& result) {
  std::ostringstream out;
  out << "[\n";
  bool first = true;
  for (const auto& cond : result.conditions) {
    for (const auto& pt : cond.cdf) {
      if (!first) out << ",\n";
      first = false;
      out << "  {\"condition\": \"" << cond.label
          << "\", \"value_s\": " << fmt6(pt.value)
          << ", \"fraction\": " << fmt9(pt.fraction) << "}";
    }
  }
  out << "\n]\n";
  return out.str();
}

std::string render_records_csv(const ConditionResult& cond) {
  std::ostringstream out;
  out << "trial,service_id,req_index,arrival_s,response_s,start_kind\n";
  for (std::size_t t = 0; t < cond.per_trial_records.size(); ++t) {
    for (const auto& r : cond.per_trial_records[t]) {
      out << t << ',' << r.service_id << ',' << r.req_index << ','
          << fmt6(micros_to_seconds(r.arrival)) << ','
          << fmt6(micros_to_seconds(r.response)) << ','
          << start_kind_name(r.kind) << '\n';
    }
  }
  return out.str();
}

std::string render_records_json(const ConditionResult& cond) {
  std::ostringstream out;
  out << "[\n";
  bool first = true;
  for (std::size_t t = 0; t < cond.per_trial_records.size(); ++t) {
    for (const auto& r : cond.per_trial_records[t]) {
      if (!first) out << ",\n";
      first = false;
      out << "  {\"trial\": " << t << ", \"service_id\": " << r.service_id
          << ", \"req_index\": " << r.req_index << ", \"arrival_s\": "
          << fmt6(micros_to_seconds(r.arrival)) << ", \"response_s\": "
          << fmt6(micros_to_seconds(r.response)) << ", \"start_kind\": \""
          << start_kind_name(r.kind) << "\"}";
    }
  }
  out << "\n]\n";
  return out.str();
}

std::string render_config_json(const SimConfig& c, const std::string& indent) {
  std::ostringstream out;
  out << "{\n"
      << indent << "  \"n_services\": " << c.n_services << ",\n"
      << indent << "  \"requests_per_service\": " << c.requests_per_service
      << ",\n"
      << indent << "  \"pareto_shape\": " << fmt6(c.arrival.shape) << ",\n"
      << indent << "  \"pareto_scale\": " << fmt6(c.arrival.scale) << ",\n"
      << indent << "  \"cold_init_s\": " << fmt6(micros_to_seconds(c.cold_init))
      << ",\n"
      << indent << "  \"migration_s\": " << fmt6(micros_to_seconds(c.migration))
      << ",\n"
      << indent << "  \"service_time_s\": "
      << fmt6(micros_to_seconds(c.service_time)) << ",\n"
      << indent << "  \"cooldown_s\": " << fmt6(micros_to_seconds(c.cooldown))
      << ",\n"
      << indent << "  \"pool_size\": " << c.pool_size << ",\n"
      << indent << "  \"replenish\": " << (c.replenish ? "true" : "false")
      << ",\n"
      << indent << "  \"replenish_latency_s\": "
      << fmt6(micros_to_seconds(c.replenish_latency)) << ",\n"
      << indent << "  \"max_instances_per_service\": "
      << c.max_instances_per_service << ",\n"
      << indent << "  \"trials\": " << c.trials << ",\n"
      << indent << "  \"base_seed\": " << c.base_seed << "\n"
      << indent << "}";
  return out.str();
}

}  // namespace

std::vector<std::string> emit_outputs(const SweepResult& result,
                                      const EmitOptions& options) {
  namespace fs = std::filesystem;
  if (result.conditions.empty()) {
    throw IoError("emit_outputs: no conditions to write");
  }
  if (options.format != "csv" && options.format != "json") {
    throw ConfigError("format must be csv or json, got " + options.format);
  }
  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + options.out_dir);

  const std::string ext = "." + options.format;
  const bool csv = options.format == "csv";
  std::vector<std::string> written;
  std::vector<std::string> names;

  auto put = [&](const std::string& name, const std::string& content) {
    std::string path = (fs::path(options.out_dir) / name).string();
    write_file(path, content);
    written.push_back(path);
    names.push_back(name);
  };

  put("summary" + ext,
      csv ? render_summary_csv(result) : render_summary_json(result));
  put("cdf" + ext, csv ? render_cdf_csv(result) : render_cdf_json(result));

  std::vector<std::pair<std::string, std::string>> record_files;
  if (options.dump_records) {
    for (const auto& cond : result.conditions) {
      std::string name = "records_" + cond.label + ext;
      put(name, csv ? render_records_csv(cond) : render_records_json(cond));
      record_files.emplace_back(cond.label, name);
    }
  }

  // Manifest: each condition's config block is itself a valid --config file,
  // so any single condition can be reproduced from the manifest alone.
  std::ostringstream man;
  man << "{\n"
      << "  \"tool\": \"poolsim\",\n"
      << "  \"version\": \"" << kToolVersion << "\",\n"
      << "  \"scenario\": \"" << result.scenario << "\",\n"
      << "  \"base_seed\": " << result.base_seed << ",\n"
      << "  \"format\": \"" << options.format << "\",\n"
      << "  \"sweep\": {\"parameter\": \"" << sweep_param_name(result.param)
      << "\", \"values\": [";
  for (std::size_t i = 0; i < result.sweep_values.size(); ++i) {
    if (i) man << ", ";
    man << result.sweep_values[i];
  }
  man << "]},\n"
      << "  \"outputs\": [";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) man << ", ";
    man << '"' << names[i] << '"';
  }
  man << "],\n";
  if (result.scenario == "long") {
    // The headline long-application P99 claim is scale-dependent; record how
    // close this run lands instead of gating on it.
    for (const auto& cond : result.conditions) {
      if (!cond.is_baseline && cond.pool_size == 1) {
        double pct = cond.red_p99 * 100.0;
        bool within = pct >= 75.0 && pct <= 95.0;
        man << "  \"calibration_note\": \"long-app mean P99 reduction = "
            << fmt6(pct) << "%; reference claim 85%; within +/-10pp: "
            << (within ? "yes" : "no") << "\",\n";
        break;
      }
    }
  }
  man << "  \"conditions\": [\n";
  for (std::size_t i = 0; i < result.conditions.size(); ++i) {
    const auto& cond = result.conditions[i];
    man << "    {\"label\": \"" << cond.label << "\", \"is_baseline\": "
        << (cond.is_baseline ? "true" : "false") << ", \"records_file\": ";
    std::string rec = "null";
    for (const auto& [label, name] : record_files) {
      if (label == cond.label) rec = '"' + name + '"';
    }
    man << rec << ",\n     \"config\": " << render_config_json(cond.config, "     ")
        << "}";
    man << (i + 1 < result.conditions.size() ? ",\n" : "\n");
  }
  man << "  ]\n}\n";
  std::string man_path =
      (fs::path(options.out_dir) / "manifest.json").string();
  write_file(man_path, man.str());
  written.push_back(man_path);
  return written;
}

}  // namespace poolsim
