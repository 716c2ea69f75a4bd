#include "poolsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace poolsim {

double percentile_nearest_rank(std::vector<double> samples, double q) {
  if (samples.empty()) {
    throw std::invalid_argument("percentile_nearest_rank: empty samples");
  }
  if (!(q > 0.0) || q > 100.0) {
    throw std::invalid_argument("percentile_nearest_rank: q must be in (0, 100]");
  }
  std::sort(samples.begin(), samples.end());
  auto n = static_cast<double>(samples.size());
  // q * n first: keeps ranks exact for q like 95 or 99.5.
  auto rank = static_cast<std::size_t>(std::ceil(q * n / 100.0));
  if (rank < 1) rank = 1;
  if (rank > samples.size()) rank = samples.size();
  return samples[rank - 1];
}

CdfSeries cdf(std::vector<double> samples) {
  if (samples.empty()) {
    throw std::invalid_argument("cdf: empty samples");
  }
  std::sort(samples.begin(), samples.end());
  CdfSeries series;
  const auto n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double frac = static_cast<double>(i + 1) / n;
    if (!series.empty() && series.back().value == samples[i]) {
      series.back().fraction = frac;
    } else {
      series.push_back({samples[i], frac});
    }
  }
  series.back().fraction = 1.0;
  return series;
}

double reduction(double baseline, double treated) {
  if (!(baseline > 0.0)) {
    throw std::invalid_argument("reduction: baseline must be > 0");
  }
  if (treated < 0.0) {
    throw std::invalid_argument("reduction: treated must be >= 0");
  }
  return (baseline - treated) / baseline;
}

Aggregate aggregate(const std::vector<double>& values) {
  if (values.empty()) {
    throw std::invalid_argument("aggregate: empty values");
  }
  Aggregate agg;
  double sum = 0.0;
  for (double v : values) sum += v;
  agg.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - agg.mean) * (v - agg.mean);
    agg.sample_std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return agg;
}

std::vector<double> response_seconds(
    const std::vector<RequestRecord>& records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(micros_to_seconds(r.response));
  return out;
}

TrialPercentiles trial_percentiles(
    int trial_index, const std::vector<RequestRecord>& records) {
  auto samples = response_seconds(records);
  std::sort(samples.begin(), samples.end());
  auto at = [&](double q) {
    auto rank = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(samples.size()) / 100.0));
    if (rank < 1) rank = 1;
    if (rank > samples.size()) rank = samples.size();
    return samples[rank - 1];
  };
  TrialPercentiles tp;
  tp.trial_index = trial_index;
  tp.p50 = at(50.0);
  tp.p95 = at(95.0);
  tp.p99 = at(99.0);
  tp.p995 = at(99.5);
  return tp;
}

PercentileReport percentile_report(
    const std::vector<std::vector<RequestRecord>>& per_trial_records) {
  PercentileReport report;
  report.n_trials = static_cast<int>(per_trial_records.size());
  std::vector<double> p50s, p95s, p99s, p995s;
  for (std::size_t t = 0; t < per_trial_records.size(); ++t) {
    auto tp = trial_percentiles(static_cast<int>(t), per_trial_records[t]);
    report.per_trial.push_back(tp);
    p50s.push_back(tp.p50);
    p95s.push_back(tp.p95);
    p99s.push_back(tp.p99);
    p995s.push_back(tp.p995);
  }
  report.p50 = aggregate(p50s);
  report.p95 = aggregate(p95s);
  report.p99 = aggregate(p99s);
  report.p995 = aggregate(p995s);
  return report;
}

}  // namespace poolsim
