#pragma once

#include <vector>

#include "poolsim/engine.hpp"

namespace poolsim {

// Nearest-rank percentile: sorted sample at 1-based rank ceil(q/100 * n).
// The result is always an observed sample. q in (0, 100].
double percentile_nearest_rank(std::vector<double> samples, double q);

// Empirical CDF point; fractions strictly increase to exactly 1.0.
struct CdfPoint {
  double value = 0.0;
  double fraction = 0.0;
};
using CdfSeries = std::vector<CdfPoint>;

// Sorted values paired with i/n, duplicates collapsed to the largest
// fraction per value.
CdfSeries cdf(std::vector<double> samples);

// Fractional improvement (baseline - treated) / baseline; negative when
// treated is worse. baseline must be > 0.
double reduction(double baseline, double treated);

struct Aggregate {
  double mean = 0.0;
  double sample_std = 0.0;  // n-1 denominator; 0 when n == 1
};
Aggregate aggregate(const std::vector<double>& values);

// Per-trial P50/P95/P99/P99.5 plus cross-trial mean and sample std.
struct TrialPercentiles {
  int trial_index = 0;
  double p50 = 0.0;
  double p95 = 0.0;
  double p99 = 0.0;
  double p995 = 0.0;
};

struct PercentileReport {
  std::vector<TrialPercentiles> per_trial;
  Aggregate p50, p95, p99, p995;
  int n_trials = 0;
};

TrialPercentiles trial_percentiles(int trial_index,
                                   const std::vector<RequestRecord>& records);

PercentileReport percentile_report(
    const std::vector<std::vector<RequestRecord>>& per_trial_records);

std::vector<double> response_seconds(const std::vector<RequestRecord>& records);

}  // namespace poolsim
