#pragma once

#include "nlos/bench.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace nlos {

// Wall time is left out of every file so repeated runs are byte-identical.

/// records.csv: param_value, solver, trial_index, status, est_x1..k, est_t0,
/// true_x1..k, error, stationarity, projection_residual, equality_residual,
/// licq_min_sv, active_inequalities, steps. Faulted rows leave the estimate
/// and residual columns empty.
void write_records_csv(std::ostream& os, const std::vector<BenchmarkResult>& results);

/// summary.csv: param, value, trials, rmse, baseline_rmse, crlb, fault_count,
/// baseline_fault_count, flagged.
void write_summary_csv(std::ostream& os, const std::vector<BenchmarkResult>& results);

/// cdf.csv: value, solver, error, fraction.
void write_cdf_csv(std::ostream& os, const std::vector<BenchmarkResult>& results);

/// Writes records.csv, summary.csv and cdf.csv into dir (created if missing).
void write_benchmark_outputs(const std::string& dir, const std::vector<BenchmarkResult>& results);

}  // namespace nlos
