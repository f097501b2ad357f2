#pragma once

#include "nlos/dynamics.hpp"
#include "nlos/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nlos {

/// Solver parameters shared by the robust solver and the baseline.
struct SolverConfig {
    IntegratorConfig integrator;
    double gamma = ProblemInstance::kDefaultGamma;
    double rho = ProblemInstance::kDefaultRho;
    bool run_baseline = true;
};

/// Everything a configuration file describes.
struct ExperimentConfig {
    ScenarioSpec scenario;
    double sigma = 0.0;
    SolverConfig solver;
    std::size_t workers = 1;  ///< 0: hardware concurrency
};

enum class SweepParam { None, Sigma, NlosBound };

struct Sweep {
    SweepParam param = SweepParam::None;
    std::vector<double> values;
};

const char* sweep_param_name(SweepParam param);

enum class SolverKind { RobustL1, BaselineL2 };
const char* solver_name(SolverKind kind);

/// One Monte-Carlo trial of one solver.
struct RunRecord {
    std::size_t trial_index = 0;
    SolverKind solver = SolverKind::RobustL1;
    std::optional<Deployment> deployment;
    std::optional<Eigen::VectorXd> estimate;  ///< empty when faulted
    std::optional<double> onset_estimate;
    Eigen::VectorXd truth;
    double error = 0.0;
    KktReport kkt;
    std::size_t steps = 0;
    double wall_time = 0.0;
    RunStatus status = RunStatus::Converged;
    std::string fault;

    bool converged() const noexcept { return status == RunStatus::Converged; }
};

struct BenchmarkResult {
    ScenarioSpec scenario;
    SweepParam param = SweepParam::None;
    double value = 0.0;  ///< swept parameter value (sigma for None)
    std::vector<RunRecord> records;
    std::vector<RunRecord> baseline_records;
    double rmse = 0.0;
    double baseline_rmse = 0.0;
    std::vector<std::pair<double, double>> cdf;
    std::vector<std::pair<double, double>> baseline_cdf;
    std::optional<double> crlb;  ///< LOS grid points only
    std::size_t fault_count = 0;
    std::size_t baseline_fault_count = 0;
    bool flagged = false;  ///< more than 10% of trials faulted
};

/// sqrt(mean ||x_hat - x||^2) over converged records; 0 if there are none.
double rmse(const std::vector<RunRecord>& records);

/// Empirical CDF of the converged errors as (error, fraction) steps,
/// sorted, ending at (max error, 1).
std::vector<std::pair<double, double>> empirical_cdf(const std::vector<RunRecord>& records);

/// Fraction of errors <= level.
double cdf_at(const std::vector<std::pair<double, double>>& cdf, double level);

/// Independent 64-bit seed for (base, stream, index); stable across worker counts.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index);

/// Everything one trial produces.
struct TrialOutcome {
    Deployment deployment;
    std::optional<MeasurementSet> measurements;
    std::optional<SolveResult> robust;
    std::optional<SolveResult> baseline;
    std::string rejection;  ///< measurement rejection diagnostic
};

/// Deployment for a trial: the fixed perimeter ring or a per-trial random draw.
Deployment trial_deployment(const ScenarioSpec& spec, std::size_t trial);

/// NoiseSpec for a trial at the given sigma, honouring redraw_nlos.
NoiseSpec trial_noise(const ScenarioSpec& spec, std::size_t trial, double sigma);

/// Runs one trial. A sweep value overrides sigma (Sigma) or every NLOS
/// bound in the pattern (NlosBound).
TrialOutcome run_trial(const ExperimentConfig& config, std::size_t trial, SweepParam param = SweepParam::None,
                       double value = 0.0, bool keep_trajectory = false);

/// Same network with the smoothed l1 loss replaced by u^2 / 2.
SolveResult l2_baseline_solve(const ProblemInstance& inst, const IntegratorConfig& config);

/// Monte-Carlo benchmark over the sweep grid (one point when param is None).
std::vector<BenchmarkResult> run_benchmark(const ExperimentConfig& config, const Sweep& sweep = {});

/// LOS TDOA Cramer-Rao bound on position RMSE, sqrt(trace(FIM^-1)) with
/// FIM = J^T Sigma^-1 J, J the range-difference Jacobian w.r.t. x and
/// Sigma = sigma^2 (I + 1 1^T). Throws std::domain_error on a singular FIM.
double crlb_los(const Deployment& deployment, double sigma);

struct OracleRegion {
    Eigen::Vector2d lower;
    Eigen::Vector2d upper;
};

struct OracleResult {
    Eigen::Vector2d position;
    double onset_time = 0.0;
    double objective = 0.0;
    std::size_t feasible_points = 0;
};

/// Exhaustive minimizer of sum |(t_i - t0) c - ||x - x_i|| | over an x grid
/// with the given resolution, subject to the temporal, triangle and range
/// bound constraints (infeasible grid points are rejected). For fixed x the
/// feasible onset times form an interval [0, t0_max(x)] on which every
/// residual is non-negative, so the objective decreases in t0 and t0_max(x)
/// is the exact inner minimizer. 2-D only. Throws std::domain_error if no
/// grid point is feasible.
OracleResult grid_oracle(const ProblemInstance& inst, double resolution, const OracleRegion& region);
/// Region defaults to the sensors' bounding box.
OracleResult grid_oracle(const ProblemInstance& inst, double resolution);

struct TimingRow {
    std::size_t sensor_count = 0;
    double mean_step_seconds = 0.0;
};

struct TimingTable {
    std::vector<TimingRow> rows;
    std::optional<double> slope;  ///< least-squares log-log slope (>= 2 rows)
};

/// Mean wall time of one rhs evaluation plus Euler update for each L on a
/// noiseless random LOS layout, over `repetitions` runs of `steps` steps
/// started from the true solution.
TimingTable timing_scaling(const std::vector<std::size_t>& sensor_counts, std::size_t repetitions,
                           std::size_t steps = 20000, double tau = 2e-5, std::uint64_t seed = 7);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace nlos
