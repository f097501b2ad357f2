#pragma once

#include "nlos/kkt.hpp"
#include "nlos/network.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace nlos {

struct IntegratorConfig {
    double tau = 2e-5;           ///< Euler step, time-constants
    double horizon = 40.0;       ///< simulated time-constants
    double record_stride = 0.1;  ///< trajectory sampling interval; <= 0 disables sampling
    double alpha = 1.0;
    bool adaptive = false;       ///< step-doubling error control
    double adaptive_tol = 1e-8;

    void validate() const;
};

/// One explicit-Euler update of all three blocks from the same derivative.
NetworkState step(const NetworkState& state, const ProblemInstance& inst, const IntegratorConfig& config);

struct TrajectorySample {
    double time = 0.0;
    double t0 = 0.0;
    Eigen::VectorXd x;
    Eigen::VectorXd d;
    double kkt_inf_norm = 0.0;  ///< max of the stationarity, projection and equality residuals
};

enum class RunStatus { Converged, Faulted };

struct SolveResult {
    NetworkState final_state;
    std::vector<TrajectorySample> trajectory;
    KktReport kkt;
    std::size_t steps = 0;
    double wall_time = 0.0;
    RunStatus status = RunStatus::Converged;
    std::string fault;

    double onset_estimate() const { return final_state.z[0]; }
    Eigen::VectorXd position_estimate(int dimension) const { return final_state.z.segment(1, dimension); }
};

/// Integrates the network for config.horizon time-constants from init
/// (all zeros by default). Faults are captured in the result, not thrown.
SolveResult solve(const ProblemInstance& inst, const IntegratorConfig& config,
                  std::optional<NetworkState> init = std::nullopt);

/// CSV with columns time_constant, t0, x1..xk, d1..dL, kkt_inf_norm.
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& trajectory);

}  // namespace nlos
