#pragma once

#include "nlos/formulation.hpp"

#include <stdexcept>

namespace nlos {

/// Which block of the network a derivative component belongs to.
enum class Block { Variables, InequalityMultipliers, EqualityMultipliers };

/// A non-finite derivative was produced; the run cannot continue.
class DynamicsFault : public std::runtime_error {
public:
    DynamicsFault(Block block, std::size_t index, double time);

    Block block() const noexcept { return block_; }
    std::size_t index() const noexcept { return index_; }
    double time() const noexcept { return time_; }

private:
    Block block_;
    std::size_t index_;
    double time_;
};

/// Neuron activities (z, mu, lambda) and elapsed time in time-constants.
struct NetworkState {
    Eigen::VectorXd z;
    Eigen::VectorXd mu;
    Eigen::VectorXd lambda;
    double time = 0.0;

    static NetworkState zeros(const Dimensions& dims);
    MultiplierVector multipliers() const { return {mu, lambda}; }
};

struct StateDerivative {
    Eigen::VectorXd dz;
    Eigen::VectorXd dmu;
    Eigen::VectorXd dlambda;
    Eigen::VectorXd g;  ///< inequality values at the evaluated state

    /// Max over dz, dmu and dlambda.
    double inf_norm() const;
};

/// [u]^+ = max(u, 0).
constexpr double project_nonneg(double u) noexcept { return u > 0.0 ? u : 0.0; }

/// Closed-form grad_z of the augmented Lagrangian. With include_penalty =
/// false the rho-weighted terms are dropped, which gives grad_z of the plain
/// Lagrangian.
Eigen::VectorXd lagrangian_gradient(const Eigen::VectorXd& z, const MultiplierVector& nu,
                                    const ProblemInstance& inst, bool include_penalty = true);

/// Network right-hand side:
///   dz/dt    = -grad_z L_rho(z, nu)
///   dmu_i/dt = -mu_i + [mu_i + g_i(z)]^+
///   dlam/dt  = h(z)
/// Throws DynamicsFault on any non-finite component.
StateDerivative rhs(const NetworkState& state, const ProblemInstance& inst);
void rhs_into(const NetworkState& state, const ProblemInstance& inst, StateDerivative& out);

}  // namespace nlos
