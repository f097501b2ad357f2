#pragma once

#include "nlos/network.hpp"

#include <utility>

namespace nlos::kkt {

struct KktReport {
    double stationarity_inf_norm = 0.0;         ///< ||grad_z L_rho||_inf
    double projection_residual_inf_norm = 0.0;  ///< max_i |[mu_i + alpha g_i]^+ - mu_i|
    double primal_equality_inf_norm = 0.0;      ///< ||h||_inf
    double licq_min_singular_value = 0.0;       ///< of grad_z h
    double licq_max_singular_value = 0.0;
    std::size_t active_inequality_count = 0;    ///< #{i : g_i >= -eps_act}

    double max_residual() const;
    /// Rank decision: smallest singular value above 1e-8 times the largest.
    bool equality_gradients_independent() const;
};

/// Jacobian of h, L x N: [0_L | 2 (X^T - 1 x^T) | 2 diag(d)].
Eigen::MatrixXd equality_jacobian(const Eigen::VectorXd& z, const ProblemInstance& inst);

KktReport residuals(const Eigen::VectorXd& z, const MultiplierVector& nu, const ProblemInstance& inst,
                    double alpha = 1.0, double eps_act = 1e-6);
KktReport residuals(const NetworkState& state, const ProblemInstance& inst, double alpha = 1.0,
                    double eps_act = 1e-6);

struct ConditionCheck {
    bool complementarity_holds = false;  ///< g <= 0, mu >= 0, mu g = 0
    bool projection_holds = false;       ///< [mu + alpha g]^+ = mu
};

/// Evaluates both forms of the inequality KKT condition on one (mu, g) pair
/// with absolute tolerance 1e-12. mu g = 0 is tested factor-wise.
ConditionCheck projection_equivalence_check(double mu, double g, double alpha);

}  // namespace nlos::kkt

namespace nlos {
using kkt::KktReport;
}
