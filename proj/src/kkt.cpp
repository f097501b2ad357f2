#include "nlos/kkt.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace nlos::kkt {

namespace {
constexpr double kConditionTolerance = 1e-12;
constexpr double kRankThreshold = 1e-8;
}  // namespace

double KktReport::max_residual() const {
    return std::max({stationarity_inf_norm, projection_residual_inf_norm, primal_equality_inf_norm});
}

bool KktReport::equality_gradients_independent() const {
    return licq_max_singular_value > 0.0 &&
           licq_min_singular_value > kRankThreshold * licq_max_singular_value;
}

Eigen::MatrixXd equality_jacobian(const Eigen::VectorXd& z, const ProblemInstance& inst) {
    const auto L = static_cast<Eigen::Index>(inst.sensor_count());
    const int k = inst.dimension();
    const auto x = z.segment(1, k);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(L, static_cast<Eigen::Index>(inst.dims().N));
    // X^T - 1 x^T, row i is (x_i - x)^T.
    J.block(0, 1, L, k) = 2.0 * (inst.sensors().transpose().rowwise() - x.transpose());
    J.block(0, 1 + k, L, L) = 2.0 * z.tail(L).asDiagonal();
    return J;
}

KktReport residuals(const Eigen::VectorXd& z, const MultiplierVector& nu, const ProblemInstance& inst,
                    double alpha, double eps_act) {
    KktReport r;
    r.stationarity_inf_norm = lagrangian_gradient(z, nu, inst).lpNorm<Eigen::Infinity>();

    const Eigen::VectorXd g = eval_inequalities(z, inst);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        const double gap = std::abs(project_nonneg(nu.mu[i] + alpha * g[i]) - nu.mu[i]);
        r.projection_residual_inf_norm = std::max(r.projection_residual_inf_norm, gap);
        if (g[i] >= -eps_act) ++r.active_inequality_count;
    }

    r.primal_equality_inf_norm = eval_equalities(z, inst).lpNorm<Eigen::Infinity>();

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(equality_jacobian(z, inst));
    const auto& s = svd.singularValues();
    r.licq_max_singular_value = s.size() ? s.maxCoeff() : 0.0;
    r.licq_min_singular_value = s.size() ? s.minCoeff() : 0.0;
    return r;
}

KktReport residuals(const NetworkState& state, const ProblemInstance& inst, double alpha, double eps_act) {
    return residuals(state.z, state.multipliers(), inst, alpha, eps_act);
}

ConditionCheck projection_equivalence_check(double mu, double g, double alpha) {
    ConditionCheck out;
    out.complementarity_holds = g <= kConditionTolerance && mu >= -kConditionTolerance &&
                                std::min(std::abs(mu), std::abs(g)) <= kConditionTolerance;
    out.projection_holds = std::abs(project_nonneg(mu + alpha * g) - mu) <= kConditionTolerance;
    return out;
}

}  // namespace nlos::kkt
