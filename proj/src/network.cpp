#include "nlos/network.hpp"

#include <cmath>
#include <sstream>

namespace nlos {

namespace {

const char* block_name(Block block) {
    switch (block) {
        case Block::Variables: return "z";
        case Block::InequalityMultipliers: return "mu";
        case Block::EqualityMultipliers: return "lambda";
    }
    return "?";
}

std::string fault_message(Block block, std::size_t index, double time) {
    std::ostringstream os;
    os << "non-finite derivative in " << block_name(block) << "[" << index << "] at t = " << time;
    return os.str();
}

void check_finite(const Eigen::VectorXd& v, Block block, double time) {
    if (v.allFinite()) return;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i])) throw DynamicsFault(block, static_cast<std::size_t>(i), time);
}

}  // namespace

DynamicsFault::DynamicsFault(Block block, std::size_t index, double time)
    : std::runtime_error(fault_message(block, index, time)), block_(block), index_(index), time_(time) {}

NetworkState NetworkState::zeros(const Dimensions& dims) {
    return NetworkState{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dims.N)),
                        Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dims.K)),
                        Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dims.M)), 0.0};
}

double StateDerivative::inf_norm() const {
    double n = 0.0;
    if (dz.size()) n = std::max(n, dz.lpNorm<Eigen::Infinity>());
    if (dmu.size()) n = std::max(n, dmu.lpNorm<Eigen::Infinity>());
    if (dlambda.size()) n = std::max(n, dlambda.lpNorm<Eigen::Infinity>());
    return n;
}

namespace {

// Gradient into a preallocated buffer; g is the inequality vector at z.
void gradient_into(const Eigen::VectorXd& z, const Eigen::VectorXd& mu, const Eigen::VectorXd& lambda,
                   const Eigen::VectorXd& g, const ProblemInstance& inst, bool include_penalty,
                   Eigen::VectorXd& grad) {
    using constraint::storage_index;
    const std::size_t L = inst.sensor_count();
    const int k = inst.dimension();
    const double c = inst.speed();
    const double rho = include_penalty ? inst.rho() : 0.0;
    const double t0 = z[0];
    const auto& t = inst.timestamps();
    const auto x = z.segment(1, k);

    grad.setZero(z.size());

    const double mu1 = mu[storage_index(constraint::onset())];
    double dt0 = -mu1 + rho * mu1 * mu1 * t0;

    for (std::size_t i = 1; i <= L; ++i) {
        const auto ii = static_cast<Eigen::Index>(i - 1);
        const double ti = t[ii];
        const double di = z[1 + k + ii];
        const double mu_t = mu[storage_index(constraint::temporal(i, L))];
        const double mu_n = mu[storage_index(constraint::nonneg_range(i, L))];
        const double mu_b = mu[storage_index(constraint::range_bound(i, L))];
        const double lam = lambda[ii];
        const auto xi = inst.sensors().col(ii);
        const double hi = di * di - (x - xi).squaredNorm();

        // Loss slope with respect to d_i; for the smoothed l1 loss this is
        // tanh(gamma [d_i + (t0 - t_i) c]).
        const double slope = -loss_slope((ti - t0) * c - di, inst);
        const double bound_gap = di - (ti - t0) * c;

        dt0 += c * slope + mu_t + c * mu_b + rho * (mu_t * mu_t * (t0 - ti) + c * mu_b * mu_b * bound_gap);

        grad.segment(1, k) += 2.0 * (lam + rho * lam * lam * hi) * (xi - x);

        grad[1 + k + ii] = slope - mu_n + mu_b + 2.0 * lam * di +
                           rho * (mu_n * mu_n * di + mu_b * mu_b * bound_gap + 2.0 * lam * lam * di * hi);
    }

    const std::size_t first = storage_index(constraint::first_pair(L));
    const std::size_t K = inst.dims().K;
    double pair_linear = 0.0;
    double pair_penalty = 0.0;
    for (std::size_t p = first; p < K; ++p) {
        const double mp = mu[static_cast<Eigen::Index>(p)];
        pair_linear += mp;
        pair_penalty += mp * mp * g[static_cast<Eigen::Index>(p)];
    }
    dt0 += 2.0 * c * pair_linear + rho * 2.0 * c * pair_penalty;
    grad[0] = dt0;
}

}  // namespace

Eigen::VectorXd lagrangian_gradient(const Eigen::VectorXd& z, const MultiplierVector& nu,
                                    const ProblemInstance& inst, bool include_penalty) {
    Eigen::VectorXd grad;
    gradient_into(z, nu.mu, nu.lambda, eval_inequalities(z, inst), inst, include_penalty, grad);
    return grad;
}

void rhs_into(const NetworkState& state, const ProblemInstance& inst, StateDerivative& out) {
    eval_inequalities_into(state.z, inst, out.g);
    gradient_into(state.z, state.mu, state.lambda, out.g, inst, true, out.dz);
    out.dz = -out.dz;

    out.dmu.resize(state.mu.size());
    for (Eigen::Index i = 0; i < state.mu.size(); ++i)
        out.dmu[i] = -state.mu[i] + project_nonneg(state.mu[i] + out.g[i]);

    eval_equalities_into(state.z, inst, out.dlambda);

    check_finite(out.dz, Block::Variables, state.time);
    check_finite(out.dmu, Block::InequalityMultipliers, state.time);
    check_finite(out.dlambda, Block::EqualityMultipliers, state.time);
}

StateDerivative rhs(const NetworkState& state, const ProblemInstance& inst) {
    StateDerivative out;
    rhs_into(state, inst, out);
    return out;
}

}  // namespace nlos
