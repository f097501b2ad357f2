#pragma once

#include "nlos/bench.hpp"

#include <random>

namespace fixture {

inline nlos::Deployment ring8() { return nlos::build_deterministic(8, 20.0, Eigen::Vector2d(2.0, 3.0)); }

inline nlos::ProblemInstance noiseless(const nlos::Deployment& dep, double gamma = 100.0, double rho = 5.0) {
    const auto m = nlos::generate_measurements(dep, nlos::NoiseSpec(dep.sensor_count(), 0.0), 1);
    return nlos::ProblemInstance(m, dep, gamma, rho);
}

inline nlos::ProblemInstance noisy(const nlos::Deployment& dep, double sigma, std::uint64_t seed) {
    nlos::NoiseSpec noise(dep.sensor_count(), sigma);
    return nlos::ProblemInstance(nlos::generate_measurements(dep, noise, seed), dep);
}

/// Random state near the physically meaningful region of the problem.
inline nlos::NetworkState random_state(const nlos::ProblemInstance& inst, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> pos(0.0, 20.0), t0(-0.5, 0.5), d(0.5, 25.0), mu(0.0, 2.0),
        lam(-0.2, 0.2);
    auto s = nlos::NetworkState::zeros(inst.dims());
    const int k = inst.dimension();
    s.z[0] = t0(rng);
    for (int a = 0; a < k; ++a) s.z[1 + a] = pos(rng);
    for (Eigen::Index i = 1 + k; i < s.z.size(); ++i) s.z[i] = d(rng);
    for (Eigen::Index i = 0; i < s.mu.size(); ++i) s.mu[i] = mu(rng);
    for (Eigen::Index i = 0; i < s.lambda.size(); ++i) s.lambda[i] = lam(rng);
    return s;
}

struct ComplementaryPoint {
    nlos::ProblemInstance inst;
    Eigen::VectorXd z;
    nlos::MultiplierVector nu;
};

/// Exactly feasible point with active constraints carrying positive
/// multipliers. Sensors sit at integer offsets with integer norms from an
/// integer source, so h = 0 and the active g_i = 0 hold without rounding.
/// The onset is 0 (g_1 active) and a random subset of sensors gets an
/// integer NLOS excess (range bound inactive), the rest stay tight.
inline ComplementaryPoint complementary_point(std::mt19937_64& rng) {
    static const int offsets[][2] = {{3, 4}, {-4, 3}, {-3, -4}, {4, -3}, {5, 12}, {-12, 5},
                                     {-5, -12}, {12, -5}, {6, 8}, {-8, -6}, {0, 7}, {-9, 0}};
    std::uniform_int_distribution<int> coord(-20, 20), excess(1, 3), coin(0, 1);
    std::uniform_real_distribution<double> mu(0.1, 5.0), lam(-3.0, 3.0);
    const Eigen::Vector2d x(coord(rng), coord(rng));
    const Eigen::Index L = 8;
    const int first = std::uniform_int_distribution<int>(0, 3)(rng);
    Eigen::MatrixXd X(2, L);
    Eigen::VectorXd t(L);
    for (Eigen::Index i = 0; i < L; ++i) {
        const auto& o = offsets[static_cast<std::size_t>(first + i)];
        X.col(i) = x + Eigen::Vector2d(o[0], o[1]);
        t[i] = std::hypot(o[0], o[1]) + (coin(rng) ? excess(rng) : 0);
    }
    nlos::ProblemInstance inst(t, X, 1.0);
    Eigen::VectorXd z = inst.pack_point(x, 0.0);
    const Eigen::VectorXd g = nlos::eval_inequalities(z, inst);
    nlos::MultiplierVector nu = nlos::MultiplierVector::zeros(inst.dims());
    for (Eigen::Index i = 0; i < g.size(); ++i)
        if (g[i] == 0.0) nu.mu[i] = mu(rng);
    for (Eigen::Index i = 0; i < L; ++i) nu.lambda[i] = lam(rng);
    return {std::move(inst), std::move(z), std::move(nu)};
}

}  // namespace fixture
