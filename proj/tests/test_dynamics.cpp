#include "nlos/dynamics.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace nlos;

namespace {

double al_gradient_rel_error(const ProblemInstance& inst, const NetworkState& s) {
    const Eigen::VectorXd closed = lagrangian_gradient(s.z, s.multipliers(), inst);
    const auto nu = s.multipliers();
    const Eigen::VectorXd fd =
        oracle::fd_gradient([&](const Eigen::VectorXd& z) { return augmented_lagrangian(z, nu, inst); }, s.z);
    return (closed - fd).lpNorm<Eigen::Infinity>() / fd.lpNorm<Eigen::Infinity>();
}

}  // namespace

TEST_CASE("project_nonneg") {
    CHECK(project_nonneg(-3.0) == 0.0);
    CHECK(project_nonneg(2.5) == 2.5);
    CHECK(project_nonneg(0.0) == 0.0);
    static_assert(project_nonneg(-1.0) == 0.0);
}

TEST_CASE("ground truth of a noiseless instance is an equilibrium") {
    const auto dep = fixture::ring8();
    const auto inst = fixture::noiseless(dep);
    auto s = NetworkState::zeros(inst.dims());
    s.z = inst.pack_point(dep.source(), dep.onset_time());
    const auto d = rhs(s, inst);
    CHECK(d.dz.lpNorm<Eigen::Infinity>() < 1e-10);
    CHECK(d.dmu.lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(d.dlambda.lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("multiplier decay example") {
    const auto dep = fixture::ring8();
    const auto inst = fixture::noiseless(dep);
    auto s = NetworkState::zeros(inst.dims());
    s.z = inst.pack_point(dep.source(), 10.0);  // g_1 = -t0 = -10
    s.mu[0] = 5.0;
    CHECK(rhs(s, inst).dmu[0] == -5.0);
}

TEST_CASE("closed-form gradient matches finite differences") {
    std::mt19937_64 rng(2024);
    for (std::size_t L : {4u, 8u, 10u}) {
        const auto dep = build_random(L, 20.0, 40 + L);
        NoiseSpec noise(L, 0.3);
        noise.set_nlos(0, 3.0);
        const ProblemInstance inst(generate_measurements(dep, noise, L), dep);
        double worst = 0.0;
        for (int rep = 0; rep < 100; ++rep) worst = std::max(worst, al_gradient_rel_error(inst, fixture::random_state(inst, rng)));
        CAPTURE(L);
        CHECK(worst < 1e-5);
    }
}

TEST_CASE("gradient without penalty is the plain Lagrangian gradient") {
    const auto dep = fixture::ring8();
    const auto inst = fixture::noisy(dep, 0.3, 4);
    std::mt19937_64 rng(1);
    const auto s = fixture::random_state(inst, rng);
    const auto nu = s.multipliers();
    const Eigen::VectorXd closed = lagrangian_gradient(s.z, nu, inst, false);
    const Eigen::VectorXd fd =
        oracle::fd_gradient([&](const Eigen::VectorXd& z) { return lagrangian(z, nu, inst); }, s.z);
    CHECK((closed - fd).lpNorm<Eigen::Infinity>() / fd.lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("squared-loss gradient matches finite differences") {
    std::mt19937_64 rng(8);
    const auto dep = fixture::ring8();
    const auto inst = fixture::noisy(dep, 0.3, 4).with_loss(Loss::Squared);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) worst = std::max(worst, al_gradient_rel_error(inst, fixture::random_state(inst, rng)));
    CHECK(worst < 1e-6);
}

TEST_CASE("rhs faults on non-finite values") {
    const auto dep = fixture::ring8();
    const auto inst = fixture::noiseless(dep);
    auto s = NetworkState::zeros(inst.dims());
    s.z[1] = std::numeric_limits<double>::quiet_NaN();
    try {
        rhs(s, inst);
        FAIL("expected a fault");
    } catch (const DynamicsFault& f) {
        CHECK(f.block() == Block::Variables);
    }
    s = NetworkState::zeros(inst.dims());
    s.lambda[3] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(rhs(s, inst), DynamicsFault);
}

TEST_CASE("euler step") {
    const auto dep = fixture::ring8();
    const auto inst = fixture::noiseless(dep);
    IntegratorConfig cfg;
    cfg.tau = 0.1;

    SUBCASE("linear decay of an isolated multiplier") {
        auto s = NetworkState::zeros(inst.dims());
        s.z = inst.pack_point(dep.source(), 1e6);  // g_1 very negative: [mu + g]^+ = 0
        s.mu[0] = 1.0;
        const auto next = step(s, inst, cfg);
        CHECK(next.mu[0] == doctest::Approx(0.9).epsilon(1e-15));
        CHECK(next.time == doctest::Approx(0.1));
    }
    SUBCASE("fixed point is unchanged except time") {
        auto s = NetworkState::zeros(inst.dims());
        s.z = inst.pack_point(dep.source(), dep.onset_time());
        const auto next = step(s, inst, cfg);
        CHECK((next.z - s.z).lpNorm<Eigen::Infinity>() < 1e-11);
        CHECK(next.mu == s.mu);
        CHECK((next.lambda - s.lambda).lpNorm<Eigen::Infinity>() < 1e-12);
        CHECK(next.time == doctest::Approx(0.1));
    }
    SUBCASE("simultaneous update of all blocks") {
        std::mt19937_64 rng(3);
        const auto s = fixture::random_state(inst, rng);
        IntegratorConfig small;
        small.tau = 1e-4;
        const auto d = rhs(s, inst);
        const auto next = step(s, inst, small);
        CHECK((next.z - (s.z + 1e-4 * d.dz)).lpNorm<Eigen::Infinity>() == 0.0);
        CHECK((next.mu - (s.mu + 1e-4 * d.dmu)).lpNorm<Eigen::Infinity>() == 0.0);
        CHECK((next.lambda - (s.lambda + 1e-4 * d.dlambda)).lpNorm<Eigen::Infinity>() == 0.0);
    }
}

TEST_CASE("euler integration is first order") {
    // Smooth start: every inequality strictly inactive with mu = 0, so the
    // projection never switches over the short horizon.
    const auto dep = fixture::ring8();
    const auto inst = fixture::noiseless(dep);
    auto init = NetworkState::zeros(inst.dims());
    init.z = inst.pack_point(Eigen::Vector2d(2.3, 2.8), dep.onset_time());
    init.z.tail(8).array() -= 0.05;

    auto endpoint = [&](double tau) {
        IntegratorConfig cfg;
        cfg.tau = tau;
        cfg.horizon = 0.02;
        cfg.record_stride = 0.0;
        return solve(inst, cfg, init).final_state;
    };
    const auto a = endpoint(2e-3), b = endpoint(1e-3), c = endpoint(5e-4);
    const double e1 = (a.z - b.z).norm(), e2 = (b.z - c.z).norm();
    const double order = std::log2(e1 / e2);
    CAPTURE(order);
    CHECK(order == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("solve") {
    const auto dep = fixture::ring8();
    const auto inst = fixture::noiseless(dep);

    SUBCASE("zero horizon returns the initial state") {
        IntegratorConfig cfg;
        cfg.horizon = 0.0;
        std::mt19937_64 rng(4);
        const auto init = fixture::random_state(inst, rng);
        const auto r = solve(inst, cfg, init);
        CHECK(r.final_state.z == init.z);
        CHECK(r.final_state.mu == init.mu);
        CHECK(r.final_state.lambda == init.lambda);
        CHECK(r.steps == 0);
    }
    SUBCASE("step count and sampling") {
        IntegratorConfig cfg;
        cfg.horizon = 0.5;
        cfg.record_stride = 0.1;
        const auto r = solve(inst, cfg);
        CHECK(r.steps == 25000);
        REQUIRE(r.trajectory.size() == 6);
        CHECK(r.trajectory.front().time == 0.0);
        CHECK(r.trajectory.back().time == doctest::Approx(0.5));
        CHECK(r.final_state.time == doctest::Approx(0.5));
    }
    SUBCASE("determinism") {
        IntegratorConfig cfg;
        cfg.horizon = 1.0;
        const auto a = solve(inst, cfg), b = solve(inst, cfg);
        CHECK(a.final_state.z == b.final_state.z);
        CHECK(a.final_state.mu == b.final_state.mu);
        CHECK(a.kkt.stationarity_inf_norm == b.kkt.stationarity_inf_norm);
    }
    SUBCASE("multipliers stay non-negative from a zero start") {
        const auto noisy = fixture::noisy(dep, 0.3, 6);
        IntegratorConfig cfg;
        auto s = NetworkState::zeros(noisy.dims());
        double lowest = 0.0;
        for (int n = 0; n < 100000; ++n) {
            s = step(s, noisy, cfg);
            lowest = std::min(lowest, s.mu.minCoeff());
        }
        CHECK(lowest >= -1e-12);
    }
    SUBCASE("faults are recorded, not thrown") {
        IntegratorConfig cfg;
        cfg.tau = 1e-2;
        cfg.horizon = 5.0;
        const auto r = solve(inst, cfg);
        CHECK(r.status == RunStatus::Faulted);
        CHECK(r.fault.find("non-finite") != std::string::npos);
    }
    SUBCASE("adaptive mode agrees with fixed steps") {
        IntegratorConfig fixed;
        fixed.horizon = 2.0;
        IntegratorConfig adaptive = fixed;
        adaptive.adaptive = true;
        const auto a = solve(inst, fixed), b = solve(inst, adaptive);
        REQUIRE(b.status == RunStatus::Converged);
        CHECK((a.final_state.z - b.final_state.z).lpNorm<Eigen::Infinity>() < 1e-2);
        CHECK(b.trajectory.back().time == doctest::Approx(2.0));
        CHECK(b.steps < a.steps);
    }
    SUBCASE("config validation") {
        IntegratorConfig cfg;
        cfg.tau = 0.2;
        CHECK_THROWS(solve(inst, cfg));
        cfg.tau = 1e-3;
        cfg.alpha = 2.0;
        CHECK_THROWS(solve(inst, cfg));
        cfg.alpha = 1.0;
        cfg.horizon = -1.0;
        CHECK_THROWS(solve(inst, cfg));
    }
}

TEST_CASE("trajectory csv") {
    const auto dep = fixture::ring8();
    const auto inst = fixture::noiseless(dep);
    IntegratorConfig cfg;
    cfg.horizon = 0.2;
    const auto r = solve(inst, cfg);
    std::ostringstream os;
    write_trajectory_csv(os, r.trajectory);
    std::istringstream in(os.str());
    std::string header, row;
    std::getline(in, header);
    CHECK(header == "time_constant,t0,x1,x2,d1,d2,d3,d4,d5,d6,d7,d8,kkt_inf_norm");
    int rows = 0;
    while (std::getline(in, row)) ++rows;
    CHECK(rows == 3);
    CHECK(r.trajectory.front().kkt_inf_norm == doctest::Approx(rhs(NetworkState::zeros(inst.dims()), inst).inf_norm()));
}
