#include "nlos/model.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

#include <cmath>

using namespace nlos;

namespace {

Deployment three_four_five() {
    Eigen::MatrixXd X(2, 3);
    X << 3, 10, 0, 4, 0, 10;
    return Deployment(X, Eigen::Vector2d(0, 0), 0.1, 1.0);
}

}  // namespace

TEST_CASE("true_range examples") {
    CHECK(true_range(three_four_five(), 0) == doctest::Approx(5.0).epsilon(1e-15));

    Eigen::MatrixXd X(2, 3);
    X << 0, 20, 0, 0, 0, 20;
    const Deployment dep(X, Eigen::Vector2d(2, 3), 0.1, 1.0);
    CHECK(true_range(dep, 0) == doctest::Approx(std::sqrt(13.0)).epsilon(1e-15));
    CHECK(true_range(dep, 1) == doctest::Approx(std::sqrt(333.0)).epsilon(1e-15));
    CHECK(true_range(dep, 0) == doctest::Approx(3.605551).epsilon(1e-7));
    CHECK(true_range(dep, 1) == doctest::Approx(18.248288).epsilon(1e-7));
    CHECK_THROWS_AS(true_range(dep, 3), std::out_of_range);
}

TEST_CASE("deployment invariants") {
    Eigen::MatrixXd X(2, 3);
    X << 0, 20, 0, 0, 0, 20;
    CHECK_THROWS_AS(Deployment(X, Eigen::Vector2d(0, 0), 0.1, 1.0), std::invalid_argument);  // sensor at source
    CHECK_THROWS_AS(Deployment(X, Eigen::Vector2d(2, 3), -0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Deployment(X, Eigen::Vector2d(2, 3), 0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Deployment(X.leftCols(2), Eigen::Vector2d(2, 3), 0.1, 1.0), std::invalid_argument);  // L < k+1
    Eigen::MatrixXd dup(2, 3);
    dup << 0, 0, 5, 0, 0, 5;
    CHECK_THROWS_AS(Deployment(dup, Eigen::Vector2d(2, 3), 0.1, 1.0), std::invalid_argument);
    Eigen::MatrixXd four_d = Eigen::MatrixXd::Random(4, 6);
    CHECK_THROWS_AS(Deployment(four_d, Eigen::VectorXd::Zero(4), 0.1, 1.0), std::invalid_argument);
}

TEST_CASE("noiseless measurement examples") {
    Eigen::MatrixXd X(2, 3);
    X << 0, 20, 0, 0, 0, 20;
    const Deployment dep(X, Eigen::Vector2d(2, 3), 0.1, 1.0);
    const auto m = generate_measurements(dep, NoiseSpec(3, 0.0), 42);
    CHECK(m.timestamps[0] == doctest::Approx(0.1 + std::sqrt(13.0)).epsilon(1e-15));
    CHECK(m.timestamps[0] == doctest::Approx(3.705551).epsilon(1e-7));
    CHECK(m.tdoas[0] == doctest::Approx(std::sqrt(333.0) - std::sqrt(13.0)).epsilon(1e-14));
    CHECK(m.tdoas[0] == doctest::Approx(14.642737).epsilon(1e-7));
}

TEST_CASE("measurement invariants") {
    const Deployment dep = fixture::ring8();
    NoiseSpec noise(8, 0.3);
    noise.set_nlos(0, 5.0).set_nlos(4, 5.0);

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto m = generate_measurements(dep, noise, seed);
        for (Eigen::Index i = 1; i < 8; ++i) CHECK(m.tdoas[i - 1] - (m.timestamps[i] - m.timestamps[0]) == 0.0);
        for (Eigen::Index i = 0; i < 8; ++i) {
            CHECK(m.nlos[i] >= 0.0);
            if (i != 0 && i != 4) CHECK(m.nlos[i] == 0.0);
        }
    }

    SUBCASE("LOS realization has no NLOS error") {
        const auto m = generate_measurements(dep, NoiseSpec(8, 0.3), 9);
        CHECK(m.nlos.isZero(0.0));
    }
    SUBCASE("noiseless model fit") {
        const auto m = generate_measurements(dep, NoiseSpec(8, 0.0), 9);
        for (std::size_t i = 0; i < 8; ++i)
            CHECK(std::abs((m.timestamps[static_cast<Eigen::Index>(i)] - dep.onset_time()) * dep.propagation_speed() -
                           true_range(dep, i)) < 1e-14);
    }
    SUBCASE("seed determinism") {
        const auto a = generate_measurements(dep, noise, 123);
        const auto b = generate_measurements(dep, noise, 123);
        CHECK(a.timestamps == b.timestamps);
        CHECK(a.tdoas == b.tdoas);
        CHECK(a.noise == b.noise);
        CHECK(a.nlos == b.nlos);
        CHECK(generate_measurements(dep, noise, 124).timestamps != a.timestamps);
    }
}

TEST_CASE("NLOS error moments") {
    // 4 NLOS sensors x 25000 seeds = 1e5 uniform draws.
    Eigen::MatrixXd X(2, 4);
    X << 0, 20, 20, 0, 0, 0, 20, 20;
    const Deployment dep(X, Eigen::Vector2d(7, 9), 50.0, 1.0);
    NoiseSpec noise(4, 0.5);
    for (std::size_t i = 0; i < 4; ++i) noise.set_nlos(i, 5.0);

    double q_sum = 0.0, n_sum = 0.0, n_sq = 0.0;
    const int seeds = 25000;
    for (int s = 0; s < seeds; ++s) {
        const auto m = generate_measurements(dep, noise, static_cast<std::uint64_t>(s));
        q_sum += m.nlos.sum();
        n_sum += m.noise.sum();
        n_sq += m.noise.squaredNorm();
        CHECK(m.nlos.maxCoeff() <= 5.0);
    }
    const double n = 4.0 * seeds;
    const double q_se = 5.0 / std::sqrt(12.0) / std::sqrt(n);
    CHECK(std::abs(q_sum / n - 2.5) < 3 * q_se);
    CHECK(std::abs(n_sum / n) < 3 * 0.5 / std::sqrt(n));
    // var of the sample variance of a normal: 2 sigma^4 / n
    CHECK(std::abs(n_sq / n - 0.25) < 3 * std::sqrt(2.0 / n) * 0.25);
}

TEST_CASE("non-positive timestamps are rejected") {
    Eigen::MatrixXd X(2, 3);
    X << 0, 20, 0, 0, 0, 20;
    const Deployment dep(X, Eigen::Vector2d(0.5, 0.5), 0.0, 1.0);
    bool rejected = false;
    for (std::uint64_t seed = 0; seed < 200 && !rejected; ++seed) {
        try {
            generate_measurements(dep, NoiseSpec(3, 2.0), seed);
        } catch (const MeasurementError& e) {
            rejected = true;
            CHECK(e.sensor() < 3);
            CHECK(std::string(e.what()).find("sensor " + std::to_string(e.sensor() + 1)) != std::string::npos);
        }
    }
    CHECK(rejected);
}

TEST_CASE("noise spec validation") {
    NoiseSpec noise(3, 0.1);
    CHECK_NOTHROW(noise.validate(3));
    CHECK_THROWS_AS(noise.validate(4), std::invalid_argument);
    CHECK_THROWS_AS(noise.set_nlos(3, 1.0), std::out_of_range);
    CHECK_THROWS_AS(noise.set_nlos(0, -1.0), std::invalid_argument);
    noise.sigma[1] = -0.1;
    CHECK_THROWS_AS(noise.validate(3), std::invalid_argument);
    CHECK(NoiseSpec(3, 0.0).line_of_sight());
}
