#include "nlos/scenario.hpp"

#include <doctest.h>

#include <cmath>

using namespace nlos;

TEST_CASE("perimeter ring of eight") {
    const Deployment dep = build_deterministic(8, 20.0, Eigen::Vector2d(2, 3));
    Eigen::MatrixXd expected(2, 8);
    expected << 0, 10, 20, 20, 20, 10, 0, 0,
                0, 0, 0, 10, 20, 20, 20, 10;
    CHECK(dep.sensors().isApprox(expected, 1e-15));
    CHECK(dep.source() == Eigen::Vector2d(2, 3));
    CHECK(dep.onset_time() == 0.1);
    CHECK(dep.propagation_speed() == 1.0);
}

TEST_CASE("perimeter ring of four is the corners") {
    const Deployment dep = build_deterministic(4, 20.0, Eigen::Vector2d(2, 3));
    Eigen::MatrixXd expected(2, 4);
    expected << 0, 20, 20, 0,
                0, 0, 20, 20;
    CHECK(dep.sensors().isApprox(expected, 1e-15));
}

TEST_CASE("perimeter ring is pure and stays on the boundary") {
    for (std::size_t L : {3u, 5u, 7u, 12u}) {
        const auto a = build_deterministic(L, 13.0, Eigen::Vector2d(4, 5));
        const auto b = build_deterministic(L, 13.0, Eigen::Vector2d(4, 5));
        CHECK(a.sensors() == b.sensors());
        for (Eigen::Index i = 0; i < a.sensors().cols(); ++i) {
            const double x = a.sensors()(0, i), y = a.sensors()(1, i);
            CHECK(x >= 0.0);
            CHECK(x <= 13.0);
            CHECK(y >= 0.0);
            CHECK(y <= 13.0);
            const bool on_edge = std::abs(x) < 1e-12 || std::abs(y) < 1e-12 || std::abs(x - 13) < 1e-12 ||
                                 std::abs(y - 13) < 1e-12;
            CHECK(on_edge);
        }
    }
    CHECK_THROWS(build_deterministic(2, 20.0, Eigen::Vector2d(2, 3)));
}

TEST_CASE("random deployment") {
    const auto a = build_random(10, 20.0, 77);
    const auto b = build_random(10, 20.0, 77);
    CHECK(a.sensor_count() == 10);
    CHECK(a.sensors() == b.sensors());
    CHECK(a.source() == b.source());
    CHECK(build_random(10, 20.0, 78).sensors() != a.sensors());

    const auto three = build_random(5, 10.0, 3, 3);
    CHECK(three.dimension() == 3);

    SUBCASE("coordinates inside the square and separated from the source") {
        for (std::uint64_t s = 0; s < 200; ++s) {
            const auto d = build_random(8, 20.0, s);
            CHECK((d.sensors().array() >= 0.0).all());
            CHECK((d.sensors().array() <= 20.0).all());
            for (Eigen::Index i = 0; i < 8; ++i) CHECK((d.sensors().col(i) - d.source()).norm() >= 1e-3);
        }
    }
}

TEST_CASE("random deployment coordinate moments") {
    const int draws = 10000;
    Eigen::Vector2d sensor_sum = Eigen::Vector2d::Zero(), source_sum = Eigen::Vector2d::Zero();
    for (int s = 0; s < draws; ++s) {
        const auto d = build_random(3, 20.0, static_cast<std::uint64_t>(s));
        sensor_sum += d.sensors().col(0);
        source_sum += d.source();
    }
    const double se = 20.0 / std::sqrt(12.0) / std::sqrt(static_cast<double>(draws));
    for (int a = 0; a < 2; ++a) {
        CHECK(std::abs(sensor_sum[a] / draws - 10.0) < 3 * se);
        CHECK(std::abs(source_sum[a] / draws - 10.0) < 3 * se);
    }
}

TEST_CASE("scenario spec validation") {
    ScenarioSpec spec;
    CHECK_NOTHROW(spec.validate());
    spec.nlos_pattern = {{8, 1.0}};
    CHECK_THROWS(spec.validate());
    spec.nlos_pattern = {{7, -1.0}};
    CHECK_THROWS(spec.validate());
    spec.nlos_pattern.clear();
    spec.region_side = 0.0;
    CHECK_THROWS(spec.validate());
    spec.region_side = 20.0;
    spec.sensor_count = 2;
    CHECK_THROWS(spec.validate());
    spec.sensor_count = 8;
    spec.source.reset();
    CHECK_THROWS(spec.validate());  // perimeter needs a fixed source
    spec.kind = ScenarioKind::RandomSquare;
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("noise from a scenario") {
    ScenarioSpec spec;
    spec.nlos_pattern = {{0, 5.0}, {4, 5.0}};
    const NoiseSpec noise = make_noise(spec, 0.3);
    CHECK(noise.sigma.size() == 8);
    CHECK((noise.sigma.array() == 0.3).all());
    CHECK(noise.nlos_upper[0] == 5.0);
    CHECK(noise.nlos_upper[4] == 5.0);
    CHECK(noise.nlos_upper.sum() == 10.0);
}
