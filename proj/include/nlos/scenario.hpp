#pragma once

#include "nlos/model.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace nlos {

enum class ScenarioKind { DeterministicPerimeter, RandomSquare };

/// Experiment geometry and NLOS condition. Sensor indices in nlos_pattern
/// are 0-based (the configuration file uses 1-based labels).
struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::DeterministicPerimeter;
    double region_side = 20.0;
    std::size_t sensor_count = 8;
    std::optional<Eigen::VectorXd> source = Eigen::Vector2d(2.0, 3.0);  ///< nullopt: random
    std::vector<std::pair<std::size_t, double>> nlos_pattern;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    double onset_time = 0.1;
    double propagation_speed = 1.0;
    /// Random-square only: draw a fresh NLOS sensor subset of the same size each trial.
    bool redraw_nlos = false;

    void validate() const;
};

/// L sensors at equal arc-length spacing 4*side/L along the square boundary,
/// starting at the origin and running counter-clockwise.
Deployment build_deterministic(std::size_t sensor_count, double region_side,
                               const Eigen::VectorXd& source, double onset_time = 0.1,
                               double propagation_speed = 1.0);

/// Sensors and source i.i.d. uniform over [0, side]^k, redrawn while any
/// sensor lies within 1e-3 m of the source or of another sensor.
Deployment build_random(std::size_t sensor_count, double region_side, std::uint64_t seed,
                        int dimension = 2, double onset_time = 0.1,
                        double propagation_speed = 1.0);

/// NoiseSpec carrying sigma on every sensor plus the scenario's NLOS pattern.
NoiseSpec make_noise(const ScenarioSpec& spec, double sigma);

}  // namespace nlos
