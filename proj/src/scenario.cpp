#include "nlos/scenario.hpp"

#include <random>
#include <sstream>

namespace nlos {

namespace {

constexpr double kMinSeparation = 1e-3;
constexpr int kMaxDrawAttempts = 100;

}  // namespace

void ScenarioSpec::validate() const {
    if (!(region_side > 0.0)) throw std::invalid_argument("scenario: region_side must be > 0");
    const std::size_t k = source ? static_cast<std::size_t>(source->size()) : 2;
    if (sensor_count < k + 1) throw std::invalid_argument("scenario: need at least k+1 sensors");
    if (kind == ScenarioKind::DeterministicPerimeter && !source)
        throw std::invalid_argument("scenario: deterministic-perimeter needs a fixed source");
    if (kind == ScenarioKind::DeterministicPerimeter && k != 2)
        throw std::invalid_argument("scenario: perimeter preset is two-dimensional");
    for (const auto& [sensor, upper] : nlos_pattern) {
        if (sensor >= sensor_count) throw std::invalid_argument("scenario: NLOS sensor index out of range");
        if (!(upper >= 0.0)) throw std::invalid_argument("scenario: NLOS bound must be >= 0");
    }
    if (!(propagation_speed > 0.0)) throw std::invalid_argument("scenario: speed must be > 0");
    if (!(onset_time >= 0.0)) throw std::invalid_argument("scenario: onset_time must be >= 0");
}

Deployment build_deterministic(std::size_t sensor_count, double region_side,
                               const Eigen::VectorXd& source, double onset_time,
                               double propagation_speed) {
    if (sensor_count < 3) throw std::invalid_argument("build_deterministic: need at least 3 sensors");
    if (!(region_side > 0.0)) throw std::invalid_argument("build_deterministic: side must be > 0");

    const double spacing = 4.0 * region_side / static_cast<double>(sensor_count);
    Eigen::MatrixXd sensors(2, static_cast<Eigen::Index>(sensor_count));
    for (std::size_t n = 0; n < sensor_count; ++n) {
        const double s = spacing * static_cast<double>(n);
        const int edge = std::min(3, static_cast<int>(s / region_side));
        const double along = s - edge * region_side;
        Eigen::Vector2d p;
        switch (edge) {
            case 0: p = {along, 0.0}; break;
            case 1: p = {region_side, along}; break;
            case 2: p = {region_side - along, region_side}; break;
            default: p = {0.0, region_side - along}; break;
        }
        sensors.col(static_cast<Eigen::Index>(n)) = p;
    }
    return Deployment(std::move(sensors), source, onset_time, propagation_speed);
}

Deployment build_random(std::size_t sensor_count, double region_side, std::uint64_t seed,
                        int dimension, double onset_time, double propagation_speed) {
    if (dimension != 2 && dimension != 3) throw std::invalid_argument("build_random: dimension must be 2 or 3");
    if (sensor_count < static_cast<std::size_t>(dimension) + 1)
        throw std::invalid_argument("build_random: need at least k+1 sensors");
    if (!(region_side > 0.0)) throw std::invalid_argument("build_random: side must be > 0");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(0.0, region_side);
    const auto L = static_cast<Eigen::Index>(sensor_count);

    for (int attempt = 0; attempt < kMaxDrawAttempts; ++attempt) {
        Eigen::VectorXd source(dimension);
        for (int a = 0; a < dimension; ++a) source[a] = coord(rng);
        Eigen::MatrixXd sensors(dimension, L);
        for (Eigen::Index i = 0; i < L; ++i)
            for (int a = 0; a < dimension; ++a) sensors(a, i) = coord(rng);

        bool separated = true;
        for (Eigen::Index i = 0; i < L && separated; ++i) {
            if ((sensors.col(i) - source).norm() < kMinSeparation) separated = false;
            for (Eigen::Index j = i + 1; j < L && separated; ++j)
                if ((sensors.col(i) - sensors.col(j)).norm() < kMinSeparation) separated = false;
        }
        if (separated) return Deployment(std::move(sensors), std::move(source), onset_time, propagation_speed);
    }
    std::ostringstream os;
    os << "build_random: no separated layout after " << kMaxDrawAttempts << " draws (seed " << seed << ")";
    throw std::runtime_error(os.str());
}

NoiseSpec make_noise(const ScenarioSpec& spec, double sigma) {
    NoiseSpec noise(spec.sensor_count, sigma);
    for (const auto& [sensor, upper] : spec.nlos_pattern) noise.set_nlos(sensor, upper);
    return noise;
}

}  // namespace nlos
