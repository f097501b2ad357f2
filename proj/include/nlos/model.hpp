#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlos {

/// Raised when generated timestamps break the positivity premise of the
/// temporal constraints.
class MeasurementError : public std::runtime_error {
public:
    MeasurementError(const std::string& what, std::size_t sensor)
        : std::runtime_error(what), sensor_(sensor) {}

    /// 0-based index of the offending sensor.
    std::size_t sensor() const noexcept { return sensor_; }

private:
    std::size_t sensor_;
};

/// Sensor geometry, true source, onset time and propagation speed.
///
/// Sensors are stored column-wise in a k x L matrix (k in {2, 3}). The
/// constructor enforces L >= k + 1, c > 0, t0 >= 0, pairwise-distinct
/// sensors and a non-zero distance between the source and every sensor.
class Deployment {
public:
    Deployment(Eigen::MatrixXd sensors, Eigen::VectorXd source, double onset_time,
               double propagation_speed);

    const Eigen::MatrixXd& sensors() const noexcept { return sensors_; }
    Eigen::VectorXd sensor(std::size_t i) const;
    const Eigen::VectorXd& source() const noexcept { return source_; }
    double onset_time() const noexcept { return onset_time_; }
    double propagation_speed() const noexcept { return speed_; }

    std::size_t sensor_count() const noexcept { return static_cast<std::size_t>(sensors_.cols()); }
    int dimension() const noexcept { return static_cast<int>(sensors_.rows()); }

private:
    Eigen::MatrixXd sensors_;
    Eigen::VectorXd source_;
    double onset_time_;
    double speed_;
};

/// Per-sensor Gaussian standard deviation (meters) and NLOS upper bound
/// omega_i (meters). omega_i = 0 marks a LOS path.
struct NoiseSpec {
    Eigen::VectorXd sigma;
    Eigen::VectorXd nlos_upper;

    NoiseSpec() = default;
    /// Common sigma on all L sensors, every path LOS.
    NoiseSpec(std::size_t sensor_count, double common_sigma);

    NoiseSpec& set_nlos(std::size_t sensor, double upper);
    bool line_of_sight() const;
    /// Throws std::invalid_argument unless sizes match and all entries are >= 0.
    void validate(std::size_t sensor_count) const;
};

/// Received timestamps, TDOAs against sensor 0, and the drawn errors.
struct MeasurementSet {
    Eigen::VectorXd timestamps;  ///< t_i, seconds
    Eigen::VectorXd tdoas;       ///< t_{i} - t_{0} for i = 1..L-1
    Eigen::VectorXd noise;       ///< n_i, meters
    Eigen::VectorXd nlos;        ///< q_i, meters

    std::size_t sensor_count() const noexcept { return static_cast<std::size_t>(timestamps.size()); }
};

/// ||x - x_i||_2 for 0-based sensor index i. Throws std::out_of_range.
double true_range(const Deployment& deployment, std::size_t i);

/// t_i = t0 + (||x - x_i|| + n_i + q_i) / c with n_i ~ N(0, sigma_i^2) and
/// q_i ~ U(0, omega_i). A standard normal and a unit uniform are drawn for
/// every sensor regardless of sigma/omega, so equal seeds give common random
/// numbers across noise levels. Throws MeasurementError if some t_i <= 0.
MeasurementSet generate_measurements(const Deployment& deployment, const NoiseSpec& noise,
                                     std::uint64_t seed);

}  // namespace nlos
