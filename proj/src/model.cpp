#include "nlos/model.hpp"

#include <random>
#include <sstream>

namespace nlos {

Deployment::Deployment(Eigen::MatrixXd sensors, Eigen::VectorXd source, double onset_time,
                       double propagation_speed)
    : sensors_(std::move(sensors)),
      source_(std::move(source)),
      onset_time_(onset_time),
      speed_(propagation_speed) {
    const auto k = sensors_.rows();
    const auto L = sensors_.cols();
    if (k != 2 && k != 3) throw std::invalid_argument("Deployment: dimension must be 2 or 3");
    if (source_.size() != k) throw std::invalid_argument("Deployment: source dimension mismatch");
    if (L < k + 1) throw std::invalid_argument("Deployment: need at least k+1 sensors");
    if (!(speed_ > 0.0)) throw std::invalid_argument("Deployment: propagation speed must be > 0");
    if (!(onset_time_ >= 0.0)) throw std::invalid_argument("Deployment: onset time must be >= 0");
    if (!sensors_.allFinite() || !source_.allFinite())
        throw std::invalid_argument("Deployment: non-finite position");
    for (Eigen::Index i = 0; i < L; ++i) {
        if ((sensors_.col(i) - source_).norm() <= 0.0) {
            std::ostringstream os;
            os << "Deployment: sensor " << i + 1 << " coincides with the source";
            throw std::invalid_argument(os.str());
        }
        for (Eigen::Index j = i + 1; j < L; ++j) {
            if ((sensors_.col(i) - sensors_.col(j)).norm() <= 0.0) {
                std::ostringstream os;
                os << "Deployment: sensors " << i + 1 << " and " << j + 1 << " coincide";
                throw std::invalid_argument(os.str());
            }
        }
    }
}

Eigen::VectorXd Deployment::sensor(std::size_t i) const {
    if (i >= sensor_count()) throw std::out_of_range("Deployment::sensor: index out of range");
    return sensors_.col(static_cast<Eigen::Index>(i));
}

NoiseSpec::NoiseSpec(std::size_t sensor_count, double common_sigma)
    : sigma(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(sensor_count), common_sigma)),
      nlos_upper(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sensor_count))) {}

NoiseSpec& NoiseSpec::set_nlos(std::size_t sensor, double upper) {
    if (sensor >= static_cast<std::size_t>(nlos_upper.size()))
        throw std::out_of_range("NoiseSpec::set_nlos: sensor index out of range");
    if (!(upper >= 0.0)) throw std::invalid_argument("NoiseSpec::set_nlos: bound must be >= 0");
    nlos_upper[static_cast<Eigen::Index>(sensor)] = upper;
    return *this;
}

bool NoiseSpec::line_of_sight() const { return (nlos_upper.array() == 0.0).all(); }

void NoiseSpec::validate(std::size_t sensor_count) const {
    const auto L = static_cast<Eigen::Index>(sensor_count);
    if (sigma.size() != L || nlos_upper.size() != L)
        throw std::invalid_argument("NoiseSpec: size does not match sensor count");
    if (!((sigma.array() >= 0.0).all()) || !sigma.allFinite())
        throw std::invalid_argument("NoiseSpec: sigma must be finite and >= 0");
    if (!((nlos_upper.array() >= 0.0).all()) || !nlos_upper.allFinite())
        throw std::invalid_argument("NoiseSpec: NLOS bounds must be finite and >= 0");
}

double true_range(const Deployment& deployment, std::size_t i) {
    if (i >= deployment.sensor_count()) throw std::out_of_range("true_range: sensor index out of range");
    return (deployment.source() - deployment.sensors().col(static_cast<Eigen::Index>(i))).norm();
}

MeasurementSet generate_measurements(const Deployment& deployment, const NoiseSpec& noise,
                                     std::uint64_t seed) {
    const std::size_t L = deployment.sensor_count();
    noise.validate(L);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    MeasurementSet m;
    m.timestamps.resize(static_cast<Eigen::Index>(L));
    m.noise.resize(static_cast<Eigen::Index>(L));
    m.nlos.resize(static_cast<Eigen::Index>(L));

    const double c = deployment.propagation_speed();
    for (std::size_t i = 0; i < L; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const double z = gauss(rng);
        const double u = unit(rng);
        m.noise[ii] = noise.sigma[ii] * z;
        m.nlos[ii] = noise.nlos_upper[ii] > 0.0 ? noise.nlos_upper[ii] * u : 0.0;
        m.timestamps[ii] =
            deployment.onset_time() + (true_range(deployment, i) + m.noise[ii] + m.nlos[ii]) / c;
        if (!(m.timestamps[ii] > 0.0)) {
            std::ostringstream os;
            os << "generate_measurements: timestamp of sensor " << i + 1 << " is " << m.timestamps[ii]
               << " (must be > 0)";
            throw MeasurementError(os.str(), i);
        }
    }

    m.tdoas.resize(static_cast<Eigen::Index>(L - 1));
    for (std::size_t i = 1; i < L; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        m.tdoas[ii - 1] = m.timestamps[ii] - m.timestamps[0];
    }
    return m;
}

}  // namespace nlos
