#include "nlos/bench.hpp"

#include <cmath>
#include <limits>

namespace nlos {

OracleResult grid_oracle(const ProblemInstance& inst, double resolution, const OracleRegion& region) {
    if (inst.dimension() != 2) throw std::invalid_argument("grid_oracle: two-dimensional problems only");
    if (!(resolution > 0.0)) throw std::invalid_argument("grid_oracle: resolution must be > 0");
    if (!(region.upper.array() >= region.lower.array()).all())
        throw std::invalid_argument("grid_oracle: empty region");

    const auto L = static_cast<Eigen::Index>(inst.sensor_count());
    const double c = inst.speed();
    const auto& t = inst.timestamps();

    // Triangle constraints bound t0 independently of x.
    double pair_cap = std::numeric_limits<double>::infinity();
    Eigen::Index p = 0;
    for (Eigen::Index i = 0; i < L; ++i)
        for (Eigen::Index j = i + 1; j < L; ++j)
            pair_cap = std::min(pair_cap, 0.5 * (t[i] + t[j] - inst.pair_distances()[p++] / c));
    const double time_cap = std::min(pair_cap, t.minCoeff());

    const auto nx = static_cast<long>(std::floor((region.upper.x() - region.lower.x()) / resolution + 1e-9)) + 1;
    const auto ny = static_cast<long>(std::floor((region.upper.y() - region.lower.y()) / resolution + 1e-9)) + 1;

    OracleResult best;
    best.objective = std::numeric_limits<double>::infinity();
    Eigen::VectorXd range(L);
    for (long a = 0; a < nx; ++a) {
        for (long b = 0; b < ny; ++b) {
            const Eigen::Vector2d x(region.lower.x() + static_cast<double>(a) * resolution,
                                    region.lower.y() + static_cast<double>(b) * resolution);
            double t0 = time_cap;
            for (Eigen::Index i = 0; i < L; ++i) {
                range[i] = (x - inst.sensors().col(i)).norm();
                t0 = std::min(t0, t[i] - range[i] / c);
            }
            if (t0 < 0.0) continue;
            ++best.feasible_points;
            double f = 0.0;
            for (Eigen::Index i = 0; i < L; ++i) f += std::abs((t[i] - t0) * c - range[i]);
            if (f < best.objective) {
                best.objective = f;
                best.position = x;
                best.onset_time = t0;
            }
        }
    }
    if (best.feasible_points == 0) throw std::domain_error("grid_oracle: no feasible grid point");
    return best;
}

OracleResult grid_oracle(const ProblemInstance& inst, double resolution) {
    if (inst.dimension() != 2) throw std::invalid_argument("grid_oracle: two-dimensional problems only");
    OracleRegion region{inst.sensors().rowwise().minCoeff(), inst.sensors().rowwise().maxCoeff()};
    return grid_oracle(inst, resolution, region);
}

}  // namespace nlos
