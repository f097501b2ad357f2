#include "nlos/formulation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nlos {

Dimensions dimensions_for(std::size_t sensor_count, int dimension) {
    const std::size_t L = sensor_count;
    return Dimensions{L + static_cast<std::size_t>(dimension) + 1, (L * L + 5 * L + 2) / 2, L};
}

namespace constraint {

std::pair<std::size_t, std::size_t> pair_from_index(std::size_t one_based, std::size_t L) {
    const std::size_t K = (L * L + 5 * L + 2) / 2;
    if (one_based < first_pair(L) || one_based > K)
        throw std::out_of_range("pair_from_index: index outside the pair block");
    for (std::size_t i = 1; i < L; ++i) {
        const std::size_t last = pair(i, L, L);
        if (one_based <= last) return {i, one_based - pair(i, i + 1, L) + i + 1};
    }
    throw std::logic_error("pair_from_index: unreachable");
}

}  // namespace constraint

Eigen::VectorXd VariableVector::pack() const {
    Eigen::VectorXd z(1 + x.size() + d.size());
    z[0] = t0;
    z.segment(1, x.size()) = x;
    z.tail(d.size()) = d;
    return z;
}

VariableVector VariableVector::unpack(const Eigen::VectorXd& z, std::size_t sensor_count,
                                      int dimension) {
    const auto L = static_cast<Eigen::Index>(sensor_count);
    if (z.size() != 1 + dimension + L) throw std::invalid_argument("VariableVector::unpack: size mismatch");
    return VariableVector{z[0], z.segment(1, dimension), z.tail(L)};
}

MultiplierVector MultiplierVector::zeros(const Dimensions& dims) {
    return MultiplierVector{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dims.K)),
                            Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dims.M))};
}

ProblemInstance::ProblemInstance(Eigen::VectorXd timestamps, Eigen::MatrixXd sensors,
                                 double propagation_speed, double gamma, double rho, Loss loss)
    : timestamps_(std::move(timestamps)),
      sensors_(std::move(sensors)),
      c_(propagation_speed),
      gamma_(gamma),
      rho_(rho),
      loss_(loss) {
    const auto L = timestamps_.size();
    if (sensors_.cols() != L) throw std::invalid_argument("ProblemInstance: sensor/timestamp count mismatch");
    if (sensors_.rows() != 2 && sensors_.rows() != 3)
        throw std::invalid_argument("ProblemInstance: dimension must be 2 or 3");
    if (L < sensors_.rows() + 1) throw std::invalid_argument("ProblemInstance: need at least k+1 sensors");
    if (!(gamma_ > 0.0)) throw std::invalid_argument("ProblemInstance: gamma must be > 0");
    if (!(rho_ > 0.0)) throw std::invalid_argument("ProblemInstance: rho must be > 0");
    if (!(c_ > 0.0)) throw std::invalid_argument("ProblemInstance: propagation speed must be > 0");

    dims_ = dimensions_for(static_cast<std::size_t>(L), static_cast<int>(sensors_.rows()));
    pair_distance_.resize(L * (L - 1) / 2);
    Eigen::Index p = 0;
    for (Eigen::Index i = 0; i < L; ++i) {
        for (Eigen::Index j = i + 1; j < L; ++j) {
            const double dist = (sensors_.col(i) - sensors_.col(j)).norm();
            if (!(dist > 0.0)) throw std::invalid_argument("ProblemInstance: coincident sensors");
            pair_distance_[p++] = dist;
        }
    }
}

ProblemInstance::ProblemInstance(const MeasurementSet& measurements, const Deployment& deployment,
                                 double gamma, double rho, Loss loss)
    : ProblemInstance(measurements.timestamps, deployment.sensors(), deployment.propagation_speed(),
                      gamma, rho, loss) {}

ProblemInstance ProblemInstance::with_loss(Loss loss) const {
    ProblemInstance copy = *this;
    copy.loss_ = loss;
    return copy;
}

Eigen::VectorXd ProblemInstance::pack_point(const Eigen::VectorXd& x, double t0) const {
    VariableVector v{t0, x, Eigen::VectorXd(timestamps_.size())};
    for (Eigen::Index i = 0; i < timestamps_.size(); ++i) v.d[i] = (x - sensors_.col(i)).norm();
    return v.pack();
}

double smoothed_abs(double u, double gamma) {
    const double a = std::abs(u);
    return a + (std::log1p(std::exp(-2.0 * gamma * a)) - std::numbers::ln2) / gamma;
}

double smoothed_abs_grad(double u, double gamma) { return std::tanh(gamma * u); }

double loss_value(double u, const ProblemInstance& inst) {
    return inst.loss() == Loss::SmoothedL1 ? smoothed_abs(u, inst.gamma()) : 0.5 * u * u;
}

double loss_slope(double u, const ProblemInstance& inst) {
    return inst.loss() == Loss::SmoothedL1 ? smoothed_abs_grad(u, inst.gamma()) : u;
}

Eigen::VectorXd residuals(const Eigen::VectorXd& z, const ProblemInstance& inst) {
    const auto L = static_cast<Eigen::Index>(inst.sensor_count());
    const int k = inst.dimension();
    return (inst.timestamps().array() - z[0]) * inst.speed() - z.segment(1 + k, L).array();
}

double objective(const Eigen::VectorXd& z, const ProblemInstance& inst) {
    const Eigen::VectorXd r = residuals(z, inst);
    double f = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) f += loss_value(r[i], inst);
    return f;
}

Eigen::VectorXd eval_inequalities(const Eigen::VectorXd& z, const ProblemInstance& inst) {
    Eigen::VectorXd g;
    eval_inequalities_into(z, inst, g);
    return g;
}

void eval_inequalities_into(const Eigen::VectorXd& z, const ProblemInstance& inst, Eigen::VectorXd& g) {
    using constraint::storage_index;
    const std::size_t L = inst.sensor_count();
    const int k = inst.dimension();
    const double c = inst.speed();
    const double t0 = z[0];
    const auto& t = inst.timestamps();

    g.resize(static_cast<Eigen::Index>(inst.dims().K));
    g[storage_index(constraint::onset())] = -t0;
    for (std::size_t i = 1; i <= L; ++i) {
        const double ti = t[static_cast<Eigen::Index>(i - 1)];
        const double di = z[static_cast<Eigen::Index>(k + i)];
        g[storage_index(constraint::temporal(i, L))] = t0 - ti;
        g[storage_index(constraint::nonneg_range(i, L))] = -di;
        g[storage_index(constraint::range_bound(i, L))] = di - (ti - t0) * c;
    }
    const auto& dist = inst.pair_distances();
    for (std::size_t i = 1; i < L; ++i) {
        for (std::size_t j = i + 1; j <= L; ++j) {
            const std::size_t flat = storage_index(constraint::pair(i, j, L));
            const std::size_t p = flat - storage_index(constraint::first_pair(L));
            g[static_cast<Eigen::Index>(flat)] =
                (2.0 * t0 - t[static_cast<Eigen::Index>(i - 1)] - t[static_cast<Eigen::Index>(j - 1)]) * c +
                dist[static_cast<Eigen::Index>(p)];
        }
    }
}

Eigen::VectorXd eval_equalities(const Eigen::VectorXd& z, const ProblemInstance& inst) {
    Eigen::VectorXd h;
    eval_equalities_into(z, inst, h);
    return h;
}

void eval_equalities_into(const Eigen::VectorXd& z, const ProblemInstance& inst, Eigen::VectorXd& h) {
    const auto L = static_cast<Eigen::Index>(inst.sensor_count());
    const int k = inst.dimension();
    const auto x = z.segment(1, k);
    h.resize(L);
    for (Eigen::Index i = 0; i < L; ++i) {
        const double di = z[1 + k + i];
        h[i] = di * di - (x - inst.sensors().col(i)).squaredNorm();
    }
}

double lagrangian(const Eigen::VectorXd& z, const MultiplierVector& nu, const ProblemInstance& inst) {
    return objective(z, inst) + nu.mu.dot(eval_inequalities(z, inst)) +
           nu.lambda.dot(eval_equalities(z, inst));
}

double augmented_lagrangian(const Eigen::VectorXd& z, const MultiplierVector& nu,
                            const ProblemInstance& inst) {
    const Eigen::VectorXd g = eval_inequalities(z, inst);
    const Eigen::VectorXd h = eval_equalities(z, inst);
    const double penalty = nu.mu.cwiseProduct(g).squaredNorm() + nu.lambda.cwiseProduct(h).squaredNorm();
    return objective(z, inst) + nu.mu.dot(g) + nu.lambda.dot(h) + 0.5 * inst.rho() * penalty;
}

}  // namespace nlos
