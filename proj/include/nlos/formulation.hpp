#pragma once

#include "nlos/model.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace nlos {

/// Data-fit loss applied to the residuals (t_i - t0) c - d_i.
enum class Loss {
    SmoothedL1,  ///< ln(cosh(gamma u)) / gamma
    Squared,     ///< u^2 / 2 (non-robust baseline)
};

/// Problem sizes: N variables, K inequalities, M equalities.
struct Dimensions {
    std::size_t N = 0;
    std::size_t K = 0;
    std::size_t M = 0;
};

Dimensions dimensions_for(std::size_t sensor_count, int dimension);

/// Constraint numbering.
///
/// Documentation uses the 1-based numbering g_1 .. g_K:
///   g_1            = -t0
///   g_{i+1}        = t0 - t_i                      i = 1..L
///   g_{i+L+1}      = -d_i                          i = 1..L
///   g_{i+2L+1}     = d_i - (t_i - t0) c            i = 1..L
///   g_{p(i,j)}     = (2 t0 - t_i - t_j) c + ||x_i - x_j||,   1 <= i < j <= L
/// with p(i,j) = (2L - i)(i - 1)/2 + j - i + 3L + 1.
/// Storage is 0-based; storage_index() is the single offset between the two.
namespace constraint {

constexpr std::size_t storage_index(std::size_t one_based) noexcept { return one_based - 1; }

constexpr std::size_t onset() noexcept { return 1; }
constexpr std::size_t temporal(std::size_t i, std::size_t /*L*/) noexcept { return i + 1; }
constexpr std::size_t nonneg_range(std::size_t i, std::size_t L) noexcept { return i + L + 1; }
constexpr std::size_t range_bound(std::size_t i, std::size_t L) noexcept { return i + 2 * L + 1; }

/// 1-based flat index of the pair constraint (i, j), 1 <= i < j <= L.
constexpr std::size_t pair(std::size_t i, std::size_t j, std::size_t L) noexcept {
    return (2 * L - i) * (i - 1) / 2 + j - i + 3 * L + 1;
}

/// 1-based offset of the first pair constraint, 3L + 2.
constexpr std::size_t first_pair(std::size_t L) noexcept { return 3 * L + 2; }

/// Inverse of pair(): 1-based (i, j) for a 1-based flat index in the pair block.
std::pair<std::size_t, std::size_t> pair_from_index(std::size_t one_based, std::size_t L);

}  // namespace constraint

/// Packed variable vector z = [t0, x^T, d^T]^T with typed accessors.
struct VariableVector {
    double t0 = 0.0;
    Eigen::VectorXd x;
    Eigen::VectorXd d;

    Eigen::VectorXd pack() const;
    static VariableVector unpack(const Eigen::VectorXd& z, std::size_t sensor_count, int dimension);
};

/// nu = [mu^T, lambda^T]^T.
struct MultiplierVector {
    Eigen::VectorXd mu;      ///< K inequality multipliers
    Eigen::VectorXd lambda;  ///< M equality multipliers

    static MultiplierVector zeros(const Dimensions& dims);
};

/// Immutable optimization problem built from one measurement realization.
class ProblemInstance {
public:
    static constexpr double kDefaultGamma = 100.0;
    static constexpr double kDefaultRho = 5.0;

    ProblemInstance(Eigen::VectorXd timestamps, Eigen::MatrixXd sensors, double propagation_speed,
                    double gamma = kDefaultGamma, double rho = kDefaultRho,
                    Loss loss = Loss::SmoothedL1);
    ProblemInstance(const MeasurementSet& measurements, const Deployment& deployment,
                    double gamma = kDefaultGamma, double rho = kDefaultRho,
                    Loss loss = Loss::SmoothedL1);

    const Eigen::VectorXd& timestamps() const noexcept { return timestamps_; }
    const Eigen::MatrixXd& sensors() const noexcept { return sensors_; }
    double speed() const noexcept { return c_; }
    double gamma() const noexcept { return gamma_; }
    double rho() const noexcept { return rho_; }
    Loss loss() const noexcept { return loss_; }
    const Dimensions& dims() const noexcept { return dims_; }
    std::size_t sensor_count() const noexcept { return static_cast<std::size_t>(timestamps_.size()); }
    int dimension() const noexcept { return static_cast<int>(sensors_.rows()); }

    /// ||x_i - x_j|| in pair-block storage order, length L(L-1)/2.
    const Eigen::VectorXd& pair_distances() const noexcept { return pair_distance_; }

    /// Same data with a different loss (used by the squared-loss baseline).
    ProblemInstance with_loss(Loss loss) const;

    /// z from a known source position and onset time (d_i = ||x - x_i||).
    Eigen::VectorXd pack_point(const Eigen::VectorXd& x, double t0) const;

private:
    Eigen::VectorXd timestamps_;
    Eigen::MatrixXd sensors_;
    double c_;
    double gamma_;
    double rho_;
    Loss loss_;
    Dimensions dims_;
    Eigen::VectorXd pair_distance_;
};

/// ln((e^{gamma u} + e^{-gamma u}) / 2) / gamma, evaluated as
/// |u| + log1p(e^{-2 gamma |u|}) / gamma - ln 2 / gamma.
double smoothed_abs(double u, double gamma);

/// d/du smoothed_abs = tanh(gamma u).
double smoothed_abs_grad(double u, double gamma);

double loss_value(double u, const ProblemInstance& inst);
double loss_slope(double u, const ProblemInstance& inst);

/// Residuals (t_i - t0) c - d_i.
Eigen::VectorXd residuals(const Eigen::VectorXd& z, const ProblemInstance& inst);

double objective(const Eigen::VectorXd& z, const ProblemInstance& inst);
Eigen::VectorXd eval_inequalities(const Eigen::VectorXd& z, const ProblemInstance& inst);
Eigen::VectorXd eval_equalities(const Eigen::VectorXd& z, const ProblemInstance& inst);

/// Allocation-free variants; out is resized only when its size differs.
void eval_inequalities_into(const Eigen::VectorXd& z, const ProblemInstance& inst, Eigen::VectorXd& out);
void eval_equalities_into(const Eigen::VectorXd& z, const ProblemInstance& inst, Eigen::VectorXd& out);

/// L(z, nu) = f + mu^T g + lambda^T h.
double lagrangian(const Eigen::VectorXd& z, const MultiplierVector& nu, const ProblemInstance& inst);

/// L_rho = L + rho/2 ( sum (mu_i g_i)^2 + sum (lambda_i h_i)^2 ).
double augmented_lagrangian(const Eigen::VectorXd& z, const MultiplierVector& nu,
                            const ProblemInstance& inst);

}  // namespace nlos
