#include "nlos/bench.hpp"

#include <cmath>

namespace nlos {

double crlb_los(const Deployment& deployment, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("crlb_los: sigma must be > 0");
    const auto L = static_cast<Eigen::Index>(deployment.sensor_count());
    const int k = deployment.dimension();
    const Eigen::VectorXd& x = deployment.source();

    auto unit = [&](Eigen::Index i) -> Eigen::VectorXd {
        const Eigen::VectorXd diff = x - deployment.sensors().col(i);
        return diff / diff.norm();
    };

    // Rows: gradient of ||x - x_i|| - ||x - x_1|| for i = 2..L.
    Eigen::MatrixXd J(L - 1, k);
    const Eigen::VectorXd u1 = unit(0);
    for (Eigen::Index i = 1; i < L; ++i) J.row(i - 1) = (unit(i) - u1).transpose();

    // n_{i,1} = n_i - n_1 gives the covariance sigma^2 (I + 1 1^T).
    const Eigen::MatrixXd cov =
        sigma * sigma * (Eigen::MatrixXd::Identity(L - 1, L - 1) + Eigen::MatrixXd::Ones(L - 1, L - 1));
    const Eigen::MatrixXd fim = J.transpose() * cov.llt().solve(J);

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fim);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 1e-12 * hi)) throw std::domain_error("crlb_los: singular Fisher information (degenerate geometry)");
    return std::sqrt(eig.eigenvalues().cwiseInverse().sum());
}

}  // namespace nlos
