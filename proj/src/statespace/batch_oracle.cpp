#include "hlds/statespace.hpp"

#include "hlds/error.hpp"

#include <string>

namespace hlds::statespace {
namespace {

constexpr std::size_t kMaxSteps = 50;
constexpr Eigen::Index kMaxUnknowns = 500;

// Symmetric square root of a PSD matrix; tiny negative eigenvalues from
// round-off are clamped to zero.
Matrix psd_sqrt(const Matrix& m) {
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.transpose()));
    if (eig.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition of state noise covariance failed");
    }
    const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

// Inverse lower Cholesky factor L^-1 with A = L L^T, used to whiten residuals.
Matrix whitener(const Matrix& cov, const char* name) {
    const Eigen::LLT<Matrix> llt(cov);
    if (llt.info() != Eigen::Success) {
        throw NumericalError(std::string(name) + " is not positive definite");
    }
    return llt.matrixL().solve(Matrix::Identity(cov.rows(), cov.cols()));
}

} // namespace

std::vector<Vector> batch_map_oracle(std::span<const LinearModel> models,
                                     std::span<const Vector> observations,
                                     const FilterState& init) {
    const std::size_t steps = observations.size();
    if (models.size() != steps) {
        throw ContractError("batch oracle needs one model per observation (" + std::to_string(models.size()) +
                            " models, " + std::to_string(steps) + " observations)");
    }
    const Eigen::Index d = init.estimate.size();
    if (init.covariance.rows() != d || init.covariance.cols() != d) {
        throw ContractError("initial covariance does not match initial estimate dimension");
    }
    if (steps > kMaxSteps || d * static_cast<Eigen::Index>(steps) > kMaxUnknowns) {
        throw ContractError("batch oracle limited to T <= 50 and D*T <= 500 (T=" + std::to_string(steps) +
                            ", D=" + std::to_string(d) + ")");
    }

    // Parameters: theta = [x_0; u_1; ...; u_T] with x_t = F_t x_{t-1} + A_t u_t,
    // A_t A_t^T = Rx_t and u_t ~ N(0, I). This handles singular Rx directly.
    const Eigen::Index unknowns = d * static_cast<Eigen::Index>(steps + 1);
    Eigen::Index rows = d + d * static_cast<Eigen::Index>(steps);
    for (std::size_t t = 0; t < steps; ++t) {
        models[t].check_dims();
        if (models[t].state_dim() != d) {
            throw ContractError("model " + std::to_string(t) + " has state dimension " +
                                std::to_string(models[t].state_dim()) + ", expected " + std::to_string(d));
        }
        if (observations[t].size() != models[t].obs_dim()) {
            throw ContractError("observation " + std::to_string(t) + " has wrong dimension");
        }
        rows += models[t].obs_dim();
    }

    Matrix system = Matrix::Zero(rows, unknowns);
    Vector rhs = Vector::Zero(rows);
    Eigen::Index row = 0;

    const Matrix prior_white = whitener(init.covariance, "initial covariance");
    system.block(row, 0, d, d) = prior_white;
    rhs.segment(row, d) = prior_white * init.estimate;
    row += d;

    // phi maps theta to the current x_t.
    Matrix phi = Matrix::Zero(d, unknowns);
    phi.leftCols(d).setIdentity();
    std::vector<Matrix> maps;
    maps.reserve(steps + 1);
    maps.push_back(phi);

    for (std::size_t t = 0; t < steps; ++t) {
        const LinearModel& m = models[t];
        const Eigen::Index ucol = d * static_cast<Eigen::Index>(t + 1);
        phi = m.transition * phi;
        phi.block(0, ucol, d, d) += psd_sqrt(m.state_noise_cov);
        maps.push_back(phi);

        system.block(row, ucol, d, d).setIdentity();
        row += d;

        const Matrix obs_white = whitener(m.obs_noise_cov, "observation noise covariance");
        const Eigen::Index md = m.obs_dim();
        system.block(row, 0, md, unknowns) = obs_white * m.observation * phi;
        rhs.segment(row, md) = obs_white * observations[t];
        row += md;
    }

    const Eigen::ColPivHouseholderQR<Matrix> qr(system);
    if (qr.rank() < unknowns) {
        throw NumericalError("batch MAP system is rank deficient");
    }
    const Vector theta = qr.solve(rhs);

    std::vector<Vector> trajectory;
    trajectory.reserve(steps + 1);
    for (const Matrix& map : maps) {
        trajectory.push_back(map * theta);
    }
    return trajectory;
}

} // namespace hlds::statespace
