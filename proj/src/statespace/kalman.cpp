#include "hlds/statespace.hpp"

#include "hlds/error.hpp"

#include <cmath>
#include <string>

namespace hlds::statespace {
namespace {

std::string shape(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void check_state(const FilterState& state, const LinearModel& model) {
    const auto d = model.state_dim();
    if (state.estimate.size() != d || state.covariance.rows() != d || state.covariance.cols() != d) {
        throw ContractError("filter state has dimension " + std::to_string(state.estimate.size()) +
                            " (covariance " + shape(state.covariance) + ") but model state dimension is " +
                            std::to_string(d));
    }
}

Eigen::Map<const Vector> as_vector(std::span<const double> v, Eigen::Index expected, const char* what) {
    if (static_cast<Eigen::Index>(v.size()) != expected) {
        throw ContractError(std::string(what) + " has dimension " + std::to_string(v.size()) +
                            ", expected " + std::to_string(expected));
    }
    Eigen::Map<const Vector> out(v.data(), expected);
    if (!out.allFinite()) {
        throw ContractError(std::string(what) + " contains non-finite values");
    }
    return out;
}

} // namespace

void LinearModel::check_dims() const {
    const auto d = transition.rows();
    const auto m = observation.rows();
    if (d == 0 || transition.cols() != d) {
        throw ContractError("transition must be square and non-empty, got " + shape(transition));
    }
    if (m == 0 || observation.cols() != d) {
        throw ContractError("observation matrix is " + shape(observation) + ", expected Mx" + std::to_string(d));
    }
    if (state_noise_cov.rows() != d || state_noise_cov.cols() != d) {
        throw ContractError("state noise covariance is " + shape(state_noise_cov) + ", expected " +
                            std::to_string(d) + "x" + std::to_string(d));
    }
    if (obs_noise_cov.rows() != m || obs_noise_cov.cols() != m) {
        throw ContractError("observation noise covariance is " + shape(obs_noise_cov) + ", expected " +
                            std::to_string(m) + "x" + std::to_string(m));
    }
}

FilterState predict(const FilterState& state, const LinearModel& model) {
    model.check_dims();
    check_state(state, model);
    const Matrix& f = model.transition;
    FilterState prior;
    prior.estimate = f * state.estimate;
    prior.covariance = f * state.covariance * f.transpose() + model.state_noise_cov;
    return prior;
}

FilterState kalman_step(const FilterState& state, std::span<const double> observation,
                        const LinearModel& model) {
    const FilterState prior = predict(state, model);
    const auto y = as_vector(observation, model.obs_dim(), "observation");
    const Matrix& h = model.observation;

    // H P is reused for both the innovation covariance and the gain.
    const Matrix hp = h * prior.covariance;
    const Matrix innovation_cov = hp * h.transpose() + model.obs_noise_cov;
    const Eigen::LLT<Matrix> llt(innovation_cov);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("innovation covariance H P H^T + R^y is not positive definite");
    }
    // G = P H^T S^-1, i.e. G^T = S^-1 H P.
    const Matrix gain = llt.solve(hp).transpose();

    FilterState next;
    next.estimate = prior.estimate + gain * (y - h * prior.estimate);
    const auto d = model.state_dim();
    const Matrix updated = (Matrix::Identity(d, d) - gain * h) * prior.covariance;
    next.covariance = 0.5 * (updated + updated.transpose());
    return next;
}

double step_cost(std::span<const double> candidate, const FilterState& state,
                 std::span<const double> observation, const LinearModel& model) {
    const FilterState prior = predict(state, model);
    const auto x = as_vector(candidate, model.state_dim(), "candidate");
    const auto y = as_vector(observation, model.obs_dim(), "observation");

    const Eigen::LLT<Matrix> obs_llt(model.obs_noise_cov);
    if (obs_llt.info() != Eigen::Success) {
        throw NumericalError("observation noise covariance R^y is not positive definite");
    }
    const Eigen::LLT<Matrix> prior_llt(prior.covariance);
    if (prior_llt.info() != Eigen::Success) {
        throw NumericalError("a-priori covariance P_{t|t-1} is not positive definite");
    }
    const Vector residual = y - model.observation * x;
    const Vector deviation = x - prior.estimate;
    // r^T A^-1 r = |L^-1 r|^2
    const double fit = obs_llt.matrixL().solve(residual).squaredNorm();
    const double prior_term = prior_llt.matrixL().solve(deviation).squaredNorm();
    return fit + prior_term;
}

} // namespace hlds::statespace
