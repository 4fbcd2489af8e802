#pragma once

// Linear-Gaussian state-space model and the sequential Kalman recursion:
//
//   x_t = F x_{t-1} + e_x,   e_x ~ N(0, Rx)
//   y_t = H x_t     + e_y,   e_y ~ N(0, Ry)
//
// Also a dense batch MAP solver used as an independent check of the recursion.

#include "hlds/linalg.hpp"

#include <span>
#include <vector>

namespace hlds::statespace {

struct LinearModel {
    Matrix transition;      // F, D x D
    Matrix observation;     // H, M x D
    Matrix state_noise_cov; // Rx, D x D, symmetric PSD
    Matrix obs_noise_cov;   // Ry, M x M, symmetric PD

    Eigen::Index state_dim() const { return transition.rows(); }
    Eigen::Index obs_dim() const { return observation.rows(); }

    /// Throws ContractError if the four matrices have inconsistent shapes.
    void check_dims() const;
};

/// Filtered estimate and its error covariance. The covariance is kept exactly
/// symmetric: every update ends with (P + P^T) / 2.
struct FilterState {
    Vector estimate;
    Matrix covariance;
};

/// A-priori (predicted) moments F x and F P F^T + Rx.
FilterState predict(const FilterState& state, const LinearModel& model);

/// One predict/update cycle. The gain solves against the Cholesky factor of
/// H P H^T + Ry; the covariance update is (I - G H) P followed by
/// symmetrization.
///
/// Throws ContractError on dimension mismatch or non-finite observation and
/// NumericalError when the innovation covariance is not positive definite.
FilterState kalman_step(const FilterState& state, std::span<const double> observation,
                        const LinearModel& model);

/// Quadratic cost minimized by kalman_step:
///   (y - H x)^T Ry^-1 (y - H x) + (x - x_prior)^T P_prior^-1 (x - x_prior)
/// where x_prior, P_prior are the a-priori moments built from `state`.
double step_cost(std::span<const double> candidate, const FilterState& state,
                 std::span<const double> observation, const LinearModel& model);

/// MAP trajectory of x_0..x_T given a Gaussian prior `init` on x_0 and
/// observations y_1..y_T (observation t uses models[t-1]). Solves the stacked
/// whitened least-squares problem densely. Limits: T <= 50, D*T <= 500.
/// Element t of the result is the MAP estimate of x_t (T+1 entries).
std::vector<Vector> batch_map_oracle(std::span<const LinearModel> models,
                                     std::span<const Vector> observations,
                                     const FilterState& init);

} // namespace hlds::statespace
