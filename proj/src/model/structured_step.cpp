#include "structured_step.hpp"

#include "hlds/error.hpp"
#include "hlds/kernels.hpp"

#include <cmath>
#include <string>

namespace hlds::model::detail {

StructuredStepper::StructuredStepper(const JointModel& model)
    : model_(model),
      d_(static_cast<std::size_t>(model.state_dim())),
      m_(static_cast<std::size_t>(model.obs_dim())),
      bottom_(static_cast<std::size_t>(model.bottom().offset)),
      noise_(model.state_dim()),
      b_(d_ * d_),
      chol_(m_ * m_),
      w_(m_ * d_),
      wt_(d_ * m_),
      innovation_(m_) {
    for (std::size_t i = 0; i < d_; ++i) {
        noise_[static_cast<Eigen::Index>(i)] = model.dense.state_noise_cov(static_cast<Eigen::Index>(i),
                                                                           static_cast<Eigen::Index>(i));
    }
}

void StructuredStepper::step(statespace::FilterState& state, std::span<const double> observation) {
    const auto& k = kernels::active();
    const auto& rows = model_.rows;
    const auto di = static_cast<Eigen::Index>(d_);
    if (state.estimate.size() != di || state.covariance.rows() != di || state.covariance.cols() != di) {
        throw ContractError("filter state does not match joint model dimension " + std::to_string(d_));
    }
    if (observation.size() != m_) {
        throw ContractError("observation has dimension " + std::to_string(observation.size()) + ", expected " +
                            std::to_string(m_));
    }
    for (double v : observation) {
        if (!std::isfinite(v)) {
            throw ContractError("observation contains non-finite values");
        }
    }

    // Covariance is column-major and symmetric, so column j doubles as row j.
    double* p = state.covariance.data();
    double* x = state.estimate.data();

    // x_prior = F x
    Vector prior(di);
    for (std::size_t i = 0; i < d_; ++i) {
        const TransitionRow& r = rows[i];
        prior[static_cast<Eigen::Index>(i)] =
            r.diagonal * x[i] + (r.parent >= 0 ? r.coupling * x[r.parent] : 0.0);
    }

    // B = P F^T, column j = diag_j P[:, j] + c_j P[:, parent_j]
    for (std::size_t j = 0; j < d_; ++j) {
        const TransitionRow& r = rows[j];
        double* out = b_.data() + j * d_;
        const double* pj = p + j * d_;
        if (r.parent >= 0) {
            k.axpby(r.diagonal, pj, r.coupling, p + static_cast<std::size_t>(r.parent) * d_, out, d_);
        } else {
            k.axpby(r.diagonal, pj, 0.0, pj, out, d_);
        }
    }

    // P_prior = F B + Rx, written over P.
    for (std::size_t j = 0; j < d_; ++j) {
        const double* bj = b_.data() + j * d_;
        double* pj = p + j * d_;
        for (std::size_t i = 0; i < d_; ++i) {
            const TransitionRow& r = rows[i];
            pj[i] = r.diagonal * bj[i] + (r.parent >= 0 ? r.coupling * bj[r.parent] : 0.0);
        }
        pj[j] += noise_[static_cast<Eigen::Index>(j)];
    }

    // Cholesky of S = P_prior[bottom, bottom] + r I, row-major lower factor.
    const double obs_var = model_.obs_noise_variance;
    for (std::size_t i = 0; i < m_; ++i) {
        double* li = chol_.data() + i * m_;
        const double* pcol = p + (bottom_ + i) * d_ + bottom_;
        for (std::size_t j = 0; j <= i; ++j) {
            const double* lj = chol_.data() + j * m_;
            double s = pcol[j] - k.dot(li, lj, j);
            if (i == j) {
                s += obs_var;
                if (!(s > 0.0) || !std::isfinite(s)) {
                    throw NumericalError("innovation covariance H P H^T + R^y is not positive definite");
                }
                li[i] = std::sqrt(s);
            } else {
                li[j] = s / lj[j];
            }
        }
    }

    // W = L^-1 K^T where row r of K^T is P_prior row (bottom + r).
    for (std::size_t r = 0; r < m_; ++r) {
        double* wr = w_.data() + r * d_;
        const double* kr = p + (bottom_ + r) * d_;
        std::copy(kr, kr + d_, wr);
        const double* lr = chol_.data() + r * m_;
        for (std::size_t c = 0; c < r; ++c) {
            k.axpy(-lr[c], w_.data() + c * d_, wr, d_);
        }
        const double inv = 1.0 / lr[r];
        k.axpby(inv, wr, 0.0, wr, wr, d_);
    }

    // v = L^-1 (y - x_prior[bottom]); x = x_prior + W^T v
    for (std::size_t r = 0; r < m_; ++r) {
        const double* lr = chol_.data() + r * m_;
        const double e = observation[r] - prior[static_cast<Eigen::Index>(bottom_ + r)];
        innovation_[r] = (e - k.dot(lr, innovation_.data(), r)) / lr[r];
    }
    for (std::size_t r = 0; r < m_; ++r) {
        k.axpy(innovation_[r], w_.data() + r * d_, prior.data(), d_);
    }
    state.estimate = std::move(prior);

    // P = P_prior - W^T W. Filled from the lower triangle and mirrored, which
    // is exactly the symmetrized (I - G H) P_prior.
    for (std::size_t r = 0; r < m_; ++r) {
        for (std::size_t i = 0; i < d_; ++i) {
            wt_[i * m_ + r] = w_[r * d_ + i];
        }
    }
    for (std::size_t j = 0; j < d_; ++j) {
        const double* wj = wt_.data() + j * m_;
        double* pj = p + j * d_;
        for (std::size_t i = j; i < d_; ++i) {
            pj[i] -= k.dot(wt_.data() + i * m_, wj, m_);
        }
    }
    for (std::size_t j = 0; j < d_; ++j) {
        for (std::size_t i = j + 1; i < d_; ++i) {
            p[i * d_ + j] = p[j * d_ + i];
        }
    }
}

} // namespace hlds::model::detail
