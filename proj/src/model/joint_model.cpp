#include "hlds/model.hpp"

#include "hlds/error.hpp"

#include <string>

namespace hlds::model {

double HldsConfig::resolved_innovation_scale() const {
    if (innovation_scale) {
        return *innovation_scale;
    }
    if (layer_dims.empty() || layer_dims.front() <= 0) {
        throw ConfigError("layer_dims must be non-empty to derive the innovation scale");
    }
    return 1.0 / layer_dims.front();
}

void HldsConfig::validate() const {
    if (layer_dims.size() < 2) {
        throw ConfigError("at least two hidden layers are required, got " + std::to_string(layer_dims.size()));
    }
    for (std::size_t i = 0; i < layer_dims.size(); ++i) {
        if (layer_dims[i] <= 0) {
            throw ConfigError("layer dimension " + std::to_string(i) + " must be positive");
        }
        if (i + 1 < layer_dims.size()) {
            const int lower = layer_dims[i];
            const int upper = layer_dims[i + 1];
            if (upper >= lower) {
                throw ConfigError("layer dims must be strictly decreasing bottom to top: " + std::to_string(lower) +
                                  " then " + std::to_string(upper));
            }
            if (lower % upper != 0) {
                throw ConfigError("layer dim " + std::to_string(lower) + " is not divisible by " +
                                  std::to_string(upper));
            }
        }
    }
    if (innovation_scale && !(*innovation_scale > 0.0)) {
        throw ConfigError("innovation_scale must be positive");
    }
    if (obs_noise_override && !(*obs_noise_override > 0.0)) {
        throw ConfigError("obs_noise must be positive");
    }
    if (!(initial_cov_scale > 0.0)) {
        throw ConfigError("initial_cov_scale must be positive");
    }
    if (window_len <= 0) {
        throw ConfigError("window_len must be positive");
    }
    if (overlap < 0 || overlap >= window_len) {
        throw ConfigError("overlap must satisfy 0 <= q < window_len (q=" + std::to_string(overlap) +
                          ", window_len=" + std::to_string(window_len) + ")");
    }
    if (window_len != layer_dims.front()) {
        throw ConfigError("window_len " + std::to_string(window_len) + " must equal the bottom layer dim " +
                          std::to_string(layer_dims.front()) + " (identity observation matrix)");
    }
}

Matrix build_coupling(int rows, int cols) {
    if (rows <= 0 || cols <= 0 || rows % cols != 0) {
        throw ConfigError("coupling needs N divisible by S, got N=" + std::to_string(rows) +
                          ", S=" + std::to_string(cols));
    }
    const int block = rows / cols;
    const double value = 2.0 * cols / rows;
    Matrix b = Matrix::Zero(rows, cols);
    for (int s = 0; s < cols; ++s) {
        b.block(s * block, s, block, 1).setConstant(value);
    }
    return b;
}

JointModel build_joint_model(const HldsConfig& config) {
    config.validate();
    const auto& dims = config.layer_dims;
    const std::size_t n_layers = dims.size();
    const double c = config.resolved_innovation_scale();

    JointModel jm;
    jm.layers.resize(n_layers);
    Eigen::Index offset = 0;
    for (std::size_t l = n_layers; l-- > 0;) {
        jm.layers[l] = {offset, dims[l]};
        offset += dims[l];
    }
    const Eigen::Index d = offset;
    const Eigen::Index m = dims.front();

    Matrix f = Matrix::Zero(d, d);
    Vector q(d);
    jm.rows.resize(static_cast<std::size_t>(d));
    jm.innovation_variances.resize(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l) {
        const LayerBlock& blk = jm.layers[l];
        const bool top = l + 1 == n_layers;
        const double variance = c * dims[l];
        jm.innovation_variances[l] = variance;
        q.segment(blk.offset, blk.dim).setConstant(variance);
        f.block(blk.offset, blk.offset, blk.dim, blk.dim).diagonal().setConstant(top ? 1.0 : -1.0);
        for (Eigen::Index i = 0; i < blk.dim; ++i) {
            jm.rows[blk.offset + i].diagonal = top ? 1.0 : -1.0;
        }
        if (top) {
            continue;
        }
        const LayerBlock& above = jm.layers[l + 1];
        const Matrix b = build_coupling(dims[l], dims[l + 1]);
        f.block(blk.offset, above.offset, blk.dim, above.dim) = b;
        const Eigen::Index height = blk.dim / above.dim;
        for (Eigen::Index i = 0; i < blk.dim; ++i) {
            TransitionRow& row = jm.rows[blk.offset + i];
            row.parent = above.offset + i / height;
            row.coupling = b(i, i / height);
        }
    }

    jm.obs_noise_variance = config.obs_noise_override.value_or(jm.innovation_variances.front());

    Matrix h = Matrix::Zero(m, d);
    h.block(0, jm.bottom().offset, m, m).setIdentity();

    jm.dense.transition = std::move(f);
    jm.dense.observation = std::move(h);
    jm.dense.state_noise_cov = q.asDiagonal();
    jm.dense.obs_noise_cov = Matrix::Identity(m, m) * jm.obs_noise_variance;
    return jm;
}

statespace::FilterState initial_state(const JointModel& model, std::span<const double> first_observation,
                                      double initial_cov_scale) {
    const Eigen::Index m = model.obs_dim();
    if (static_cast<Eigen::Index>(first_observation.size()) != m) {
        throw ContractError("first observation has dimension " + std::to_string(first_observation.size()) +
                            ", expected " + std::to_string(m));
    }
    if (!(initial_cov_scale > 0.0)) {
        throw ContractError("initial covariance scale must be positive");
    }
    const Eigen::Index d = model.state_dim();
    statespace::FilterState s;
    s.estimate = Vector::Zero(d);
    s.estimate.segment(model.bottom().offset, m) = Eigen::Map<const Vector>(first_observation.data(), m);
    s.covariance = Matrix::Identity(d, d) * initial_cov_scale;
    return s;
}

} // namespace hlds::model
