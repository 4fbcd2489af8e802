#pragma once

// Hierarchical linear dynamical system with explicitly set parameters.
//
// Layers are listed bottom-first, [d_1, ..., d_L]; d_1 is the observation
// dimension (H = I). Every non-top layer follows
//     x^l_t = -x^l_{t-1} + B_l x^{l+1}_{t-1} + e^l_t
// so it low-pass filters two consecutive states of the layer above, and the
// top layer is a random walk z_t = z_{t-1} + e^L_t. Layer l has innovation
// variance c * d_l, and the observation noise equals the bottom layer's
// variance unless overridden.
//
// The joint state stacks the layers top first: (z; ...; x^1).

#include "hlds/linalg.hpp"
#include "hlds/statespace.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace hlds::model {

struct HldsConfig {
    std::vector<int> layer_dims{96, 24, 12, 2};
    /// Innovation variance per unit layer dimension. Unset means 1 / d_1.
    std::optional<double> innovation_scale;
    std::optional<double> obs_noise_override;
    int window_len = 96;
    int overlap = 48;
    double initial_cov_scale = 1.0;

    double resolved_innovation_scale() const;
    int frame_hop() const { return window_len - overlap; }

    /// Throws ConfigError naming the first violated constraint.
    void validate() const;
};

/// Coupling matrix (N x S): S stacked row blocks of height N/S, block s holding
/// 2S/N in column s. Throws ConfigError unless N is divisible by S.
Matrix build_coupling(int rows, int cols);

struct LayerBlock {
    Eigen::Index offset = 0;
    Eigen::Index dim = 0;
};

/// Sparse description of one row of the joint transition matrix: a +-1
/// diagonal entry plus at most one coupling entry.
struct TransitionRow {
    double diagonal = 1.0;
    Eigen::Index parent = -1; // column of the coupling entry, -1 for top-layer rows
    double coupling = 0.0;
};

struct JointModel {
    statespace::LinearModel dense;        // F~, H~, joint Rx, Ry
    std::vector<LayerBlock> layers;       // bottom-first, same order as layer_dims
    std::vector<TransitionRow> rows;      // one per joint state row
    std::vector<double> innovation_variances; // per layer, bottom-first
    double obs_noise_variance = 0.0;

    Eigen::Index state_dim() const { return dense.state_dim(); }
    Eigen::Index obs_dim() const { return dense.obs_dim(); }
    const LayerBlock& top() const { return layers.back(); }
    const LayerBlock& bottom() const { return layers.front(); }
};

JointModel build_joint_model(const HldsConfig& config);

/// Bottom block = first observation, every other block zero, covariance
/// initial_cov_scale * I.
statespace::FilterState initial_state(const JointModel& model, std::span<const double> first_observation,
                                      double initial_cov_scale);

/// Kalman step specialised to the joint model's structure (sparse F~,
/// selector H~, diagonal noises). Same recursion as statespace::kalman_step.
statespace::FilterState structured_step(const statespace::FilterState& state,
                                        std::span<const double> observation, const JointModel& model);

/// All filtered means (one row per frame) and the last covariance. Keeping every
/// covariance would cost D*D doubles per frame; use the visitor overload to see
/// them.
struct FilterRun {
    RowMatrix estimates;
    Matrix final_covariance;

    Eigen::Index frames() const { return estimates.rows(); }
};

using StateVisitor = std::function<void(std::size_t frame, const statespace::FilterState& state)>;

enum class StepPath { structured, dense };

/// Initializes from observation 0 and applies one Kalman step per following
/// observation; state 0 is the initial state. Numerical failures are rethrown
/// with the frame index prepended.
FilterRun run_filter(const JointModel& model, const RowMatrix& observations, double initial_cov_scale,
                     const StateVisitor& visit = {}, StepPath path = StepPath::structured);

/// Top-layer trajectory, one row per frame.
struct ZTrajectory {
    RowMatrix z;

    Eigen::Index frames() const { return z.rows(); }
    Eigen::Index dim() const { return z.cols(); }
    std::span<const double> at(Eigen::Index t) const {
        return {z.data() + t * z.cols(), static_cast<std::size_t>(z.cols())};
    }
};

ZTrajectory extract_z(const FilterRun& run, const JointModel& model);

} // namespace hlds::model
