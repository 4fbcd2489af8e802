#include "hlds/model.hpp"

#include "hlds/error.hpp"
#include "structured_step.hpp"

#include <string>

namespace hlds::model {

statespace::FilterState structured_step(const statespace::FilterState& state,
                                        std::span<const double> observation, const JointModel& model) {
    detail::StructuredStepper stepper(model);
    statespace::FilterState next = state;
    stepper.step(next, observation);
    return next;
}

FilterRun run_filter(const JointModel& model, const RowMatrix& observations, double initial_cov_scale,
                     const StateVisitor& visit, StepPath path) {
    const Eigen::Index frames = observations.rows();
    if (frames == 0) {
        throw ContractError("run_filter needs at least one observation");
    }
    if (observations.cols() != model.obs_dim()) {
        throw ContractError("observations have dimension " + std::to_string(observations.cols()) +
                            ", model expects " + std::to_string(model.obs_dim()));
    }
    const auto m = static_cast<std::size_t>(model.obs_dim());
    auto row = [&](Eigen::Index t) { return std::span<const double>(observations.data() + t * observations.cols(), m); };

    FilterRun run;
    run.estimates.resize(frames, model.state_dim());
    statespace::FilterState state = initial_state(model, row(0), initial_cov_scale);
    run.estimates.row(0) = state.estimate.transpose();
    if (visit) {
        visit(0, state);
    }

    detail::StructuredStepper stepper(model);
    for (Eigen::Index t = 1; t < frames; ++t) {
        try {
            if (path == StepPath::structured) {
                stepper.step(state, row(t));
            } else {
                state = statespace::kalman_step(state, row(t), model.dense);
            }
        } catch (const NumericalError& e) {
            throw NumericalError("frame " + std::to_string(t) + ": " + e.what());
        } catch (const ContractError& e) {
            throw ContractError("frame " + std::to_string(t) + ": " + e.what());
        }
        run.estimates.row(t) = state.estimate.transpose();
        if (visit) {
            visit(static_cast<std::size_t>(t), state);
        }
    }
    run.final_covariance = std::move(state.covariance);
    return run;
}

ZTrajectory extract_z(const FilterRun& run, const JointModel& model) {
    const LayerBlock& top = model.top();
    if (run.estimates.cols() != model.state_dim()) {
        throw ContractError("filter run does not match the joint model");
    }
    ZTrajectory out;
    out.z = run.estimates.middleCols(top.offset, top.dim);
    return out;
}

} // namespace hlds::model
