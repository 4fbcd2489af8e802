#include "hlds/classify.hpp"

#include "hlds/diag.hpp"
#include "hlds/error.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace hlds::classify {
namespace {

std::string describe(const LabeledSegment& s) {
    return "'" + s.label + "' [" + std::to_string(s.start_sample) + ", " + std::to_string(s.end_sample) + ")";
}

} // namespace

void validate_segments(std::span<const LabeledSegment> segments) {
    std::vector<const LabeledSegment*> sorted;
    sorted.reserve(segments.size());
    for (const auto& s : segments) {
        if (s.label.empty()) {
            throw InputError("segment [" + std::to_string(s.start_sample) + ", " + std::to_string(s.end_sample) +
                             ") has an empty label");
        }
        if (s.label == kOutlierLabel) {
            throw InputError("label " + std::string(kOutlierLabel) + " is reserved");
        }
        if (s.label.find(',') != std::string::npos || s.label.find('\n') != std::string::npos) {
            throw InputError("label " + describe(s) + " contains a comma or newline");
        }
        if (s.start_sample < 0 || s.start_sample >= s.end_sample) {
            throw InputError("segment " + describe(s) + " needs 0 <= start < end");
        }
        sorted.push_back(&s);
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const auto* a, const auto* b) { return a->start_sample < b->start_sample; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i]->start_sample < sorted[i - 1]->end_sample) {
            throw InputError("segments " + describe(*sorted[i - 1]) + " and " + describe(*sorted[i]) + " overlap");
        }
    }
}

FrameRange frames_within(const LabeledSegment& segment, int window_len, int frame_hop, Eigen::Index total_frames) {
    if (window_len <= 0 || frame_hop <= 0) {
        throw ContractError("frames_within needs positive window and hop");
    }
    FrameRange r;
    r.begin = static_cast<Eigen::Index>((segment.start_sample + frame_hop - 1) / frame_hop);
    if (segment.end_sample >= window_len) {
        r.end = static_cast<Eigen::Index>((segment.end_sample - window_len) / frame_hop + 1);
    }
    r.begin = std::clamp<Eigen::Index>(r.begin, 0, total_frames);
    r.end = std::clamp<Eigen::Index>(r.end, r.begin, total_frames);
    return r;
}

std::vector<ClassModel> fit_classes(const model::ZTrajectory& z, std::span<const LabeledSegment> labels,
                                    int window_len, int frame_hop, const TrainOptions& options) {
    if (labels.empty()) {
        throw TrainingError("no labeled segments to train on");
    }
    if (options.burn_in < 0) {
        throw ConfigError("burn_in must be non-negative");
    }
    validate_segments(labels);
    const Eigen::Index dim = z.dim();

    std::map<std::string, std::vector<Eigen::Index>> pooled;
    for (const auto& seg : labels) {
        const FrameRange r = frames_within(seg, window_len, frame_hop, z.frames());
        if (r.size() <= options.burn_in) {
            throw TrainingError("segment " + describe(seg) + " spans " + std::to_string(r.size()) +
                                " frames, needs more than burn_in=" + std::to_string(options.burn_in));
        }
        auto& rows = pooled[seg.label];
        for (Eigen::Index t = r.begin + options.burn_in; t < r.end; ++t) {
            rows.push_back(t);
        }
    }

    std::vector<ClassModel> out;
    out.reserve(pooled.size());
    for (const auto& [label, rows] : pooled) {
        const auto n = static_cast<Eigen::Index>(rows.size());
        Matrix samples(n, dim);
        for (Eigen::Index i = 0; i < n; ++i) {
            samples.row(i) = z.z.row(rows[static_cast<std::size_t>(i)]);
        }
        ClassModel cm;
        cm.label = label;
        cm.sample_count = n;
        cm.mean = samples.colwise().mean().transpose();
        const Matrix centered = samples.rowwise() - cm.mean.transpose();
        cm.covariance = n > 1 ? Matrix((centered.transpose() * centered) / static_cast<double>(n - 1))
                              : Matrix(Matrix::Zero(dim, dim));
        cm.covariance = 0.5 * (cm.covariance + cm.covariance.transpose());

        // Ridge relative to the cluster's spread; a zero-spread cluster falls
        // back to its own magnitude so the ridge keeps the units of z.
        double scale = cm.covariance.trace() / static_cast<double>(dim);
        if (!(scale > 0.0)) {
            scale = std::max(cm.mean.squaredNorm() / static_cast<double>(dim), 1.0);
        }
        cm.covariance.diagonal().array() += options.ridge * scale;

        const Eigen::LLT<Matrix> llt(cm.covariance);
        if (llt.info() != Eigen::Success || !cm.covariance.allFinite()) {
            throw TrainingError("covariance of class '" + label + "' is singular after regularization");
        }
        if (n < dim + 1) {
            diag::warn("class '" + label + "' has only " + std::to_string(n) + " samples for a " +
                       std::to_string(dim) + "-dimensional fit");
        }
        out.push_back(std::move(cm));
    }
    return out;
}

std::vector<ClassModel> train(const model::JointModel& model, const frames::FrameSeries& features,
                              std::span<const LabeledSegment> labels, const TrainOptions& options) {
    if (labels.empty()) {
        throw TrainingError("no labeled segments to train on");
    }
    const auto run = model::run_filter(model, features.frames, options.initial_cov_scale);
    const auto z = model::extract_z(run, model);
    return fit_classes(z, labels, features.window_len, features.frame_hop(), options);
}

} // namespace hlds::classify
