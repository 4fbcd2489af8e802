#include "hlds/segments.hpp"

#include "hlds/error.hpp"

#include <string>

namespace hlds::segments {

std::vector<SegmentPrediction> segments_from_frames(std::span<const std::string> frame_labels,
                                                    std::span<const double> frame_scores, int min_duration) {
    if (min_duration < 1) {
        throw ConfigError("min_duration must be at least 1, got " + std::to_string(min_duration));
    }
    if (frame_labels.size() != frame_scores.size()) {
        throw ContractError("frame labels and scores differ in length");
    }
    const std::string outlier(classify::kOutlierLabel);

    std::vector<SegmentPrediction> runs;
    for (std::size_t t = 0; t < frame_labels.size(); ++t) {
        const auto idx = static_cast<Eigen::Index>(t);
        if (runs.empty() || runs.back().label != frame_labels[t]) {
            runs.push_back({idx, idx + 1, frame_labels[t], 0.0});
        } else {
            runs.back().end_frame = idx + 1;
        }
    }
    for (auto& r : runs) {
        if (r.label != outlier && r.length() < min_duration) {
            r.label = outlier;
        }
    }

    std::vector<SegmentPrediction> merged;
    for (auto& r : runs) {
        if (!merged.empty() && merged.back().label == r.label) {
            merged.back().end_frame = r.end_frame;
        } else {
            merged.push_back(std::move(r));
        }
    }
    for (auto& r : merged) {
        double sum = 0.0;
        for (Eigen::Index t = r.start_frame; t < r.end_frame; ++t) {
            sum += frame_scores[static_cast<std::size_t>(t)];
        }
        r.mean_score = sum / static_cast<double>(r.length());
    }
    return merged;
}

std::vector<SegmentPrediction> crisp_decisions(const classify::ScoredClip& scores, double distance_threshold,
                                               int min_duration) {
    if (!(distance_threshold > 0.0)) {
        throw ConfigError("distance threshold must be positive");
    }
    const std::string outlier(classify::kOutlierLabel);
    std::vector<std::string> labels;
    std::vector<double> best;
    labels.reserve(scores.frames.size());
    best.reserve(scores.frames.size());
    for (std::size_t t = 0; t < scores.frames.size(); ++t) {
        const auto& f = scores.frames[t];
        labels.push_back(f.best_score >= -distance_threshold ? scores.best_label(t) : outlier);
        best.push_back(f.best_score);
    }
    return segments_from_frames(labels, best, min_duration);
}

std::vector<std::string> expand_labels(std::span<const SegmentPrediction> segments, Eigen::Index frames) {
    std::vector<std::string> out(static_cast<std::size_t>(frames), std::string(classify::kOutlierLabel));
    for (const auto& s : segments) {
        for (Eigen::Index t = std::max<Eigen::Index>(s.start_frame, 0); t < std::min(s.end_frame, frames); ++t) {
            out[static_cast<std::size_t>(t)] = s.label;
        }
    }
    return out;
}

} // namespace hlds::segments
