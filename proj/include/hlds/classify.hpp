#pragma once

// Training in z-space and per-frame possibilistic scoring. Each class is a
// Gaussian cluster of top-layer states; a frame's score for a class is minus
// its Mahalanobis distance to that cluster, so every class is judged on its
// own and "none of them" stays possible.

#include "hlds/frames.hpp"
#include "hlds/linalg.hpp"
#include "hlds/model.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hlds::classify {

/// Label used for frames and segments that belong to no trained class.
inline constexpr std::string_view kOutlierLabel = "__outlier__";

struct LabeledSegment {
    long long start_sample = 0;
    long long end_sample = 0; // exclusive
    std::string label;

    friend bool operator==(const LabeledSegment&, const LabeledSegment&) = default;
};

/// Throws InputError for empty labels, the reserved outlier label, start >= end,
/// negative starts, labels containing commas or overlapping segments.
void validate_segments(std::span<const LabeledSegment> segments);

struct FrameRange {
    Eigen::Index begin = 0;
    Eigen::Index end = 0;

    Eigen::Index size() const { return end > begin ? end - begin : 0; }
};

/// Frames whose whole window lies inside [start_sample, end_sample), clipped to
/// [0, total_frames).
FrameRange frames_within(const LabeledSegment& segment, int window_len, int frame_hop, Eigen::Index total_frames);

struct ClassModel {
    std::string label;
    Vector mean;
    Matrix covariance;
    long long sample_count = 0;
};

struct TrainOptions {
    int burn_in = 5;
    double initial_cov_scale = 1.0;
    double ridge = 1e-6;
};

/// Pools z over every segment of each label (skipping the first burn_in frames
/// of each segment) and fits mean and covariance. Output sorted by label.
std::vector<ClassModel> fit_classes(const model::ZTrajectory& z, std::span<const LabeledSegment> labels,
                                    int window_len, int frame_hop, const TrainOptions& options);

/// Filters the whole training clip once (no per-note resets), then fit_classes.
std::vector<ClassModel> train(const model::JointModel& model, const frames::FrameSeries& features,
                              std::span<const LabeledSegment> labels, const TrainOptions& options);

struct FrameScores {
    std::vector<double> scores; // parallel to ScoredClip::labels
    std::size_t best = 0;
    double best_score = 0.0;
};

struct ScoredClip {
    std::vector<std::string> labels;
    std::vector<FrameScores> frames;

    const std::string& best_label(std::size_t t) const { return labels[frames[t].best]; }
};

/// Mahalanobis distance to each class through its Cholesky factor.
class MahalanobisScorer {
public:
    explicit MahalanobisScorer(std::span<const ClassModel> classes);

    double distance(std::size_t cls, std::span<const double> z) const;
    std::size_t size() const { return classes_.size(); }

private:
    struct Entry {
        Vector mean;
        Eigen::LLT<Matrix> factor;
    };
    std::vector<Entry> classes_;
};

/// score = -sqrt((z - mu)^T Sigma^-1 (z - mu)); best = argmax, ties to the
/// lexicographically smallest label.
ScoredClip score_frames(const model::ZTrajectory& z, std::span<const ClassModel> classes);

// ---- files -------------------------------------------------------------

/// Training configuration echoed into the model file next to the classes.
struct TrainedModel {
    model::HldsConfig hlds;
    int burn_in = 5;
    int sample_rate = 0;
    std::vector<ClassModel> classes;
};

inline constexpr std::string_view kModelMagic = "HLDS-MODEL v1";

void write_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel read_model(const std::filesystem::path& path);
std::string format_model(const TrainedModel& model);
TrainedModel parse_model(std::string_view text, std::string_view source = "model");

/// CSV `start_sample,end_sample,label` with a header row.
std::vector<LabeledSegment> read_labels(const std::filesystem::path& path);
std::vector<LabeledSegment> parse_labels(std::string_view text, std::string_view source = "labels");
void write_labels(const std::filesystem::path& path, std::span<const LabeledSegment> labels);
std::string format_labels(std::span<const LabeledSegment> labels);

} // namespace hlds::classify
