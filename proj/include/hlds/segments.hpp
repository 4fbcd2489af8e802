#pragma once

// Turning per-frame scores into labeled segments, and instance-level
// evaluation against ground truth.

#include "hlds/classify.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace hlds::segments {

struct SegmentPrediction {
    Eigen::Index start_frame = 0;
    Eigen::Index end_frame = 0; // exclusive
    std::string label;          // a class label or classify::kOutlierLabel
    double mean_score = 0.0;

    Eigen::Index length() const { return end_frame - start_frame; }
    friend bool operator==(const SegmentPrediction&, const SegmentPrediction&) = default;
};

/// Merge equal consecutive labels into runs, relabel class runs shorter than
/// min_duration as outliers and merge touching outlier runs. mean_score is the
/// mean of `frame_scores` over each run.
std::vector<SegmentPrediction> segments_from_frames(std::span<const std::string> frame_labels,
                                                    std::span<const double> frame_scores, int min_duration);

/// A frame keeps its best label when best_score >= -distance_threshold and is
/// an outlier otherwise; then segments_from_frames.
std::vector<SegmentPrediction> crisp_decisions(const classify::ScoredClip& scores, double distance_threshold,
                                               int min_duration);

/// Per-frame labels covered by a segment list (inverse of segments_from_frames
/// for already-filtered input). Frames not covered are outliers.
std::vector<std::string> expand_labels(std::span<const SegmentPrediction> segments, Eigen::Index frames);

/// Instance counts: one row per true label, one column per trained label plus
/// a final outlier column.
struct ConfusionMatrix {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels; // trained labels, then kOutlierLabel
    std::vector<std::vector<long long>> counts;
    std::size_t trained_rows = 0; // leading rows whose true label is a trained class

    long long row_total(std::size_t row) const;
    /// Count in the column that is correct for this row: its own class for a
    /// trained row, the outlier column otherwise.
    long long correct(std::size_t row) const;
    long long total() const;
    long long total_correct() const;
    double instance_accuracy() const;

    /// All untrained rows summed into a single row called `name`.
    ConfusionMatrix collapse_untrained(const std::string& name) const;

    /// Aligned table, cells "k/n" or "0", rule under the trained rows.
    std::string render_text() const;
    /// `true_label,<trained...>,__outlier__` with integer counts.
    std::string to_csv() const;
};

/// Each true note goes to the predicted label covering most of its frames
/// (frames with no prediction count as outlier; ties prefer the outlier, then
/// the smaller label). Rows: trained labels in the given order, then the
/// remaining true labels sorted.
ConfusionMatrix match_and_score(std::span<const SegmentPrediction> predictions,
                                std::span<const classify::LabeledSegment> truth,
                                std::span<const std::string> trained_labels, int frame_hop, int window_len);

// CSV `start_frame,end_frame,label,mean_score`.
std::string format_predictions(std::span<const SegmentPrediction> predictions);
std::vector<SegmentPrediction> parse_predictions(std::string_view text, std::string_view source = "predictions");
void write_predictions(const std::filesystem::path& path, std::span<const SegmentPrediction> predictions);
std::vector<SegmentPrediction> read_predictions(const std::filesystem::path& path);

} // namespace hlds::segments
