#pragma once

// End-to-end plumbing shared by the CLI and the acceptance suite:
// audio -> |DCT| frames -> HLDS filter -> z -> classes / segments.

#include "hlds/classify.hpp"
#include "hlds/frames.hpp"
#include "hlds/model.hpp"
#include "hlds/segments.hpp"
#include "hlds/synth.hpp"

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace hlds::pipeline {

struct RunConfig {
    model::HldsConfig hlds;
    double distance_threshold = 3.0; // theta
    int min_duration = 20;
    int burn_in = 5;
    /// Keys given explicitly (file or flags). Only those are checked against a
    /// model's echoed settings.
    std::set<std::string> explicit_keys;

    void validate() const;
    classify::TrainOptions train_options() const;
};

/// Sets one key. Known keys: layer_dims (comma list), innovation_scale,
/// obs_noise (number or "auto" for both), window_len, overlap,
/// initial_cov_scale, distance_threshold (alias theta), min_duration, burn_in.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// `key = value` lines, `#` comments. Pass validate = false when further
/// overrides will be applied before use.
RunConfig parse_run_config(std::string_view text, std::string_view source = "config", bool validate = true);
RunConfig read_run_config(const std::filesystem::path& path, bool validate = true);
std::string format_run_config(const RunConfig& config);

/// Throws ConfigError naming both values when an explicit config key disagrees
/// with the model's frame or layer settings.
void check_compatible(const RunConfig& config, const classify::TrainedModel& model);

/// |DCT| features -> filtered top-layer trajectory.
model::ZTrajectory z_trajectory(const model::HldsConfig& hlds, const frames::FrameSeries& features);

classify::TrainedModel train_from_clip(const RunConfig& config, const frames::AudioClip& clip,
                                       const std::vector<classify::LabeledSegment>& labels);

struct Classification {
    model::ZTrajectory z;
    classify::ScoredClip scores;
    std::vector<segments::SegmentPrediction> segments;
};

/// Uses the model's HLDS settings and the config's post-processing knobs.
/// Throws ConfigError on a sample-rate mismatch.
Classification classify_clip(const classify::TrainedModel& model, const RunConfig& config,
                             const frames::AudioClip& clip);

std::vector<std::string> class_labels(const classify::TrainedModel& model);

struct ProtocolResult {
    segments::ConfusionMatrix confusion;
    double accuracy = 0.0;
    classify::TrainedModel model;
    std::vector<segments::SegmentPrediction> predictions;
};

/// Synthesize train and test clips, train, classify, score.
ProtocolResult evaluate_protocol(const RunConfig& config, const synth::ProtocolOptions& options);

} // namespace hlds::pipeline
