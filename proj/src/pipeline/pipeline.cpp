#include "hlds/pipeline.hpp"

#include "hlds/error.hpp"

namespace hlds::pipeline {

model::ZTrajectory z_trajectory(const model::HldsConfig& hlds, const frames::FrameSeries& features) {
    const model::JointModel jm = model::build_joint_model(hlds);
    const model::FilterRun run = model::run_filter(jm, features.frames, hlds.initial_cov_scale);
    return model::extract_z(run, jm);
}

classify::TrainedModel train_from_clip(const RunConfig& config, const frames::AudioClip& clip,
                                       const std::vector<classify::LabeledSegment>& labels) {
    config.validate();
    clip.validate();
    if (labels.empty()) {
        throw TrainingError("label file has no segments");
    }
    const frames::FrameSeries features =
        frames::extract_features(clip, config.hlds.window_len, config.hlds.overlap);
    const model::JointModel jm = model::build_joint_model(config.hlds);

    classify::TrainedModel out;
    out.hlds = config.hlds;
    out.hlds.innovation_scale = config.hlds.resolved_innovation_scale();
    out.burn_in = config.burn_in;
    out.sample_rate = clip.sample_rate;
    out.classes = classify::train(jm, features, labels, config.train_options());
    return out;
}

std::vector<std::string> class_labels(const classify::TrainedModel& model) {
    std::vector<std::string> out;
    for (const auto& c : model.classes) {
        out.push_back(c.label);
    }
    return out;
}

Classification classify_clip(const classify::TrainedModel& model, const RunConfig& config,
                             const frames::AudioClip& clip) {
    config.validate();
    clip.validate();
    if (model.sample_rate > 0 && model.sample_rate != clip.sample_rate) {
        throw ConfigError("sample_rate mismatch: clip has " + std::to_string(clip.sample_rate) +
                          " Hz, model was trained at " + std::to_string(model.sample_rate) + " Hz");
    }
    if (model.classes.empty()) {
        throw InputError("model has no classes");
    }
    const frames::FrameSeries features = frames::extract_features(clip, model.hlds.window_len, model.hlds.overlap);
    Classification out;
    out.z = z_trajectory(model.hlds, features);
    out.scores = classify::score_frames(out.z, model.classes);
    out.segments = segments::crisp_decisions(out.scores, config.distance_threshold, config.min_duration);
    return out;
}

ProtocolResult evaluate_protocol(const RunConfig& config, const synth::ProtocolOptions& options) {
    synth::ProtocolOptions o = options;
    o.frame_hop = config.hlds.frame_hop();
    const synth::ProtocolClips clips = synth::three_note_protocol(o);

    ProtocolResult out;
    out.model = train_from_clip(config, clips.train.clip, clips.train.labels);
    Classification c = classify_clip(out.model, config, clips.test.clip);
    out.predictions = std::move(c.segments);
    const auto trained = class_labels(out.model);
    out.confusion = segments::match_and_score(out.predictions, clips.test.labels, trained,
                                              config.hlds.frame_hop(), config.hlds.window_len);
    out.accuracy = out.confusion.instance_accuracy();
    return out;
}

} // namespace hlds::pipeline
