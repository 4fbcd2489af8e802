#include "hlds/frames.hpp"

#include "hlds/error.hpp"

#include <cmath>
#include <string>

namespace hlds::frames {

void AudioClip::validate() const {
    if (sample_rate <= 0) {
        throw InputError("sample rate must be positive, got " + std::to_string(sample_rate));
    }
    if (samples.empty()) {
        throw InputError("audio clip is empty");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i])) {
            throw InputError("audio sample " + std::to_string(i) + " is not finite");
        }
    }
}

Eigen::Index frame_count(std::size_t len, int window_len, int overlap) {
    if (window_len <= 0 || overlap < 0 || overlap >= window_len) {
        throw ConfigError("framing needs 0 <= overlap < window_len (overlap=" + std::to_string(overlap) +
                          ", window_len=" + std::to_string(window_len) + ")");
    }
    const auto w = static_cast<std::size_t>(window_len);
    if (len < w) {
        return 0;
    }
    const auto hop = static_cast<std::size_t>(window_len - overlap);
    return static_cast<Eigen::Index>((len - w) / hop + 1);
}

RowMatrix frame_clip(std::span<const double> samples, int window_len, int overlap) {
    const Eigen::Index count = frame_count(samples.size(), window_len, overlap);
    if (count == 0) {
        throw InputError("clip has " + std::to_string(samples.size()) + " samples, shorter than one window of " +
                         std::to_string(window_len));
    }
    const int hop = window_len - overlap;
    RowMatrix out(count, window_len);
    for (Eigen::Index t = 0; t < count; ++t) {
        const double* src = samples.data() + t * hop;
        std::copy(src, src + window_len, out.data() + t * window_len);
    }
    return out;
}

FrameSeries extract_features(const AudioClip& clip, int window_len, int overlap) {
    clip.validate();
    FrameSeries fs;
    fs.window_len = window_len;
    fs.overlap = overlap;
    fs.frames = frame_clip(clip.samples, window_len, overlap);
    const DctPlan plan(window_len);
    std::vector<double> tmp(static_cast<std::size_t>(window_len));
    const auto w = static_cast<std::size_t>(window_len);
    for (Eigen::Index t = 0; t < fs.frames.rows(); ++t) {
        std::span<double> row(fs.frames.data() + t * window_len, w);
        std::copy(row.begin(), row.end(), tmp.begin());
        plan.magnitude(tmp, row);
    }
    return fs;
}

} // namespace hlds::frames
