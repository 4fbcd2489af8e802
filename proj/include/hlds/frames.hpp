#pragma once

#include "hlds/linalg.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace hlds::frames {

/// Mono audio, amplitudes nominally in [-1, 1].
struct AudioClip {
    std::vector<double> samples;
    int sample_rate = 0;

    /// Throws InputError when empty, non-finite or sample_rate <= 0.
    void validate() const;
    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate; }
};

/// Observation sequence: one |DCT| frame per row.
struct FrameSeries {
    RowMatrix frames;
    int window_len = 0;
    int overlap = 0;

    int frame_hop() const { return window_len - overlap; }
    Eigen::Index count() const { return frames.rows(); }
};

/// Number of full windows: floor((len - w) / (w - q)) + 1, or 0 if len < w.
Eigen::Index frame_count(std::size_t len, int window_len, int overlap);

/// Frame t covers samples [t*hop, t*hop + window_len); the trailing partial
/// window is dropped. Throws ConfigError for a bad q and InputError when the
/// clip is shorter than one window.
RowMatrix frame_clip(std::span<const double> samples, int window_len, int overlap);

/// Orthonormal DCT-II basis, row k holds sqrt(a_k / w) cos(pi (n + 1/2) k / w)
/// with a_0 = 1 and a_k = 2 otherwise.
class DctPlan {
public:
    explicit DctPlan(int size);

    int size() const { return size_; }
    /// out = |DCT-II(frame)|; both spans must have size() elements.
    void magnitude(std::span<const double> frame, std::span<double> out) const;
    const std::vector<double>& basis() const { return basis_; }

private:
    int size_;
    std::vector<double> basis_;
};

/// Convenience wrapper that caches the plan for the most recent size per thread.
std::vector<double> dct_magnitude(std::span<const double> frame);

/// frame_clip followed by |DCT| on every frame.
FrameSeries extract_features(const AudioClip& clip, int window_len, int overlap);

/// 16-bit PCM RIFF/WAVE. Stereo is averaged to mono with a warning.
AudioClip read_wav(const std::filesystem::path& path);

/// 16-bit PCM mono; samples scaled by 32768, rounded and clipped to int16.
void write_wav(const std::filesystem::path& path, const AudioClip& clip);

/// int16 <-> [-1, 1) conversion used by the WAV reader and writer.
inline double pcm16_to_double(std::int16_t v) { return static_cast<double>(v) / 32768.0; }
std::int16_t double_to_pcm16(double v);

} // namespace hlds::frames
