#pragma once

// Deterministic synthetic clips: harmonic tones, silences and additive white
// Gaussian noise, with sample-exact note labels.

#include "hlds/classify.hpp"
#include "hlds/frames.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hlds::synth {

/// Linear fade applied at both ends of every note.
inline constexpr double kFadeSeconds = 0.005;

/// sum_k amplitude * decay^(k-1) * sin(2 pi k f t), k = 1..num_harmonics.
struct NoteSpec {
    double fundamental_hz = 440.0;
    int num_harmonics = 1;
    double harmonic_decay = 1.0;
    double duration_s = 1.0;
    double amplitude = 0.5;

    /// Throws ConfigError; the message contains "aliasing" when the top
    /// harmonic reaches sample_rate / 2.
    void validate(int sample_rate) const;
};

struct NoteEvent {
    std::string label;
    NoteSpec note;
};

struct SilenceEvent {
    double duration_s = 0.0;
};

using Event = std::variant<NoteEvent, SilenceEvent>;

struct ClipScript {
    int sample_rate = 8000;
    std::vector<Event> events;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct RenderedClip {
    frames::AudioClip clip;
    std::vector<classify::LabeledSegment> labels;
};

RenderedClip render(const ClipScript& script);

/// Equal temperament, A4 = 440 Hz: f = 440 * 2^((n - 57) / 12) with
/// n = 12 * octave + semitone (C = 0). Accepts "E5", "C#4", "Db4" and the
/// "C4s" sharp spelling.
double pitch_to_hz(std::string_view name);

/// Declarative JSON clip script (see docs/file_formats.md).
ClipScript parse_script(std::string_view json_text);
ClipScript read_script(const std::filesystem::path& path);

// ---- three-note outlier protocol -----------------------------------------
//
// Train on one instance each of three in-class tones; test on four instances
// of each in-class tone plus one instance of every outlier tone, shuffled.
// Notes and gaps are whole multiples of the frame hop so every instance meets
// the frame grid at the same phase, and gaps are long enough for the top layer
// to relax back towards zero between notes.

struct ProtocolOptions {
    double sigma = 0.0;
    std::uint64_t seed = 1;
    int sample_rate = 8000;
    int frame_hop = 48;
    double note_s = 1.0;
    double gap_s = 2.5;
    int test_instances = 4;
    double amplitude = 0.3;
    double harmonic_decay = 0.7;
    int max_harmonics = 8;
    std::vector<double> in_class_hz{470.0, 1550.0, 2630.0};
    /// Outlier fundamentals; empty means the default grid 200 + 90 i Hz,
    /// i = 0..34, minus the in-class tones (32 notes). The grid step is more
    /// than two DCT bins at 8 kHz with 96-sample windows.
    std::vector<double> outlier_hz;
};

struct ProtocolClips {
    RenderedClip train;
    RenderedClip test;
    std::vector<std::string> in_class_labels;
};

std::string tone_label(double hz);
std::vector<double> default_outlier_grid(const std::vector<double>& in_class_hz);
ProtocolClips three_note_protocol(const ProtocolOptions& options);

/// Noise levels of the sweep: 0, 1/10, 1/9, ..., 1/3.
std::vector<double> noise_sweep_sigmas();

} // namespace hlds::synth
