#include "hlds/synth.hpp"

#include "hlds/error.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace hlds::synth {
namespace {

long long to_samples(double seconds, int sample_rate) {
    return std::llround(seconds * sample_rate);
}

} // namespace

void NoteSpec::validate(int sample_rate) const {
    if (!(fundamental_hz > 0.0) || !std::isfinite(fundamental_hz)) {
        throw ConfigError("note fundamental must be positive");
    }
    if (num_harmonics < 1) {
        throw ConfigError("note needs at least one harmonic");
    }
    if (!(harmonic_decay > 0.0 && harmonic_decay <= 1.0)) {
        throw ConfigError("harmonic decay must be in (0, 1]");
    }
    if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
        throw ConfigError("note duration must be positive");
    }
    if (!(amplitude > 0.0 && amplitude <= 1.0)) {
        throw ConfigError("note amplitude must be in (0, 1]");
    }
    const double top = fundamental_hz * num_harmonics;
    if (top >= sample_rate / 2.0) {
        throw ConfigError("aliasing: harmonic " + std::to_string(num_harmonics) + " of " +
                          std::to_string(fundamental_hz) + " Hz reaches " + std::to_string(top) +
                          " Hz, at or above Nyquist " + std::to_string(sample_rate / 2.0) + " Hz");
    }
}

void ClipScript::validate() const {
    if (sample_rate <= 0) {
        throw ConfigError("sample rate must be positive");
    }
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
        throw ConfigError("noise sigma must be non-negative");
    }
    long long total = 0;
    for (const auto& ev : events) {
        if (const auto* n = std::get_if<NoteEvent>(&ev)) {
            if (n->label.empty()) {
                throw ConfigError("note events need a label");
            }
            n->note.validate(sample_rate);
            total += to_samples(n->note.duration_s, sample_rate);
        } else {
            const double d = std::get<SilenceEvent>(ev).duration_s;
            if (!(d >= 0.0) || !std::isfinite(d)) {
                throw ConfigError("silence duration must be non-negative");
            }
            total += to_samples(d, sample_rate);
        }
    }
    if (total <= 0) {
        throw ConfigError("clip script renders no samples (total duration must be positive)");
    }
}

RenderedClip render(const ClipScript& script) {
    script.validate();
    RenderedClip out;
    out.clip.sample_rate = script.sample_rate;
    auto& samples = out.clip.samples;
    const double sr = script.sample_rate;

    for (const auto& ev : script.events) {
        if (const auto* s = std::get_if<SilenceEvent>(&ev)) {
            samples.resize(samples.size() + static_cast<std::size_t>(to_samples(s->duration_s, script.sample_rate)),
                           0.0);
            continue;
        }
        const auto& n = std::get<NoteEvent>(ev);
        const long long len = to_samples(n.note.duration_s, script.sample_rate);
        const long long start = static_cast<long long>(samples.size());
        long long fade = to_samples(kFadeSeconds, script.sample_rate);
        fade = std::min(fade, len / 2);
        samples.resize(static_cast<std::size_t>(start + len), 0.0);
        for (long long i = 0; i < len; ++i) {
            const double t = static_cast<double>(i) / sr;
            double v = 0.0;
            double amp = n.note.amplitude;
            for (int k = 1; k <= n.note.num_harmonics; ++k) {
                v += amp * std::sin(2.0 * std::numbers::pi * k * n.note.fundamental_hz * t);
                amp *= n.note.harmonic_decay;
            }
            double gain = 1.0;
            if (fade > 0) {
                if (i < fade) {
                    gain = static_cast<double>(i) / static_cast<double>(fade);
                } else if (i >= len - fade) {
                    gain = static_cast<double>(len - 1 - i) / static_cast<double>(fade);
                }
            }
            samples[static_cast<std::size_t>(start + i)] = gain * v;
        }
        out.labels.push_back({start, start + len, n.label});
    }

    if (script.noise_sigma > 0.0) {
        std::mt19937_64 rng(script.seed);
        std::normal_distribution<double> noise(0.0, script.noise_sigma);
        for (double& v : samples) {
            v += noise(rng);
        }
    }
    return out;
}

double pitch_to_hz(std::string_view name) {
    static constexpr int kSemitone[] = {9, 11, 0, 2, 4, 5, 7}; // A B C D E F G
    const std::string original(name);
    if (name.empty() || name.front() < 'A' || name.front() > 'G') {
        throw ConfigError("invalid pitch name '" + original + "'");
    }
    int semitone = kSemitone[name.front() - 'A'];
    name.remove_prefix(1);
    if (!name.empty() && (name.front() == '#' || name.front() == 'b')) {
        semitone += name.front() == '#' ? 1 : -1;
        name.remove_prefix(1);
    }
    bool trailing_sharp = false;
    if (!name.empty() && name.back() == 's') {
        trailing_sharp = true;
        name.remove_suffix(1);
    }
    if (name.empty() || name.size() > 2) {
        throw ConfigError("invalid pitch name '" + original + "'");
    }
    int octave = 0;
    for (char c : name) {
        if (c < '0' || c > '9') {
            throw ConfigError("invalid pitch name '" + original + "'");
        }
        octave = octave * 10 + (c - '0');
    }
    if (trailing_sharp) {
        ++semitone;
    }
    const int n = 12 * octave + semitone;
    return 440.0 * std::pow(2.0, (n - 57) / 12.0);
}

} // namespace hlds::synth
