#include "hlds/synth.hpp"

#include "hlds/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace hlds::synth {
namespace {

// Seconds rounded to a whole number of frame hops.
double hop_aligned(double seconds, int sample_rate, int hop) {
    const double hops = std::max(1.0, std::round(seconds * sample_rate / hop));
    return hops * hop / sample_rate;
}

NoteEvent tone(double hz, double seconds, const ProtocolOptions& o) {
    int harmonics = 1;
    while (harmonics < o.max_harmonics && hz * (harmonics + 1) < o.sample_rate / 2.0) {
        ++harmonics;
    }
    NoteSpec spec{hz, harmonics, o.harmonic_decay, seconds, o.amplitude};
    return {tone_label(hz), spec};
}

} // namespace

std::string tone_label(double hz) {
    return "tone-" + std::to_string(std::lround(hz)) + "hz";
}

std::vector<double> default_outlier_grid(const std::vector<double>& in_class_hz) {
    std::vector<double> out;
    for (int i = 0; i < 35; ++i) {
        const double hz = 200.0 + 90.0 * i;
        const bool in_class =
            std::any_of(in_class_hz.begin(), in_class_hz.end(), [&](double f) { return std::abs(f - hz) < 1e-9; });
        if (!in_class) {
            out.push_back(hz);
        }
    }
    return out;
}

ProtocolClips three_note_protocol(const ProtocolOptions& o) {
    if (!(o.sigma >= 0.0 && o.sigma <= 1.0 / 3.0 + 1e-12)) {
        throw ConfigError("protocol noise sigma must lie in [0, 1/3], got " + std::to_string(o.sigma));
    }
    if (o.in_class_hz.empty() || o.test_instances < 1 || o.frame_hop <= 0) {
        throw ConfigError("protocol needs in-class tones, test instances >= 1 and a positive hop");
    }
    const double note = hop_aligned(o.note_s, o.sample_rate, o.frame_hop);
    const double gap = hop_aligned(o.gap_s, o.sample_rate, o.frame_hop);
    const std::vector<double> outliers = o.outlier_hz.empty() ? default_outlier_grid(o.in_class_hz) : o.outlier_hz;

    ProtocolClips out;
    ClipScript train{o.sample_rate, {}, o.sigma, o.seed};
    train.events.push_back(SilenceEvent{gap});
    for (double hz : o.in_class_hz) {
        train.events.push_back(tone(hz, note, o));
        train.events.push_back(SilenceEvent{gap});
        out.in_class_labels.push_back(tone_label(hz));
    }

    std::vector<double> order;
    for (double hz : o.in_class_hz) {
        order.insert(order.end(), static_cast<std::size_t>(o.test_instances), hz);
    }
    order.insert(order.end(), outliers.begin(), outliers.end());
    std::mt19937_64 shuffle_rng(o.seed ^ 0x9E3779B97F4A7C15ULL);
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    ClipScript test{o.sample_rate, {}, o.sigma, o.seed + 1};
    test.events.push_back(SilenceEvent{gap});
    for (double hz : order) {
        test.events.push_back(tone(hz, note, o));
        test.events.push_back(SilenceEvent{gap});
    }

    out.train = render(train);
    out.test = render(test);
    return out;
}

std::vector<double> noise_sweep_sigmas() {
    std::vector<double> out{0.0};
    for (int d = 10; d >= 3; --d) {
        out.push_back(1.0 / d);
    }
    return out;
}

} // namespace hlds::synth
