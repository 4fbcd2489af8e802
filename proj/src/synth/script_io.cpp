#include "hlds/error.hpp"
#include "hlds/synth.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace hlds::synth {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
    if (!obj.contains(key)) {
        return fallback;
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + ": key '" + key + "' has the wrong type");
    }
}

} // namespace

ClipScript parse_script(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("clip script is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw ConfigError("clip script must be a JSON object");
    }
    reject_unknown(root, {"sample_rate", "noise_sigma", "seed", "events"}, "script");

    ClipScript script;
    script.sample_rate = get_or(root, "sample_rate", 8000, "script");
    script.noise_sigma = get_or(root, "noise_sigma", 0.0, "script");
    script.seed = get_or<std::uint64_t>(root, "seed", 0, "script");
    if (!root.contains("events") || !root.at("events").is_array()) {
        throw ConfigError("script: 'events' must be an array");
    }
    std::size_t index = 0;
    for (const auto& ev : root.at("events")) {
        const std::string where = "event " + std::to_string(index++);
        if (!ev.is_object()) {
            throw ConfigError(where + ": must be an object");
        }
        if (ev.contains("silence")) {
            reject_unknown(ev, {"silence"}, where);
            script.events.push_back(SilenceEvent{get_or(ev, "silence", 0.0, where)});
            continue;
        }
        reject_unknown(ev, {"label", "pitch", "fundamental_hz", "harmonics", "decay", "duration", "amplitude"}, where);
        NoteEvent note;
        if (ev.contains("pitch") == ev.contains("fundamental_hz")) {
            throw ConfigError(where + ": give exactly one of 'pitch' or 'fundamental_hz'");
        }
        std::string pitch;
        if (ev.contains("pitch")) {
            pitch = get_or<std::string>(ev, "pitch", "", where);
            note.note.fundamental_hz = pitch_to_hz(pitch);
        } else {
            note.note.fundamental_hz = get_or(ev, "fundamental_hz", 0.0, where);
        }
        note.label = get_or<std::string>(ev, "label", pitch.empty() ? tone_label(note.note.fundamental_hz) : pitch,
                                         where);
        note.note.num_harmonics = get_or(ev, "harmonics", 1, where);
        note.note.harmonic_decay = get_or(ev, "decay", 1.0, where);
        note.note.duration_s = get_or(ev, "duration", 1.0, where);
        note.note.amplitude = get_or(ev, "amplitude", 0.5, where);
        script.events.push_back(std::move(note));
    }
    script.validate();
    return script;
}

ClipScript read_script(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open clip script " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_script(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

} // namespace hlds::synth
