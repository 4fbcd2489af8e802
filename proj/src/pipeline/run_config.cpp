#include "hlds/error.hpp"
#include "hlds/pipeline.hpp"
#include "hlds/text.hpp"

#include <fstream>
#include <sstream>

namespace hlds::pipeline {
namespace {

int parse_small_int(std::string_view value, std::string_view key) {
    const long long v = text::parse_int(value, key);
    if (v < -1'000'000'000LL || v > 1'000'000'000LL) {
        throw ConfigError(std::string(key) + " is out of range");
    }
    return static_cast<int>(v);
}

std::string join_dims(const std::vector<int>& dims) {
    std::string out;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        out += (i ? "," : "") + std::to_string(dims[i]);
    }
    return out;
}

} // namespace

void RunConfig::validate() const {
    hlds.validate();
    if (!(distance_threshold > 0.0)) {
        throw ConfigError("distance_threshold must be positive");
    }
    if (min_duration < 1) {
        throw ConfigError("min_duration must be at least 1");
    }
    if (burn_in < 0) {
        throw ConfigError("burn_in must be non-negative");
    }
}

classify::TrainOptions RunConfig::train_options() const {
    classify::TrainOptions o;
    o.burn_in = burn_in;
    o.initial_cov_scale = hlds.initial_cov_scale;
    return o;
}

void apply_setting(RunConfig& config, std::string_view raw_key, std::string_view raw_value) {
    std::string key(text::trim(raw_key));
    const std::string_view value = text::trim(raw_value);
    if (key == "theta") {
        key = "distance_threshold";
    }
    try {
        if (key == "layer_dims") {
            std::vector<int> dims;
            for (const auto& f : text::split(value, ',')) {
                dims.push_back(parse_small_int(f, key));
            }
            config.hlds.layer_dims = dims;
        } else if (key == "innovation_scale") {
            if (value == "auto") {
                config.hlds.innovation_scale.reset();
            } else {
                config.hlds.innovation_scale = text::parse_double(value, key);
            }
        } else if (key == "obs_noise") {
            if (value == "auto") {
                config.hlds.obs_noise_override.reset();
            } else {
                config.hlds.obs_noise_override = text::parse_double(value, key);
            }
        } else if (key == "window_len") {
            config.hlds.window_len = parse_small_int(value, key);
        } else if (key == "overlap") {
            config.hlds.overlap = parse_small_int(value, key);
        } else if (key == "initial_cov_scale") {
            config.hlds.initial_cov_scale = text::parse_double(value, key);
        } else if (key == "distance_threshold") {
            config.distance_threshold = text::parse_double(value, key);
        } else if (key == "min_duration") {
            config.min_duration = parse_small_int(value, key);
        } else if (key == "burn_in") {
            config.burn_in = parse_small_int(value, key);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
    config.explicit_keys.insert(key);
}

RunConfig parse_run_config(std::string_view text_in, std::string_view source, bool validate) {
    RunConfig config;
    std::size_t line_no = 0;
    for (const auto& raw : text::split(text_in, '\n')) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = text::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": expected key = value");
        }
        try {
            apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (validate) {
        config.validate();
    }
    return config;
}

RunConfig read_run_config(const std::filesystem::path& path, bool validate) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open config " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str(), path.string(), validate);
}

std::string format_run_config(const RunConfig& c) {
    std::ostringstream out;
    out << "layer_dims = " << join_dims(c.hlds.layer_dims) << '\n'
        << "innovation_scale = "
        << (c.hlds.innovation_scale ? text::format_double(*c.hlds.innovation_scale) : std::string("auto")) << '\n'
        << "obs_noise = "
        << (c.hlds.obs_noise_override ? text::format_double(*c.hlds.obs_noise_override) : std::string("auto"))
        << '\n'
        << "window_len = " << c.hlds.window_len << '\n'
        << "overlap = " << c.hlds.overlap << '\n'
        << "initial_cov_scale = " << text::format_double(c.hlds.initial_cov_scale) << '\n'
        << "distance_threshold = " << text::format_double(c.distance_threshold) << '\n'
        << "min_duration = " << c.min_duration << '\n'
        << "burn_in = " << c.burn_in << '\n';
    return out.str();
}

void check_compatible(const RunConfig& config, const classify::TrainedModel& model) {
    const auto given = [&](const char* key) { return config.explicit_keys.contains(key); };
    auto mismatch = [](const std::string& what, const std::string& cfg, const std::string& mdl) {
        throw ConfigError(what + " mismatch: config has " + cfg + ", model was trained with " + mdl);
    };
    if (given("window_len") && config.hlds.window_len != model.hlds.window_len) {
        mismatch("window_len", std::to_string(config.hlds.window_len), std::to_string(model.hlds.window_len));
    }
    if (given("overlap") && config.hlds.overlap != model.hlds.overlap) {
        mismatch("overlap", std::to_string(config.hlds.overlap), std::to_string(model.hlds.overlap));
    }
    if (given("layer_dims") && config.hlds.layer_dims != model.hlds.layer_dims) {
        mismatch("layer_dims", join_dims(config.hlds.layer_dims), join_dims(model.hlds.layer_dims));
    }
}

} // namespace hlds::pipeline
