#include "hlds/cli.hpp"

#include "hlds/diag.hpp"
#include "hlds/error.hpp"
#include "hlds/pipeline.hpp"
#include "hlds/text.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace hlds::cli {
namespace {

namespace fs = std::filesystem;

struct Common {
    std::string config_path;
    std::vector<std::string> settings;
    std::optional<std::uint64_t> seed;
    bool verbose = false;
};

class BadScript : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw InputError("cannot write " + path.string());
    }
    f << content;
    if (!f) {
        throw InputError("failed writing " + path.string());
    }
}

// "-" or empty means the out stream.
void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
    } else {
        write_text(path, content);
    }
}

pipeline::RunConfig load_config(const Common& c) {
    pipeline::RunConfig config;
    if (!c.config_path.empty()) {
        config = pipeline::read_run_config(c.config_path, false);
    }
    for (const auto& s : c.settings) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("--set expects KEY=VALUE, got '" + s + "'");
        }
        pipeline::apply_setting(config, std::string_view(s).substr(0, eq), std::string_view(s).substr(eq + 1));
    }
    config.validate();
    return config;
}

class Timer {
public:
    Timer(bool on, std::ostream& err) : on_(on), err_(err), start_(std::chrono::steady_clock::now()) {}
    void note(const std::string& what) {
        if (!on_) {
            return;
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        err_ << "[" << text::format_double(std::round(s * 1000.0) / 1000.0) << "s] " << what << '\n';
    }

private:
    bool on_;
    std::ostream& err_;
    std::chrono::steady_clock::time_point start_;
};

void write_clip(const synth::RenderedClip& clip, const fs::path& wav, const fs::path& labels) {
    frames::write_wav(wav, clip.clip);
    classify::write_labels(labels, clip.labels);
}

// ---- subcommands -------------------------------------------------------------

struct SynthArgs {
    std::string script, out_wav, out_labels, out_dir;
    bool protocol = false;
    double sigma = 0.0;
};

void cmd_synth(const SynthArgs& a, const Common& c, Timer& timer) {
    if (a.protocol) {
        if (a.out_dir.empty()) {
            throw ConfigError("--protocol needs --out-dir");
        }
        const pipeline::RunConfig config = load_config(c);
        synth::ProtocolOptions o;
        o.sigma = a.sigma;
        o.seed = c.seed.value_or(o.seed);
        o.frame_hop = config.hlds.frame_hop();
        synth::ProtocolClips clips;
        try {
            clips = synth::three_note_protocol(o);
        } catch (const ConfigError& e) {
            throw BadScript(e.what());
        }
        fs::create_directories(a.out_dir);
        const fs::path dir(a.out_dir);
        write_clip(clips.train, dir / "train.wav", dir / "train_labels.csv");
        write_clip(clips.test, dir / "test.wav", dir / "test_labels.csv");
        timer.note("wrote protocol clips to " + a.out_dir);
        return;
    }
    if (a.script.empty() || a.out_wav.empty() || a.out_labels.empty()) {
        throw ConfigError("synth needs --script, --out-wav and --out-labels (or --protocol)");
    }
    synth::ClipScript script;
    synth::RenderedClip clip;
    try {
        script = synth::read_script(a.script);
        if (c.seed) {
            script.seed = *c.seed;
        }
        clip = synth::render(script);
    } catch (const ConfigError& e) {
        throw BadScript(e.what());
    }
    write_clip(clip, a.out_wav, a.out_labels);
    timer.note("rendered " + std::to_string(clip.clip.samples.size()) + " samples, " +
               std::to_string(clip.labels.size()) + " notes");
}

void cmd_features(const std::string& wav, const std::string& out_path, const Common& c, std::ostream& out,
                  Timer& timer) {
    const pipeline::RunConfig config = load_config(c);
    const frames::AudioClip clip = frames::read_wav(wav);
    const frames::FrameSeries f = frames::extract_features(clip, config.hlds.window_len, config.hlds.overlap);
    timer.note("extracted " + std::to_string(f.count()) + " frames");
    std::string csv;
    for (Eigen::Index k = 0; k < f.frames.cols(); ++k) {
        csv += (k ? ",dct_" : "dct_") + std::to_string(k);
    }
    csv += '\n';
    for (Eigen::Index t = 0; t < f.count(); ++t) {
        for (Eigen::Index k = 0; k < f.frames.cols(); ++k) {
            if (k) {
                csv += ',';
            }
            csv += text::format_double(f.frames(t, k));
        }
        csv += '\n';
    }
    emit(out_path, csv, out);
}

void cmd_train(const std::string& wav, const std::string& labels_path, const std::string& out_model,
               const Common& c, std::ostream& out, Timer& timer) {
    const pipeline::RunConfig config = load_config(c);
    const frames::AudioClip clip = frames::read_wav(wav);
    const auto labels = classify::read_labels(labels_path);
    const classify::TrainedModel model = pipeline::train_from_clip(config, clip, labels);
    timer.note("trained " + std::to_string(model.classes.size()) + " classes");
    classify::write_model(out_model, model);
    for (const auto& cls : model.classes) {
        out << cls.label << ": " << cls.sample_count << " samples\n";
    }
}

pipeline::RunConfig config_for_model(const Common& c, const classify::TrainedModel& model) {
    pipeline::RunConfig config = load_config(c);
    pipeline::check_compatible(config, model);
    if (!config.explicit_keys.contains("burn_in")) {
        config.burn_in = model.burn_in;
    }
    return config;
}

void cmd_classify(const std::string& model_path, const std::string& wav, const std::string& out_path,
                  const Common& c, std::ostream& out, Timer& timer) {
    const classify::TrainedModel model = classify::read_model(model_path);
    const pipeline::RunConfig config = config_for_model(c, model);
    const frames::AudioClip clip = frames::read_wav(wav);
    const pipeline::Classification result = pipeline::classify_clip(model, config, clip);
    timer.note("classified " + std::to_string(result.z.frames()) + " frames into " +
               std::to_string(result.segments.size()) + " segments");
    emit(out_path, segments::format_predictions(result.segments), out);
}

void cmd_eval(const std::string& predictions_path, const std::string& truth_path, const std::string& model_path,
              const std::string& collapse, const std::string& out_csv, const Common& c, std::ostream& out) {
    const classify::TrainedModel model = classify::read_model(model_path);
    (void)config_for_model(c, model);
    const auto predictions = segments::read_predictions(predictions_path);
    const auto truth = classify::read_labels(truth_path);
    const auto trained = pipeline::class_labels(model);
    segments::ConfusionMatrix cm =
        segments::match_and_score(predictions, truth, trained, model.hlds.frame_hop(), model.hlds.window_len);
    if (!collapse.empty()) {
        cm = cm.collapse_untrained(collapse);
    }
    out << cm.render_text();
    out << "instance accuracy: " << cm.total_correct() << "/" << cm.total() << " = "
        << text::format_double(cm.instance_accuracy()) << '\n';
    if (!out_csv.empty()) {
        write_text(out_csv, cm.to_csv());
    }
}

void cmd_zdump(const std::string& model_path, const std::string& wav, const std::string& out_path,
               const Common& c, std::ostream& out, Timer& timer) {
    model::HldsConfig hlds;
    int sample_rate = 0;
    if (!model_path.empty()) {
        const classify::TrainedModel model = classify::read_model(model_path);
        (void)config_for_model(c, model);
        hlds = model.hlds;
        sample_rate = model.sample_rate;
    } else {
        hlds = load_config(c).hlds;
    }
    const frames::AudioClip clip = frames::read_wav(wav);
    if (sample_rate > 0 && sample_rate != clip.sample_rate) {
        throw ConfigError("sample_rate mismatch: clip has " + std::to_string(clip.sample_rate) +
                          " Hz, model was trained at " + std::to_string(sample_rate) + " Hz");
    }
    const frames::FrameSeries f = frames::extract_features(clip, hlds.window_len, hlds.overlap);
    const model::ZTrajectory z = pipeline::z_trajectory(hlds, f);
    timer.note("filtered " + std::to_string(z.frames()) + " frames");
    std::string csv = "frame";
    for (Eigen::Index k = 0; k < z.dim(); ++k) {
        csv += ",z_" + std::to_string(k + 1);
    }
    csv += '\n';
    for (Eigen::Index t = 0; t < z.frames(); ++t) {
        csv += std::to_string(t);
        for (Eigen::Index k = 0; k < z.dim(); ++k) {
            csv += ',' + text::format_double(z.z(t, k));
        }
        csv += '\n';
    }
    emit(out_path, csv, out);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hierarchical linear dynamical system note segmentation and classification"};
    app.name(args.empty() ? "hlds" : args.front());
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--config", common.config_path, "Run configuration file (key = value)");
    app.add_option("--set", common.settings, "Override one config key, KEY=VALUE (repeatable; wins over --config)");
    app.add_option("--seed", common.seed, "Random seed for synthesis");
    app.add_flag("--verbose,-v", common.verbose, "Progress and timing on stderr");

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "Render a synthetic clip and its labels");
    synth->add_option("--script", synth_args.script, "JSON clip script");
    synth->add_option("--out-wav", synth_args.out_wav, "Output WAV path");
    synth->add_option("--out-labels", synth_args.out_labels, "Output labels CSV path");
    synth->add_flag("--protocol", synth_args.protocol, "Render the three-note outlier protocol instead");
    synth->add_option("--sigma", synth_args.sigma, "Protocol noise standard deviation");
    synth->add_option("--out-dir", synth_args.out_dir, "Protocol output directory");

    std::string wav, out_path, labels, model_path, predictions, collapse, out_csv;
    auto* features = app.add_subcommand("features", "Export |DCT| frames as CSV");
    features->add_option("--wav", wav, "Input WAV")->required();
    features->add_option("--out", out_path, "Output CSV (default stdout)");

    auto* train = app.add_subcommand("train", "Fit class models from a labeled clip");
    train->add_option("--wav", wav, "Training WAV")->required();
    train->add_option("--labels", labels, "Training labels CSV")->required();
    train->add_option("--out-model", model_path, "Output model file")->required();

    auto* classify_cmd = app.add_subcommand("classify", "Segment and classify a clip");
    classify_cmd->add_option("--model", model_path, "Model file")->required();
    classify_cmd->add_option("--wav", wav, "Input WAV")->required();
    classify_cmd->add_option("--out", out_path, "Predictions CSV (default stdout)");

    auto* eval = app.add_subcommand("eval", "Confusion matrix of predictions against true labels");
    eval->add_option("--predictions", predictions, "Predictions CSV")->required();
    eval->add_option("--labels", labels, "True labels CSV")->required();
    eval->add_option("--model", model_path, "Model file (class list and frame settings)")->required();
    eval->add_option("--collapse-outliers", collapse, "Sum all untrained rows into one row with this name");
    eval->add_option("--out-csv", out_csv, "Also write the matrix as CSV");

    auto* zdump = app.add_subcommand("zdump", "Export the top-layer trajectory as CSV");
    zdump->add_option("--model", model_path, "Model file (HLDS settings); default is the run config");
    zdump->add_option("--wav", wav, "Input WAV")->required();
    zdump->add_option("--out", out_path, "Output CSV (default stdout)");

    std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    diag::Sink previous = diag::set_warning_sink([&err](std::string_view m) { err << "warning: " << m << '\n'; });
    struct Restore {
        diag::Sink& sink;
        ~Restore() { diag::set_warning_sink(std::move(sink)); }
    } restore{previous};

    Timer timer(common.verbose, err);
    try {
        if (synth->parsed()) {
            cmd_synth(synth_args, common, timer);
        } else if (features->parsed()) {
            cmd_features(wav, out_path, common, out, timer);
        } else if (train->parsed()) {
            cmd_train(wav, labels, model_path, common, out, timer);
        } else if (classify_cmd->parsed()) {
            cmd_classify(model_path, wav, out_path, common, out, timer);
        } else if (eval->parsed()) {
            cmd_eval(predictions, labels, model_path, collapse, out_csv, common, out);
        } else if (zdump->parsed()) {
            cmd_zdump(model_path, wav, out_path, common, out, timer);
        }
    } catch (const BadScript& e) {
        err << "error: " << e.what() << '\n';
        return kExitBadScript;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    out.flush();
    return kExitOk;
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace hlds::cli
