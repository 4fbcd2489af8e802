#include "hlds/classify.hpp"
#include "hlds/cli.hpp"
#include "hlds/frames.hpp"
#include "hlds/segments.hpp"

#include "support.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace hlds;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result hlds_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "hlds");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void spit(const std::filesystem::path& p, const std::string& s) {
    std::ofstream f(p, std::ios::binary);
    f << s;
}

// One trained protocol model shared by the tests below.
struct Fixture {
    test::TempDir dir{"cli"};
    std::string model;

    Fixture() {
        const auto r = hlds_cli({"synth", "--protocol", "--sigma", "0", "--out-dir", (dir / "p").string()});
        REQUIRE(r.code == 0);
        model = (dir / "m.txt").string();
        const auto t = hlds_cli({"train", "--wav", (dir / "p/train.wav").string(), "--labels",
                                 (dir / "p/train_labels.csv").string(), "--out-model", model});
        REQUIRE(t.code == 0);
    }
};

Fixture& fixture() {
    static Fixture f;
    return f;
}

} // namespace

TEST_CASE("synth: script to files, deterministic, aliasing exit code") {
    test::TempDir dir("synth");
    spit(dir / "s.json", R"({"seed": 4, "noise_sigma": 0.01, "events": [{"silence": 0.1},
        {"pitch": "A4", "harmonics": 3, "decay": 0.7, "duration": 0.3, "amplitude": 0.4}, {"silence": 0.1}]})");
    const auto a = hlds_cli({"synth", "--script", (dir / "s.json").string(), "--out-wav", (dir / "a.wav").string(),
                             "--out-labels", (dir / "a.csv").string()});
    CHECK(a.code == 0);
    CHECK(a.out.empty());
    CHECK(slurp(dir / "a.csv") == "start_sample,end_sample,label\n800,3200,A4\n");
    const auto b = hlds_cli({"synth", "--script", (dir / "s.json").string(), "--out-wav", (dir / "b.wav").string(),
                             "--out-labels", (dir / "b.csv").string()});
    CHECK(b.code == 0);
    CHECK(slurp(dir / "a.wav") == slurp(dir / "b.wav"));
    const auto c = hlds_cli({"--seed", "5", "synth", "--script", (dir / "s.json").string(), "--out-wav",
                             (dir / "c.wav").string(), "--out-labels", (dir / "c.csv").string()});
    CHECK(c.code == 0);
    CHECK(slurp(dir / "a.wav") != slurp(dir / "c.wav"));

    spit(dir / "alias.json", R"({"events": [{"fundamental_hz": 1500, "harmonics": 3}]})");
    const auto bad = hlds_cli({"synth", "--script", (dir / "alias.json").string(), "--out-wav",
                               (dir / "x.wav").string(), "--out-labels", (dir / "x.csv").string()});
    CHECK(bad.code == cli::kExitBadScript);
    CHECK(bad.err.find("aliasing") != std::string::npos);
    CHECK(!std::filesystem::exists(dir / "x.wav"));
}

TEST_CASE("train: three classes, counts printed") {
    auto& f = fixture();
    const auto m = classify::read_model(f.model);
    CHECK(m.classes.size() == 3);
    CHECK(m.sample_rate == 8000);
    const auto t = hlds_cli({"train", "--wav", (f.dir / "p/train.wav").string(), "--labels",
                             (f.dir / "p/train_labels.csv").string(), "--out-model", (f.dir / "m2.txt").string()});
    CHECK(t.code == 0);
    CHECK(t.out.find("tone-470hz: ") != std::string::npos);
    CHECK(slurp(f.model) == slurp(f.dir / "m2.txt"));
}

TEST_CASE("train: empty labels fail, thin classes warn") {
    auto& f = fixture();
    spit(f.dir / "empty.csv", "start_sample,end_sample,label\n");
    const auto e = hlds_cli({"train", "--wav", (f.dir / "p/train.wav").string(), "--labels",
                             (f.dir / "empty.csv").string(), "--out-model", (f.dir / "e.txt").string()});
    CHECK(e.code == 1);
    CHECK(!e.err.empty());

    // 7 frames per segment, burn-in 5 -> 2 samples < d_L + 1
    const auto labels = classify::read_labels(f.dir / "p/train_labels.csv");
    std::string thin = "start_sample,end_sample,label\n";
    for (const auto& l : labels) {
        thin += std::to_string(l.start_sample) + "," + std::to_string(l.start_sample + 96 + 6 * 48) + "," + l.label +
                "\n";
    }
    spit(f.dir / "thin.csv", thin);
    const auto w = hlds_cli({"train", "--wav", (f.dir / "p/train.wav").string(), "--labels",
                             (f.dir / "thin.csv").string(), "--out-model", (f.dir / "thin.txt").string()});
    CHECK(w.code == 0);
    CHECK(w.err.find("warning:") != std::string::npos);

    const auto s = hlds_cli({"train", "--wav", (f.dir / "p/train.wav").string(), "--labels",
                             (f.dir / "thin.csv").string(), "--out-model", (f.dir / "t2.txt").string(), "--set",
                             "burn_in=7"});
    CHECK(s.code == 1);
    CHECK(s.err.find("burn_in") != std::string::npos);
}

TEST_CASE("classify: silent clip, mismatches, missing files") {
    auto& f = fixture();
    frames::AudioClip silence;
    silence.sample_rate = 8000;
    silence.samples.assign(8000, 0.0);
    frames::write_wav(f.dir / "silence.wav", silence);
    const auto r = hlds_cli({"classify", "--model", f.model, "--wav", (f.dir / "silence.wav").string()});
    CHECK(r.code == 0);
    const auto preds = segments::parse_predictions(r.out);
    REQUIRE(preds.size() == 1);
    CHECK(preds[0].label == classify::kOutlierLabel);
    CHECK(preds[0].start_frame == 0);
    CHECK(preds[0].end_frame == frames::frame_count(8000, 96, 48));

    const auto mm = hlds_cli({"classify", "--model", f.model, "--wav", (f.dir / "silence.wav").string(), "--set",
                              "layer_dims=64,16,8,2", "--set", "window_len=64", "--set", "overlap=32"});
    CHECK(mm.code == 1);
    CHECK(mm.err.find("64") != std::string::npos);
    CHECK(mm.err.find("96") != std::string::npos);

    silence.sample_rate = 16000;
    frames::write_wav(f.dir / "s16.wav", silence);
    const auto sr = hlds_cli({"classify", "--model", f.model, "--wav", (f.dir / "s16.wav").string()});
    CHECK(sr.code == 1);
    CHECK(sr.err.find("sample_rate") != std::string::npos);

    CHECK(hlds_cli({"classify", "--model", f.model, "--wav", (f.dir / "nope.wav").string()}).code == 1);
    CHECK(hlds_cli({"classify", "--model", (f.dir / "nope.txt").string(), "--wav",
                    (f.dir / "silence.wav").string()})
              .code == 1);
}

TEST_CASE("eval: perfect predictions give a diagonal table") {
    auto& f = fixture();
    const auto truth = classify::read_labels(f.dir / "p/test_labels.csv");
    const auto m = classify::read_model(f.model);
    std::vector<std::string> trained;
    for (const auto& c : m.classes) {
        trained.push_back(c.label);
    }
    std::vector<segments::SegmentPrediction> perfect;
    for (const auto& t : truth) {
        const auto r = classify::frames_within(t, 96, 48, 1 << 30);
        const bool in_class = std::find(trained.begin(), trained.end(), t.label) != trained.end();
        perfect.push_back({r.begin, r.end, in_class ? t.label : std::string(classify::kOutlierLabel), -1.0});
    }
    segments::write_predictions(f.dir / "perfect.csv", perfect);
    const auto r = hlds_cli({"eval", "--predictions", (f.dir / "perfect.csv").string(), "--labels",
                             (f.dir / "p/test_labels.csv").string(), "--model", f.model, "--collapse-outliers",
                             "outliers", "--out-csv", (f.dir / "cm.csv").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("44/44") != std::string::npos);
    CHECK(r.out.find("32/32") != std::string::npos);
    CHECK(slurp(f.dir / "cm.csv").find("outliers,0,0,0,32") != std::string::npos);
    CHECK(hlds_cli({"eval", "--predictions", (f.dir / "none.csv").string(), "--labels",
                    (f.dir / "p/test_labels.csv").string(), "--model", f.model})
              .code == 1);
}

TEST_CASE("zdump and features") {
    auto& f = fixture();
    frames::AudioClip tone;
    tone.sample_rate = 8000;
    for (int i = 0; i < 48 * 1000; ++i) {
        tone.samples.push_back(0.3 * std::sin(2.0 * 3.141592653589793 * 500.0 * i / 8000.0));
    }
    // constant |DCT| needs a period that divides the hop: 500 Hz repeats every 16 samples
    frames::write_wav(f.dir / "tone.wav", tone);
    const auto z = hlds_cli({"zdump", "--model", f.model, "--wav", (f.dir / "tone.wav").string()});
    CHECK(z.code == 0);
    std::istringstream in(z.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "frame,z_1,z_2");
    std::vector<std::string> rows;
    while (std::getline(in, line)) {
        rows.push_back(line);
    }
    CHECK(rows.size() == 999);
    auto z_of = [](const std::string& row) {
        std::istringstream s(row);
        std::string cell;
        std::vector<double> v;
        while (std::getline(s, cell, ',')) {
            v.push_back(std::stod(cell));
        }
        return v;
    };
    const auto a = z_of(rows[997]);
    const auto b = z_of(rows[998]);
    CHECK(std::abs(a[1] - b[1]) < 1e-6);
    CHECK(std::abs(a[2] - b[2]) < 1e-6);

    const auto nomodel = hlds_cli({"zdump", "--wav", (f.dir / "tone.wav").string()});
    CHECK(nomodel.code == 0);
    CHECK(nomodel.out == z.out);

    frames::AudioClip empty;
    empty.sample_rate = 8000;
    frames::write_wav(f.dir / "empty.wav", empty);
    const auto e = hlds_cli({"zdump", "--model", f.model, "--wav", (f.dir / "empty.wav").string()});
    CHECK(e.code == 1);

    const auto feat = hlds_cli({"features", "--wav", (f.dir / "tone.wav").string(), "--out",
                                (f.dir / "feat.csv").string()});
    CHECK(feat.code == 0);
    const std::string csv = slurp(f.dir / "feat.csv");
    CHECK(csv.rfind("dct_0,dct_1,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1000);
}

TEST_CASE("config file and flag precedence") {
    auto& f = fixture();
    spit(f.dir / "run.conf", "# test config\nmin_duration = 40\ntheta = 2.5\n");
    CHECK(hlds_cli({"--config", (f.dir / "run.conf").string(), "classify", "--model", f.model, "--wav",
                    (f.dir / "p/train.wav").string(), "--out", (f.dir / "c.csv").string()})
              .code == 0);
    spit(f.dir / "bad.conf", "min_duration = 0\n");
    const auto bad = hlds_cli({"--config", (f.dir / "bad.conf").string(), "classify", "--model", f.model, "--wav",
                               (f.dir / "p/train.wav").string()});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("min_duration") != std::string::npos);
    // flag wins over file
    CHECK(hlds_cli({"--config", (f.dir / "bad.conf").string(), "--set", "min_duration=20", "classify", "--model",
                    f.model, "--wav", (f.dir / "p/train.wav").string(), "--out", (f.dir / "c2.csv").string()})
              .code == 0);
    spit(f.dir / "unknown.conf", "colour = blue\n");
    CHECK(hlds_cli({"--config", (f.dir / "unknown.conf").string(), "zdump", "--wav", (f.dir / "p/train.wav").string()})
              .code == 1);
    CHECK(hlds_cli({"frobnicate"}).code == 1);
    CHECK(hlds_cli({}).code == 1);
    CHECK(hlds_cli({"--help"}).code == 0);
}
