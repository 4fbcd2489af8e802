// HLDS-MODEL v1 text format (see docs/file_formats.md):
//
//   HLDS-MODEL v1
//   layer_dims 96 24 12 2
//   innovation_scale <c>
//   obs_noise <r or auto>
//   window_len 96
//   overlap 48
//   initial_cov_scale 1
//   burn_in 5
//   sample_rate 8000
//   classes <K>
//   then per class:
//   class <label>
//   dim <d>
//   count <n>
//   mean <d numbers>
//   cov <d numbers>      (d lines)
#include "hlds/classify.hpp"

#include "hlds/error.hpp"
#include "hlds/text.hpp"

#include <fstream>
#include <sstream>

namespace hlds::classify {
namespace {

class LineReader {
public:
    LineReader(std::string_view text, std::string_view source) : source_(source) {
        std::size_t begin = 0;
        while (begin < text.size()) {
            auto end = text.find('\n', begin);
            if (end == std::string_view::npos) {
                end = text.size();
            }
            auto line = text.substr(begin, end - begin);
            if (!line.empty() && line.back() == '\r') {
                line.remove_suffix(1);
            }
            lines_.push_back(line);
            begin = end + 1;
        }
    }

    std::string_view next(std::string_view what) {
        while (pos_ < lines_.size() && text::trim(lines_[pos_]).empty()) {
            ++pos_;
        }
        if (pos_ >= lines_.size()) {
            fail("unexpected end of file, expected " + std::string(what));
        }
        return lines_[pos_++];
    }

    // "key rest..." -> rest; fails unless the key matches.
    std::string_view keyed(std::string_view key) {
        const auto line = next(key);
        if (line.size() < key.size() + 1 || line.substr(0, key.size()) != key || line[key.size()] != ' ') {
            fail("expected '" + std::string(key) + " ...', got '" + std::string(line) + "'");
        }
        return line.substr(key.size() + 1);
    }

    std::vector<double> numbers(std::string_view key, std::size_t count) {
        const auto rest = keyed(key);
        std::vector<double> out;
        std::istringstream ss{std::string(rest)};
        std::string tok;
        while (ss >> tok) {
            out.push_back(text::parse_double(tok, std::string(source_) + " " + std::string(key)));
        }
        if (out.size() != count) {
            fail("'" + std::string(key) + "' needs " + std::to_string(count) + " values, got " +
                 std::to_string(out.size()));
        }
        return out;
    }

    long long integer(std::string_view key) {
        return text::parse_int(keyed(key), std::string(source_) + " " + std::string(key));
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw InputError(std::string(source_) + " line " + std::to_string(pos_) + ": " + msg);
    }

private:
    std::vector<std::string_view> lines_;
    std::size_t pos_ = 0;
    std::string_view source_;
};

std::string join(const Vector& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += text::format_double(v[i]);
    }
    return out;
}

} // namespace

std::string format_model(const TrainedModel& m) {
    std::ostringstream out;
    out << kModelMagic << '\n';
    out << "layer_dims";
    for (int d : m.hlds.layer_dims) {
        out << ' ' << d;
    }
    out << '\n';
    out << "innovation_scale " << text::format_double(m.hlds.resolved_innovation_scale()) << '\n';
    out << "obs_noise " << (m.hlds.obs_noise_override ? text::format_double(*m.hlds.obs_noise_override) : "auto")
        << '\n';
    out << "window_len " << m.hlds.window_len << '\n';
    out << "overlap " << m.hlds.overlap << '\n';
    out << "initial_cov_scale " << text::format_double(m.hlds.initial_cov_scale) << '\n';
    out << "burn_in " << m.burn_in << '\n';
    out << "sample_rate " << m.sample_rate << '\n';
    out << "classes " << m.classes.size() << '\n';
    for (const auto& c : m.classes) {
        out << "class " << c.label << '\n';
        out << "dim " << c.mean.size() << '\n';
        out << "count " << c.sample_count << '\n';
        out << "mean " << join(c.mean) << '\n';
        for (Eigen::Index r = 0; r < c.covariance.rows(); ++r) {
            out << "cov " << join(c.covariance.row(r).transpose()) << '\n';
        }
    }
    return out.str();
}

TrainedModel parse_model(std::string_view content, std::string_view source) {
    LineReader in(content, source);
    const auto magic = text::trim(in.next("header"));
    if (magic != kModelMagic) {
        if (magic.substr(0, 10) == "HLDS-MODEL") {
            in.fail("unsupported model version '" + std::string(magic) + "' (this build reads " +
                    std::string(kModelMagic) + ")");
        }
        in.fail("not an HLDS model file (missing '" + std::string(kModelMagic) + "' header)");
    }

    TrainedModel m;
    {
        std::istringstream ss{std::string(in.keyed("layer_dims"))};
        std::string tok;
        m.hlds.layer_dims.clear();
        while (ss >> tok) {
            m.hlds.layer_dims.push_back(static_cast<int>(text::parse_int(tok, "layer_dims")));
        }
    }
    m.hlds.innovation_scale = in.numbers("innovation_scale", 1)[0];
    if (const auto obs = text::trim(in.keyed("obs_noise")); obs != "auto") {
        m.hlds.obs_noise_override = text::parse_double(obs, "obs_noise");
    }
    m.hlds.window_len = static_cast<int>(in.integer("window_len"));
    m.hlds.overlap = static_cast<int>(in.integer("overlap"));
    m.hlds.initial_cov_scale = in.numbers("initial_cov_scale", 1)[0];
    m.burn_in = static_cast<int>(in.integer("burn_in"));
    m.sample_rate = static_cast<int>(in.integer("sample_rate"));
    try {
        m.hlds.validate();
    } catch (const ConfigError& e) {
        in.fail(std::string("invalid model configuration: ") + e.what());
    }

    const long long count = in.integer("classes");
    if (count < 1) {
        in.fail("model must contain at least one class");
    }
    for (long long k = 0; k < count; ++k) {
        ClassModel c;
        c.label = std::string(text::trim(in.keyed("class")));
        const long long dim = in.integer("dim");
        if (dim != m.hlds.layer_dims.back()) {
            in.fail("class '" + c.label + "' has dim " + std::to_string(dim) + " but the top layer has " +
                    std::to_string(m.hlds.layer_dims.back()));
        }
        c.sample_count = in.integer("count");
        const auto d = static_cast<std::size_t>(dim);
        const auto mean = in.numbers("mean", d);
        c.mean = Eigen::Map<const Vector>(mean.data(), dim);
        c.covariance.resize(dim, dim);
        for (long long r = 0; r < dim; ++r) {
            const auto row = in.numbers("cov", d);
            for (long long col = 0; col < dim; ++col) {
                c.covariance(r, col) = row[static_cast<std::size_t>(col)];
            }
        }
        m.classes.push_back(std::move(c));
    }
    return m;
}

void write_model(const std::filesystem::path& path, const TrainedModel& model) {
    std::ofstream out(path);
    if (!out || !(out << format_model(model))) {
        throw InputError("cannot write model file " + path.string());
    }
}

TrainedModel read_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open model file " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str(), path.string());
}

} // namespace hlds::classify
