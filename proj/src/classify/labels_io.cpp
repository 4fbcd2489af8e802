#include "hlds/classify.hpp"

#include "hlds/error.hpp"
#include "hlds/text.hpp"

#include <fstream>
#include <sstream>

namespace hlds::classify {

std::vector<LabeledSegment> parse_labels(std::string_view content, std::string_view source) {
    std::vector<LabeledSegment> out;
    std::istringstream in{std::string(content)};
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = text::trim(line);
        if (trimmed.empty()) {
            continue;
        }
        const auto fields = text::split(trimmed, ',');
        const std::string where = std::string(source) + " line " + std::to_string(line_no);
        if (!header) {
            if (fields.size() != 3 || text::trim(fields[0]) != "start_sample" || text::trim(fields[1]) != "end_sample" ||
                text::trim(fields[2]) != "label") {
                throw InputError(where + ": expected header 'start_sample,end_sample,label'");
            }
            header = true;
            continue;
        }
        if (fields.size() != 3) {
            throw InputError(where + ": expected 3 fields, got " + std::to_string(fields.size()));
        }
        LabeledSegment s;
        s.start_sample = text::parse_int(fields[0], where + " start_sample");
        s.end_sample = text::parse_int(fields[1], where + " end_sample");
        s.label = std::string(text::trim(fields[2]));
        out.push_back(std::move(s));
    }
    if (!header) {
        throw InputError(std::string(source) + ": missing header 'start_sample,end_sample,label'");
    }
    validate_segments(out);
    return out;
}

std::vector<LabeledSegment> read_labels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open label file " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_labels(ss.str(), path.string());
}

std::string format_labels(std::span<const LabeledSegment> labels) {
    std::string out = "start_sample,end_sample,label\n";
    for (const auto& s : labels) {
        out += std::to_string(s.start_sample) + "," + std::to_string(s.end_sample) + "," + s.label + "\n";
    }
    return out;
}

void write_labels(const std::filesystem::path& path, std::span<const LabeledSegment> labels) {
    validate_segments(labels);
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << format_labels(labels))) {
        throw InputError("cannot write label file " + path.string());
    }
}

} // namespace hlds::classify
