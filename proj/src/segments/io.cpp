#include "hlds/segments.hpp"

#include "hlds/error.hpp"
#include "hlds/text.hpp"

#include <fstream>
#include <sstream>

namespace hlds::segments {

std::string format_predictions(std::span<const SegmentPrediction> predictions) {
    std::string out = "start_frame,end_frame,label,mean_score\n";
    for (const auto& p : predictions) {
        out += std::to_string(p.start_frame) + "," + std::to_string(p.end_frame) + "," + p.label + "," +
               text::format_double(p.mean_score) + "\n";
    }
    return out;
}

std::vector<SegmentPrediction> parse_predictions(std::string_view content, std::string_view source) {
    std::istringstream in{std::string(content)};
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    std::vector<SegmentPrediction> out;
    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = text::trim(line);
        if (trimmed.empty()) {
            continue;
        }
        const auto fields = text::split(trimmed, ',');
        const std::string where = std::string(source) + " line " + std::to_string(line_no);
        if (!header) {
            if (trimmed != "start_frame,end_frame,label,mean_score") {
                throw InputError(where + ": expected header 'start_frame,end_frame,label,mean_score'");
            }
            header = true;
            continue;
        }
        if (fields.size() != 4) {
            throw InputError(where + ": expected 4 fields, got " + std::to_string(fields.size()));
        }
        SegmentPrediction p;
        p.start_frame = text::parse_int(fields[0], where + " start_frame");
        p.end_frame = text::parse_int(fields[1], where + " end_frame");
        p.label = std::string(text::trim(fields[2]));
        p.mean_score = text::parse_double(fields[3], where + " mean_score");
        if (p.start_frame < 0 || p.end_frame <= p.start_frame) {
            throw InputError(where + ": needs 0 <= start_frame < end_frame");
        }
        out.push_back(std::move(p));
    }
    if (!header) {
        throw InputError(std::string(source) + ": missing header 'start_frame,end_frame,label,mean_score'");
    }
    return out;
}

void write_predictions(const std::filesystem::path& path, std::span<const SegmentPrediction> predictions) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << format_predictions(predictions))) {
        throw InputError("cannot write predictions file " + path.string());
    }
}

std::vector<SegmentPrediction> read_predictions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open predictions file " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_predictions(ss.str(), path.string());
}

} // namespace hlds::segments
