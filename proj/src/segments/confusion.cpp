#include "hlds/segments.hpp"

#include "hlds/error.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace hlds::segments {

long long ConfusionMatrix::row_total(std::size_t row) const {
    long long sum = 0;
    for (long long v : counts.at(row)) {
        sum += v;
    }
    return sum;
}

long long ConfusionMatrix::correct(std::size_t row) const {
    const std::size_t col = row < trained_rows ? row : col_labels.size() - 1;
    return counts.at(row).at(col);
}

long long ConfusionMatrix::total() const {
    long long sum = 0;
    for (std::size_t r = 0; r < counts.size(); ++r) {
        sum += row_total(r);
    }
    return sum;
}

long long ConfusionMatrix::total_correct() const {
    long long sum = 0;
    for (std::size_t r = 0; r < counts.size(); ++r) {
        sum += correct(r);
    }
    return sum;
}

double ConfusionMatrix::instance_accuracy() const {
    const long long n = total();
    return n == 0 ? 0.0 : static_cast<double>(total_correct()) / static_cast<double>(n);
}

ConfusionMatrix ConfusionMatrix::collapse_untrained(const std::string& name) const {
    ConfusionMatrix out;
    out.col_labels = col_labels;
    out.trained_rows = trained_rows;
    out.row_labels.assign(row_labels.begin(), row_labels.begin() + static_cast<std::ptrdiff_t>(trained_rows));
    out.counts.assign(counts.begin(), counts.begin() + static_cast<std::ptrdiff_t>(trained_rows));
    if (counts.size() > trained_rows) {
        std::vector<long long> merged(col_labels.size(), 0);
        for (std::size_t r = trained_rows; r < counts.size(); ++r) {
            for (std::size_t c = 0; c < merged.size(); ++c) {
                merged[c] += counts[r][c];
            }
        }
        out.row_labels.push_back(name);
        out.counts.push_back(std::move(merged));
    }
    return out;
}

std::string ConfusionMatrix::render_text() const {
    std::vector<std::string> header{""};
    for (std::size_t c = 0; c < col_labels.size(); ++c) {
        header.push_back(c + 1 == col_labels.size() ? "outlier" : col_labels[c]);
    }
    std::vector<std::vector<std::string>> cells;
    for (std::size_t r = 0; r < counts.size(); ++r) {
        std::vector<std::string> row{row_labels[r]};
        const long long n = row_total(r);
        for (long long v : counts[r]) {
            row.push_back(v == 0 ? "0" : std::to_string(v) + "/" + std::to_string(n));
        }
        cells.push_back(std::move(row));
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = header[c].size();
        for (const auto& row : cells) {
            width[c] = std::max(width[c], row[c].size());
        }
    }
    auto emit = [&](std::ostringstream& out, const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) {
                out << "  ";
            }
            out << row[c] << std::string(width[c] - row[c].size(), ' ');
        }
        out << '\n';
    };
    std::size_t line_width = 0;
    for (std::size_t w : width) {
        line_width += w + 2;
    }
    const std::string rule(line_width - 2, '-');

    std::ostringstream out;
    emit(out, header);
    out << rule << '\n';
    for (std::size_t r = 0; r < cells.size(); ++r) {
        if (r == trained_rows && r > 0) {
            out << rule << '\n';
        }
        emit(out, cells[r]);
    }
    return out.str();
}

std::string ConfusionMatrix::to_csv() const {
    std::ostringstream out;
    out << "true_label";
    for (const auto& c : col_labels) {
        out << ',' << c;
    }
    out << '\n';
    for (std::size_t r = 0; r < counts.size(); ++r) {
        out << row_labels[r];
        for (long long v : counts[r]) {
            out << ',' << v;
        }
        out << '\n';
    }
    return out.str();
}

ConfusionMatrix match_and_score(std::span<const SegmentPrediction> predictions,
                                std::span<const classify::LabeledSegment> truth,
                                std::span<const std::string> trained_labels, int frame_hop, int window_len) {
    if (truth.empty()) {
        throw InputError("ground truth contains no labeled notes");
    }
    classify::validate_segments(truth);
    const std::string outlier(classify::kOutlierLabel);

    std::map<std::string, std::size_t> col_of;
    ConfusionMatrix cm;
    for (const auto& label : trained_labels) {
        if (label == outlier || !col_of.emplace(label, cm.col_labels.size()).second) {
            throw InputError("trained labels must be distinct and not the outlier label ('" + label + "')");
        }
        cm.col_labels.push_back(label);
    }
    const std::size_t outlier_col = cm.col_labels.size();
    cm.col_labels.push_back(outlier);
    for (const auto& p : predictions) {
        if (p.label != outlier && !col_of.contains(p.label)) {
            throw InputError("prediction label '" + p.label + "' is not a trained class");
        }
        if (p.start_frame < 0 || p.end_frame <= p.start_frame) {
            throw InputError("prediction [" + std::to_string(p.start_frame) + ", " + std::to_string(p.end_frame) +
                             ") is empty or negative");
        }
    }

    cm.row_labels.assign(trained_labels.begin(), trained_labels.end());
    cm.trained_rows = cm.row_labels.size();
    std::set<std::string> others;
    for (const auto& t : truth) {
        if (!col_of.contains(t.label)) {
            others.insert(t.label);
        }
    }
    cm.row_labels.insert(cm.row_labels.end(), others.begin(), others.end());
    std::map<std::string, std::size_t> row_of;
    for (std::size_t r = 0; r < cm.row_labels.size(); ++r) {
        row_of[cm.row_labels[r]] = r;
    }
    cm.counts.assign(cm.row_labels.size(), std::vector<long long>(cm.col_labels.size(), 0));

    constexpr auto unbounded = std::numeric_limits<Eigen::Index>::max();
    for (const auto& note : truth) {
        const classify::FrameRange range = classify::frames_within(note, window_len, frame_hop, unbounded);
        std::vector<Eigen::Index> cover(cm.col_labels.size(), 0);
        Eigen::Index covered = 0;
        for (const auto& p : predictions) {
            const Eigen::Index overlap = std::min(p.end_frame, range.end) - std::max(p.start_frame, range.begin);
            if (overlap > 0) {
                const std::size_t col = p.label == outlier ? outlier_col : col_of.at(p.label);
                cover[col] += overlap;
                covered += overlap;
            }
        }
        cover[outlier_col] += range.size() - covered;

        // Outlier wins ties; among classes the first column (smaller label
        // when the caller sorted them) wins.
        std::size_t best = outlier_col;
        for (std::size_t c = 0; c < outlier_col; ++c) {
            const bool better = cover[c] > cover[best] ||
                                (cover[c] == cover[best] && best != outlier_col && cm.col_labels[c] < cm.col_labels[best]);
            if (better) {
                best = c;
            }
        }
        ++cm.counts[row_of.at(note.label)][best];
    }
    return cm;
}

} // namespace hlds::segments
