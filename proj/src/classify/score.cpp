#include "hlds/classify.hpp"

#include "hlds/error.hpp"

#include <cmath>
#include <string>

namespace hlds::classify {

MahalanobisScorer::MahalanobisScorer(std::span<const ClassModel> classes) {
    classes_.reserve(classes.size());
    for (const auto& c : classes) {
        if (c.covariance.rows() != c.mean.size() || c.covariance.cols() != c.mean.size()) {
            throw ContractError("class '" + c.label + "' has inconsistent mean/covariance shapes");
        }
        Entry e{c.mean, Eigen::LLT<Matrix>(c.covariance)};
        if (e.factor.info() != Eigen::Success) {
            throw NumericalError("covariance of class '" + c.label + "' is not positive definite");
        }
        classes_.push_back(std::move(e));
    }
}

double MahalanobisScorer::distance(std::size_t cls, std::span<const double> z) const {
    const Entry& e = classes_.at(cls);
    if (static_cast<Eigen::Index>(z.size()) != e.mean.size()) {
        throw ContractError("z has dimension " + std::to_string(z.size()) + ", class expects " +
                            std::to_string(e.mean.size()));
    }
    const Vector diff = Eigen::Map<const Vector>(z.data(), e.mean.size()) - e.mean;
    return e.factor.matrixL().solve(diff).norm();
}

ScoredClip score_frames(const model::ZTrajectory& z, std::span<const ClassModel> classes) {
    if (classes.empty()) {
        throw ContractError("score_frames needs at least one class");
    }
    const MahalanobisScorer scorer(classes);
    ScoredClip out;
    out.labels.reserve(classes.size());
    for (const auto& c : classes) {
        out.labels.push_back(c.label);
    }
    out.frames.resize(static_cast<std::size_t>(z.frames()));
    for (Eigen::Index t = 0; t < z.frames(); ++t) {
        FrameScores& fs = out.frames[static_cast<std::size_t>(t)];
        fs.scores.resize(classes.size());
        for (std::size_t c = 0; c < classes.size(); ++c) {
            fs.scores[c] = -scorer.distance(c, z.at(t));
            const bool better = c == 0 || fs.scores[c] > fs.best_score ||
                                (fs.scores[c] == fs.best_score && out.labels[c] < out.labels[fs.best]);
            if (better) {
                fs.best = c;
                fs.best_score = fs.scores[c];
            }
        }
    }
    return out;
}

} // namespace hlds::classify
