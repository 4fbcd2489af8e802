#pragma once

// Shared helpers for the unit and acceptance tests: random systems and small
// independent reference computations.

#include "hlds/linalg.hpp"
#include "hlds/statespace.hpp"

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace hlds::test {

inline double rel_diff(const Vector& a, const Vector& b) {
    const double scale = std::max({a.norm(), b.norm(), 1e-300});
    return (a - b).norm() / scale;
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = n(rng);
        }
    }
    return m;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n) { return random_matrix(rng, n, 1).col(0); }

/// Stable-ish random model. Rx may be rank deficient (rank_x < D) to exercise
/// the singular-innovation path.
inline statespace::LinearModel random_model(std::mt19937_64& rng, Eigen::Index d, Eigen::Index m,
                                            Eigen::Index rank_x = -1) {
    statespace::LinearModel model;
    Matrix f = random_matrix(rng, d, d);
    const double radius = f.eigenvalues().cwiseAbs().maxCoeff();
    model.transition = f * (0.95 / std::max(radius, 1e-3));
    model.observation = random_matrix(rng, m, d);
    const Matrix a = random_matrix(rng, d, rank_x < 0 ? d : rank_x);
    model.state_noise_cov = 0.5 * a * a.transpose();
    const Matrix b = random_matrix(rng, m, m);
    model.obs_noise_cov = 0.3 * b * b.transpose() + 0.5 * Matrix::Identity(m, m);
    return model;
}

/// Direct O(w^2) orthonormal DCT-II in long double.
inline std::vector<double> brute_dct(const std::vector<double>& x) {
    const std::size_t w = x.size();
    const long double pi = 3.141592653589793238462643383279502884L;
    std::vector<double> out(w);
    for (std::size_t k = 0; k < w; ++k) {
        long double acc = 0.0L;
        for (std::size_t n = 0; n < w; ++n) {
            acc += static_cast<long double>(x[n]) * std::cos(pi * (n + 0.5L) * k / w);
        }
        const long double scale = std::sqrt((k == 0 ? 1.0L : 2.0L) / w);
        out[k] = static_cast<double>(scale * acc);
    }
    return out;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("hlds-" + tag + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace hlds::test
