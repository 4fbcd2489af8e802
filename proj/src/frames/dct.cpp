#include "hlds/frames.hpp"

#include "hlds/error.hpp"
#include "hlds/kernels.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <string>

namespace hlds::frames {

DctPlan::DctPlan(int size) : size_(size) {
    if (size <= 0) {
        throw ContractError("DCT size must be positive, got " + std::to_string(size));
    }
    const auto w = static_cast<std::size_t>(size);
    basis_.resize(w * w);
    const double norm0 = std::sqrt(1.0 / size);
    const double norm = std::sqrt(2.0 / size);
    const std::size_t period = 4 * w;
    for (std::size_t k = 0; k < w; ++k) {
        for (std::size_t n = 0; n < w; ++n) {
            // cos(pi (2n+1) k / (2w)) has period 4w in (2n+1)k; reduce first so
            // the argument stays small.
            const std::size_t phase = ((2 * n + 1) * k) % period;
            const double angle = std::numbers::pi * static_cast<double>(phase) / (2.0 * size);
            basis_[k * w + n] = (k == 0 ? norm0 : norm) * std::cos(angle);
        }
    }
}

void DctPlan::magnitude(std::span<const double> frame, std::span<double> out) const {
    const auto w = static_cast<std::size_t>(size_);
    if (frame.size() != w || out.size() != w) {
        throw ContractError("DCT frame size mismatch: plan " + std::to_string(size_) + ", frame " +
                            std::to_string(frame.size()));
    }
    kernels::matvec(basis_, w, w, frame, out);
    for (double& v : out) {
        v = std::abs(v);
    }
}

std::vector<double> dct_magnitude(std::span<const double> frame) {
    thread_local std::unique_ptr<DctPlan> cached;
    const int n = static_cast<int>(frame.size());
    if (!cached || cached->size() != n) {
        cached = std::make_unique<DctPlan>(n);
    }
    std::vector<double> out(frame.size());
    cached->magnitude(frame, out);
    return out;
}

} // namespace hlds::frames
