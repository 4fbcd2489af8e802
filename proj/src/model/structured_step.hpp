#pragma once

#include "hlds/model.hpp"

#include <span>
#include <vector>

namespace hlds::model::detail {

// Reusable workspace for the structured Kalman step. Cost per step is
// O(D^2 M) from the factor update instead of the O(D^3) dense products.
class StructuredStepper {
public:
    explicit StructuredStepper(const JointModel& model);

    // In-place update of `state`.
    void step(statespace::FilterState& state, std::span<const double> observation);

private:
    const JointModel& model_;
    std::size_t d_;
    std::size_t m_;
    std::size_t bottom_;
    Vector noise_;
    std::vector<double> b_;    // P F^T, column-major D x D
    std::vector<double> chol_; // lower Cholesky factor of S, row-major M x M
    std::vector<double> w_;    // L^-1 K^T, row-major M x D
    std::vector<double> wt_;   // W^T, row-major D x M
    std::vector<double> innovation_;
};

} // namespace hlds::model::detail
