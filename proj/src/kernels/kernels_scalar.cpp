#include "kernels_impl.hpp"

namespace hlds::kernels::detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += alpha * x[i];
    }
}

void axpby_scalar(double alpha, const double* x, double beta, const double* y, double* out,
                  std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = alpha * x[i] + beta * y[i];
    }
}

void matvec_scalar(const double* a, std::size_t rows, std::size_t cols, const double* x,
                   double* y) {
    for (std::size_t r = 0; r < rows; ++r) {
        y[r] = dot_scalar(a + r * cols, x, cols);
    }
}

} // namespace

const KernelTable scalar_table{Isa::scalar, dot_scalar, axpy_scalar, axpby_scalar, matvec_scalar};

} // namespace hlds::kernels::detail
