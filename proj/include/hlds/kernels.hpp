#pragma once

// Dense double-precision inner loops used by the DCT and the structured
// Kalman step. Each kernel has a scalar reference implementation and SIMD
// variants; the variant is chosen once per process from the running CPU.
// Set HLDS_KERNELS=scalar in the environment to force the reference path.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace hlds::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

struct KernelTable {
    Isa isa;
    // sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // out = alpha * x + beta * y (out may alias x or y)
    void (*axpby)(double alpha, const double* x, double beta, const double* y, double* out,
                  std::size_t n);
    // y = A x with A row-major rows x cols; y must not alias A or x
    void (*matvec)(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
};

/// Table selected for this process.
const KernelTable& active();

/// Table for a specific ISA, or nullptr when it is not compiled in or the CPU
/// lacks the instructions.
const KernelTable* find(Isa isa);

/// Every ISA usable on this machine, scalar first.
std::vector<Isa> available();

// Span front-ends over the active table. Sizes are checked (ContractError).
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void axpby(double alpha, std::span<const double> x, double beta, std::span<const double> y,
           std::span<double> out);
void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y);

} // namespace hlds::kernels
