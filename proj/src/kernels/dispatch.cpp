#include "kernels_impl.hpp"

#include "hlds/error.hpp"

#include <cstdlib>
#include <string>
#include <string_view>

namespace hlds::kernels {
namespace {

bool cpu_supports(Isa isa) {
    switch (isa) {
    case Isa::scalar:
        return true;
    case Isa::avx2:
#if defined(HLDS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    case Isa::neon:
#if defined(HLDS_HAVE_NEON)
        return true;
#else
        return false;
#endif
    }
    return false;
}

const KernelTable* table_for(Isa isa) {
    switch (isa) {
    case Isa::scalar:
        return &detail::scalar_table;
    case Isa::avx2:
#if defined(HLDS_HAVE_AVX2)
        return &detail::avx2_table;
#else
        return nullptr;
#endif
    case Isa::neon:
#if defined(HLDS_HAVE_NEON)
        return &detail::neon_table;
#else
        return nullptr;
#endif
    }
    return nullptr;
}

const KernelTable& select() {
    if (const char* env = std::getenv("HLDS_KERNELS"); env != nullptr && std::string_view(env) == "scalar") {
        return detail::scalar_table;
    }
    for (Isa isa : {Isa::avx2, Isa::neon}) {
        if (const KernelTable* t = find(isa)) {
            return *t;
        }
    }
    return detail::scalar_table;
}

void require_size(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        throw ContractError(std::string("kernel size mismatch for ") + what + ": " +
                            std::to_string(got) + " vs " + std::to_string(want));
    }
}

} // namespace

std::string_view to_string(Isa isa) {
    switch (isa) {
    case Isa::scalar:
        return "scalar";
    case Isa::avx2:
        return "avx2";
    case Isa::neon:
        return "neon";
    }
    return "unknown";
}

const KernelTable* find(Isa isa) {
    return cpu_supports(isa) ? table_for(isa) : nullptr;
}

std::vector<Isa> available() {
    std::vector<Isa> out;
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
        if (find(isa) != nullptr) {
            out.push_back(isa);
        }
    }
    return out;
}

const KernelTable& active() {
    static const KernelTable& table = select();
    return table;
}

double dot(std::span<const double> a, std::span<const double> b) {
    require_size(b.size(), a.size(), "dot");
    return active().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    require_size(y.size(), x.size(), "axpy");
    active().axpy(alpha, x.data(), y.data(), x.size());
}

void axpby(double alpha, std::span<const double> x, double beta, std::span<const double> y,
           std::span<double> out) {
    require_size(y.size(), x.size(), "axpby");
    require_size(out.size(), x.size(), "axpby output");
    active().axpby(alpha, x.data(), beta, y.data(), out.data(), x.size());
}

void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y) {
    require_size(a.size(), rows * cols, "matvec matrix");
    require_size(x.size(), cols, "matvec input");
    require_size(y.size(), rows, "matvec output");
    active().matvec(a.data(), rows, cols, x.data(), y.data());
}

} // namespace hlds::kernels
