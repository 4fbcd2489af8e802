#pragma once

#include "hlds/kernels.hpp"

namespace hlds::kernels::detail {

extern const KernelTable scalar_table;
#if defined(HLDS_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
#if defined(HLDS_HAVE_NEON)
extern const KernelTable neon_table;
#endif

} // namespace hlds::kernels::detail
