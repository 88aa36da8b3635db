#pragma once

#include "qzlab/kernels.hpp"

namespace qzlab::kernels::detail {

extern const KernelTable kScalarTable;

#if defined(QZLAB_HAVE_AVX2_KERNELS)
extern const KernelTable kAvx2Table;
#endif

} // namespace qzlab::kernels::detail
