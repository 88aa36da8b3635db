#include "kernels_impl.hpp"

#include <cassert>
#include <cstdlib>
#include <string_view>

namespace qzlab::kernels {

const KernelTable& scalar() { return detail::kScalarTable; }

const KernelTable* avx2() {
#if defined(QZLAB_HAVE_AVX2_KERNELS)
    static const bool supported = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    }();
    return supported ? &detail::kAvx2Table : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() {
    static const KernelTable& table = []() -> const KernelTable& {
        const char* env = std::getenv("QZLAB_KERNELS");
        const std::string_view request = env ? env : "";
        if (request == "scalar") {
            return scalar();
        }
        if (const KernelTable* vec = avx2()) {
            return *vec;
        }
        return scalar();
    }();
    return table;
}

cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b) {
    assert(a.size() == b.size());
    return active().dot_conj(a.data(), b.data(), a.size());
}

double norm2(std::span<const cplx> a) { return active().norm2(a.data(), a.size()); }

void scale(std::span<cplx> a, double s) { active().scale(a.data(), s, a.size()); }

void axpy(std::span<cplx> y, cplx c, std::span<const cplx> x) {
    assert(y.size() == x.size());
    active().axpy(y.data(), c, x.data(), y.size());
}

void mul(std::span<cplx> y, std::span<const cplx> p) {
    assert(y.size() == p.size());
    active().mul(y.data(), p.data(), y.size());
}

} // namespace qzlab::kernels
