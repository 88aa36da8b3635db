#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

// Inner loops over interleaved complex<double> arrays. Every routine has a
// portable scalar reference and, where the target supports it, a vector
// variant; the active table is picked once at startup from the CPU features
// (override with QZLAB_KERNELS=scalar|avx2).
namespace qzlab::kernels {

using cplx = std::complex<double>;

struct KernelTable {
    std::string_view name;

    // sum_i conj(a[i]) * b[i]
    cplx (*dot_conj)(const cplx* a, const cplx* b, std::size_t n);
    // sum_i |a[i]|^2
    double (*norm2)(const cplx* a, std::size_t n);
    // a[i] *= s
    void (*scale)(cplx* a, double s, std::size_t n);
    // y[i] += c * x[i]
    void (*axpy)(cplx* y, cplx c, const cplx* x, std::size_t n);
    // y[i] *= p[i]
    void (*mul)(cplx* y, const cplx* p, std::size_t n);
};

const KernelTable& scalar();

// nullptr when the vector variant was not compiled in or the CPU lacks it.
const KernelTable* avx2();

const KernelTable& active();

// Span conveniences over the active table.
cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b);
double norm2(std::span<const cplx> a);
void scale(std::span<cplx> a, double s);
void axpy(std::span<cplx> y, cplx c, std::span<const cplx> x);
void mul(std::span<cplx> y, std::span<const cplx> p);

} // namespace qzlab::kernels
