#include "kernels_impl.hpp"

namespace qzlab::kernels::detail {

namespace {

cplx dot_conj_scalar(const cplx* a, const cplx* b, std::size_t n) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

double norm2_scalar(const cplx* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    }
    return acc;
}

void scale_scalar(cplx* a, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = {a[i].real() * s, a[i].imag() * s};
    }
}

void axpy_scalar(cplx* y, cplx c, const cplx* x, std::size_t n) {
    const double cr = c.real(), ci = c.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = {y[i].real() + cr * xr - ci * xi, y[i].imag() + cr * xi + ci * xr};
    }
}

void mul_scalar(cplx* y, const cplx* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double yr = y[i].real(), yi = y[i].imag();
        const double pr = p[i].real(), pi = p[i].imag();
        y[i] = {yr * pr - yi * pi, yr * pi + yi * pr};
    }
}

} // namespace

const KernelTable kScalarTable{
    "scalar", dot_conj_scalar, norm2_scalar, scale_scalar, axpy_scalar, mul_scalar,
};

} // namespace qzlab::kernels::detail
