// Built with -mavx2 -mfma; only reached when the dispatcher has confirmed
// the CPU supports both.
#include "kernels_impl.hpp"

#include <immintrin.h>

namespace qzlab::kernels::detail {

namespace {

// One __m256d holds two interleaved complex numbers: [re0 im0 re1 im1].
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }
inline __m256d swap_re_im(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

cplx dot_conj_avx2(const cplx* a, const cplx* b, std::size_t n) {
    // direct accumulates [ar*br, ai*bi], cross accumulates [ar*bi, ai*br]
    __m256d direct0 = _mm256_setzero_pd(), direct1 = _mm256_setzero_pd();
    __m256d cross0 = _mm256_setzero_pd(), cross1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a0 = load2(a + i), a1 = load2(a + i + 2);
        const __m256d b0 = load2(b + i), b1 = load2(b + i + 2);
        direct0 = _mm256_fmadd_pd(a0, b0, direct0);
        direct1 = _mm256_fmadd_pd(a1, b1, direct1);
        cross0 = _mm256_fmadd_pd(a0, swap_re_im(b0), cross0);
        cross1 = _mm256_fmadd_pd(a1, swap_re_im(b1), cross1);
    }
    for (; i + 2 <= n; i += 2) {
        const __m256d a0 = load2(a + i), b0 = load2(b + i);
        direct0 = _mm256_fmadd_pd(a0, b0, direct0);
        cross0 = _mm256_fmadd_pd(a0, swap_re_im(b0), cross0);
    }
    const __m256d direct = _mm256_add_pd(direct0, direct1);
    const __m256d cross = _mm256_add_pd(cross0, cross1);
    // im = (ar*bi - ai*br) summed over lanes: negate the odd slots first.
    const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
    double re = hsum(direct);
    double im = hsum(_mm256_mul_pd(cross, sign));
    for (; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

double norm2_avx2(const cplx* a, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a0 = load2(a + i), a1 = load2(a + i + 2);
        acc0 = _mm256_fmadd_pd(a0, a0, acc0);
        acc1 = _mm256_fmadd_pd(a1, a1, acc1);
    }
    for (; i + 2 <= n; i += 2) {
        const __m256d a0 = load2(a + i);
        acc0 = _mm256_fmadd_pd(a0, a0, acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        acc += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    }
    return acc;
}

void scale_avx2(cplx* a, double s, std::size_t n) {
    const __m256d sv = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        store2(a + i, _mm256_mul_pd(load2(a + i), sv));
    }
    for (; i < n; ++i) {
        a[i] = {a[i].real() * s, a[i].imag() * s};
    }
}

void axpy_avx2(cplx* y, cplx c, const cplx* x, std::size_t n) {
    const double cr = c.real(), ci = c.imag();
    const __m256d crv = _mm256_set1_pd(cr), civ = _mm256_set1_pd(ci);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = load2(x + i);
        // [cr*xr - ci*xi, cr*xi + ci*xr]
        const __m256d cx = _mm256_fmaddsub_pd(crv, xv, _mm256_mul_pd(civ, swap_re_im(xv)));
        store2(y + i, _mm256_add_pd(load2(y + i), cx));
    }
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = {y[i].real() + cr * xr - ci * xi, y[i].imag() + cr * xi + ci * xr};
    }
}

void mul_avx2(cplx* y, const cplx* p, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d yv = load2(y + i);
        const __m256d pv = load2(p + i);
        const __m256d p_re = _mm256_movedup_pd(pv);
        const __m256d p_im = _mm256_permute_pd(pv, 0b1111);
        store2(y + i, _mm256_fmaddsub_pd(yv, p_re, _mm256_mul_pd(swap_re_im(yv), p_im)));
    }
    for (; i < n; ++i) {
        const double yr = y[i].real(), yi = y[i].imag();
        const double pr = p[i].real(), pi = p[i].imag();
        y[i] = {yr * pr - yi * pi, yr * pi + yi * pr};
    }
}

} // namespace

const KernelTable kAvx2Table{
    "avx2", dot_conj_avx2, norm2_avx2, scale_avx2, axpy_avx2, mul_avx2,
};

} // namespace qzlab::kernels::detail
