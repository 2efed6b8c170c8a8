#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "fna/kernels.hpp"

// AVX2+FMA lane of the dd kernels: four dd values per vector pair.
// Compiled with -mavx2 -mfma in this TU only; selected at runtime.

namespace fna::kernels::avx2 {

namespace {

struct V {
    __m256d hi, lo;
};

inline void two_sum_v(__m256d a, __m256d b, __m256d& s, __m256d& e) {
    s = _mm256_add_pd(a, b);
    const __m256d bb = _mm256_sub_pd(s, a);
    e = _mm256_add_pd(_mm256_sub_pd(a, _mm256_sub_pd(s, bb)), _mm256_sub_pd(b, bb));
}

inline void quick_two_sum_v(__m256d a, __m256d b, __m256d& s, __m256d& e) {
    s = _mm256_add_pd(a, b);
    e = _mm256_sub_pd(b, _mm256_sub_pd(s, a));
}

inline void two_prod_v(__m256d a, __m256d b, __m256d& p, __m256d& e) {
    p = _mm256_mul_pd(a, b);
    e = _mm256_fmsub_pd(a, b, p);
}

inline V add(const V& a, const V& b) {
    __m256d s1, s2, t1, t2;
    two_sum_v(a.hi, b.hi, s1, s2);
    two_sum_v(a.lo, b.lo, t1, t2);
    s2 = _mm256_add_pd(s2, t1);
    quick_two_sum_v(s1, s2, s1, s2);
    s2 = _mm256_add_pd(s2, t2);
    quick_two_sum_v(s1, s2, s1, s2);
    return {s1, s2};
}

inline V sub(const V& a, const V& b) {
    const __m256d zero = _mm256_setzero_pd();
    return add(a, V{_mm256_sub_pd(zero, b.hi), _mm256_sub_pd(zero, b.lo)});
}

inline V mul(const V& a, const V& b) {
    __m256d p1, p2;
    two_prod_v(a.hi, b.hi, p1, p2);
    p2 = _mm256_add_pd(p2, _mm256_add_pd(_mm256_mul_pd(a.hi, b.lo), _mm256_mul_pd(a.lo, b.hi)));
    quick_two_sum_v(p1, p2, p1, p2);
    return {p1, p2};
}

inline DDReal reduce(const V& acc) {
    alignas(32) double h[4], l[4];
    _mm256_store_pd(h, acc.hi);
    _mm256_store_pd(l, acc.lo);
    DDReal r{};
    for (int i = 0; i < 4; ++i) r = dd_add(r, DDReal{h[i], l[i]});
    return r;
}

inline V load(const double* h, const double* l, std::size_t i) {
    return {_mm256_loadu_pd(h + i), _mm256_loadu_pd(l + i)};
}

inline void store(double* h, double* l, std::size_t i, const V& v) {
    _mm256_storeu_pd(h + i, v.hi);
    _mm256_storeu_pd(l + i, v.lo);
}

} // namespace

DDReal dot_dd(const double* xh, const double* xl,
              const double* yh, const double* yl, std::size_t n) {
    V acc{_mm256_setzero_pd(), _mm256_setzero_pd()};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = add(acc, mul(load(xh, xl, i), load(yh, yl, i)));
    DDReal r = reduce(acc);
    for (; i < n; ++i)
        r = dd_add(r, dd_mul(DDReal{xh[i], xl[i]}, DDReal{yh[i], yl[i]}));
    return r;
}

DDReal dot_double_dd(const double* x, const double* y, std::size_t n) {
    V acc{_mm256_setzero_pd(), _mm256_setzero_pd()};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d p, e;
        two_prod_v(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), p, e);
        acc = add(acc, V{p, e});
    }
    DDReal r = reduce(acc);
    for (; i < n; ++i) {
        double p, e;
        eft::two_prod(x[i], y[i], p, e);
        r = dd_add(r, DDReal{p, e});
    }
    return r;
}

void rot_dd(double* xh, double* xl, double* yh, double* yl,
            std::size_t n, const DDReal& c, const DDReal& s) {
    const V vc{_mm256_set1_pd(c.hi), _mm256_set1_pd(c.lo)};
    const V vs{_mm256_set1_pd(s.hi), _mm256_set1_pd(s.lo)};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const V xi = load(xh, xl, i);
        const V yi = load(yh, yl, i);
        store(xh, xl, i, sub(mul(vc, xi), mul(vs, yi)));
        store(yh, yl, i, add(mul(vs, xi), mul(vc, yi)));
    }
    for (; i < n; ++i) {
        const DDReal xi{xh[i], xl[i]};
        const DDReal yi{yh[i], yl[i]};
        const DDReal nx = dd_sub(dd_mul(c, xi), dd_mul(s, yi));
        const DDReal ny = dd_add(dd_mul(s, xi), dd_mul(c, yi));
        xh[i] = nx.hi; xl[i] = nx.lo;
        yh[i] = ny.hi; yl[i] = ny.lo;
    }
}

void axpy_dd(double* yh, double* yl, const double* xh, const double* xl,
             std::size_t n, const DDReal& a) {
    const V va{_mm256_set1_pd(a.hi), _mm256_set1_pd(a.lo)};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        store(yh, yl, i, sub(load(yh, yl, i), mul(va, load(xh, xl, i))));
    for (; i < n; ++i) {
        const DDReal r = dd_sub(DDReal{yh[i], yl[i]}, dd_mul(a, DDReal{xh[i], xl[i]}));
        yh[i] = r.hi; yl[i] = r.lo;
    }
}

} // namespace fna::kernels::avx2

#endif
