#include "fna/kernels.hpp"

namespace fna::kernels::scalar {

DDReal dot_dd(const double* xh, const double* xl,
              const double* yh, const double* yl, std::size_t n) {
    DDReal acc{};
    for (std::size_t i = 0; i < n; ++i)
        acc = dd_add(acc, dd_mul(DDReal{xh[i], xl[i]}, DDReal{yh[i], yl[i]}));
    return acc;
}

DDReal dot_double_dd(const double* x, const double* y, std::size_t n) {
    DDReal acc{};
    for (std::size_t i = 0; i < n; ++i) {
        double p, e;
        eft::two_prod(x[i], y[i], p, e);
        acc = dd_add(acc, DDReal{p, e});
    }
    return acc;
}

void rot_dd(double* xh, double* xl, double* yh, double* yl,
            std::size_t n, const DDReal& c, const DDReal& s) {
    for (std::size_t i = 0; i < n; ++i) {
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
    for (std::size_t i = 0; i < n; ++i) {
        const DDReal r = dd_sub(DDReal{yh[i], yl[i]}, dd_mul(a, DDReal{xh[i], xl[i]}));
        yh[i] = r.hi; yl[i] = r.lo;
    }
}

} // namespace fna::kernels::scalar
