#include "fna/kernels.hpp"

namespace fna::kernels {

namespace scalar {
DDReal dot_dd(const double*, const double*, const double*, const double*, std::size_t);
DDReal dot_double_dd(const double*, const double*, std::size_t);
void rot_dd(double*, double*, double*, double*, std::size_t, const DDReal&, const DDReal&);
void axpy_dd(double*, double*, const double*, const double*, std::size_t, const DDReal&);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
DDReal dot_dd(const double*, const double*, const double*, const double*, std::size_t);
DDReal dot_double_dd(const double*, const double*, std::size_t);
void rot_dd(double*, double*, double*, double*, std::size_t, const DDReal&, const DDReal&);
void axpy_dd(double*, double*, const double*, const double*, std::size_t, const DDReal&);
} // namespace avx2
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {
Backend g_backend = cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

Backend active() { return g_backend; }

void force(Backend b) {
    if (b == Backend::avx2 && !cpu_has_avx2()) return;
    g_backend = b;
}

std::string backend_name() { return g_backend == Backend::avx2 ? "avx2" : "scalar"; }

DDReal dot_dd(const double* xh, const double* xl,
              const double* yh, const double* yl, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
    if (g_backend == Backend::avx2) return avx2::dot_dd(xh, xl, yh, yl, n);
#endif
    return scalar::dot_dd(xh, xl, yh, yl, n);
}

DDReal dot_double_dd(const double* x, const double* y, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
    if (g_backend == Backend::avx2) return avx2::dot_double_dd(x, y, n);
#endif
    return scalar::dot_double_dd(x, y, n);
}

void rot_dd(double* xh, double* xl, double* yh, double* yl,
            std::size_t n, const DDReal& c, const DDReal& s) {
#if defined(__x86_64__) || defined(_M_X64)
    if (g_backend == Backend::avx2) { avx2::rot_dd(xh, xl, yh, yl, n, c, s); return; }
#endif
    scalar::rot_dd(xh, xl, yh, yl, n, c, s);
}

void axpy_dd(double* yh, double* yl, const double* xh, const double* xl,
             std::size_t n, const DDReal& a) {
#if defined(__x86_64__) || defined(_M_X64)
    if (g_backend == Backend::avx2) { avx2::axpy_dd(yh, yl, xh, xl, n, a); return; }
#endif
    scalar::axpy_dd(yh, yl, xh, xl, n, a);
}

} // namespace fna::kernels
