#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

// Double-double scalar type: an unevaluated, non-overlapping sum hi + lo
// giving roughly 106 bits of mantissa (relative error <= 2^-104 per
// operation). Algorithms follow Dekker (1971), Knuth TAOCP vol. 2 and the
// QD library of Hida, Li and Bailey.

namespace fna {

namespace eft {

// |a| >= |b| assumed.
inline void quick_two_sum(double a, double b, double& s, double& e) {
    s = a + b;
    e = b - (s - a);
}

inline void two_sum(double a, double b, double& s, double& e) {
    s = a + b;
    const double bb = s - a;
    e = (a - (s - bb)) + (b - bb);
}

inline void two_prod(double a, double b, double& p, double& e) {
    p = a * b;
    e = std::fma(a, b, -p);
}

} // namespace eft

struct DDReal {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DDReal() = default;
    constexpr DDReal(double h) : hi(h), lo(0.0) {}
    constexpr DDReal(double h, double l) : hi(h), lo(l) {}

    double to_double() const { return hi + lo; }
    explicit operator double() const { return to_double(); }

    bool is_finite() const { return std::isfinite(hi) && std::isfinite(lo); }
};

// Relative rounding unit of one dd operation.
inline constexpr double kDdEps = 4.93038065763132e-32; // 2^-104

inline DDReal dd_add(const DDReal& a, const DDReal& b) {
    double s1, s2, t1, t2;
    eft::two_sum(a.hi, b.hi, s1, s2);
    eft::two_sum(a.lo, b.lo, t1, t2);
    s2 += t1;
    eft::quick_two_sum(s1, s2, s1, s2);
    s2 += t2;
    eft::quick_two_sum(s1, s2, s1, s2);
    return {s1, s2};
}

inline DDReal dd_neg(const DDReal& a) { return {-a.hi, -a.lo}; }

inline DDReal dd_sub(const DDReal& a, const DDReal& b) { return dd_add(a, dd_neg(b)); }

inline DDReal dd_mul(const DDReal& a, const DDReal& b) {
    double p1, p2;
    eft::two_prod(a.hi, b.hi, p1, p2);
    p2 += a.hi * b.lo + a.lo * b.hi;
    eft::quick_two_sum(p1, p2, p1, p2);
    return {p1, p2};
}

inline DDReal dd_mul(const DDReal& a, double b) {
    double p1, p2;
    eft::two_prod(a.hi, b, p1, p2);
    p2 += a.lo * b;
    eft::quick_two_sum(p1, p2, p1, p2);
    return {p1, p2};
}

inline DDReal dd_div(const DDReal& a, const DDReal& b) {
    if (b.hi == 0.0) throw std::domain_error("DDReal: division by zero");
    const double q1 = a.hi / b.hi;
    DDReal r = dd_sub(a, dd_mul(b, q1));
    const double q2 = r.hi / b.hi;
    r = dd_sub(r, dd_mul(b, q2));
    const double q3 = r.hi / b.hi;
    double s1, s2;
    eft::quick_two_sum(q1, q2, s1, s2);
    return dd_add(DDReal{s1, s2}, DDReal{q3});
}

inline DDReal dd_sqrt(const DDReal& a) {
    if (a.hi == 0.0 && a.lo == 0.0) return {};
    if (a.hi < 0.0) throw std::domain_error("DDReal: sqrt of negative value");
    // Karp's method: one Newton step on a double seed, all in dd residuals.
    const double x = 1.0 / std::sqrt(a.hi);
    const double ax = a.hi * x;
    const DDReal r = dd_sub(a, dd_mul(DDReal{ax}, ax));
    double s1, s2;
    eft::quick_two_sum(ax, r.hi * (x * 0.5), s1, s2);
    return {s1, s2};
}

inline DDReal operator+(const DDReal& a, const DDReal& b) { return dd_add(a, b); }
inline DDReal operator-(const DDReal& a, const DDReal& b) { return dd_sub(a, b); }
inline DDReal operator*(const DDReal& a, const DDReal& b) { return dd_mul(a, b); }
inline DDReal operator/(const DDReal& a, const DDReal& b) { return dd_div(a, b); }
inline DDReal operator-(const DDReal& a) { return dd_neg(a); }
inline DDReal& operator+=(DDReal& a, const DDReal& b) { a = a + b; return a; }
inline DDReal& operator-=(DDReal& a, const DDReal& b) { a = a - b; return a; }
inline DDReal& operator*=(DDReal& a, const DDReal& b) { a = a * b; return a; }
inline DDReal& operator/=(DDReal& a, const DDReal& b) { a = a / b; return a; }

inline bool operator<(const DDReal& a, const DDReal& b) {
    return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(const DDReal& a, const DDReal& b) { return b < a; }
inline bool operator<=(const DDReal& a, const DDReal& b) { return !(b < a); }
inline bool operator>=(const DDReal& a, const DDReal& b) { return !(a < b); }
inline bool operator==(const DDReal& a, const DDReal& b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(const DDReal& a, const DDReal& b) { return !(a == b); }

inline DDReal dd_abs(const DDReal& a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? dd_neg(a) : a; }

inline const DDReal kDdPi{3.141592653589793116e+00, 1.224646799147353207e-16};

namespace detail {

inline constexpr int kSinTerms = 17; // |w| <= pi/4 needs powers through w^35

inline const DDReal* inv_factorials() {
    static DDReal table[2 * kSinTerms + 2];
    static const bool built = [] {
        DDReal f{1.0};
        table[0] = DDReal{1.0};
        for (int i = 1; i < 2 * kSinTerms + 2; ++i) {
            f = dd_mul(f, static_cast<double>(i));
            table[i] = dd_div(DDReal{1.0}, f);
        }
        return true;
    }();
    (void)built;
    return table;
}

// sin(pi*z) and cos(pi*z) for |z| <= 1/4 by Taylor series in w = pi*z.
inline void sincospi_taylor(const DDReal& z, DDReal& s, DDReal& c) {
    const DDReal* inv_fact = inv_factorials();
    const DDReal w = dd_mul(kDdPi, z);
    const DDReal w2 = dd_mul(w, w);
    DDReal sin_sum{0.0};
    DDReal cos_sum{0.0};
    for (int k = kSinTerms; k >= 0; --k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        sin_sum = dd_add(dd_mul(sin_sum, w2), dd_mul(inv_fact[2 * k + 1], sign));
        cos_sum = dd_add(dd_mul(cos_sum, w2), dd_mul(inv_fact[2 * k], sign));
    }
    s = dd_mul(sin_sum, w);
    c = cos_sum;
}

} // namespace detail

// sin(pi*y) and cos(pi*y) for dd y. Quadrant reduction is performed on y
// itself (an exact operation), so no large-argument pi reduction is needed.
inline void dd_sincospi(const DDReal& y, DDReal& s, DDReal& c) {
    // Reduce modulo 2: r = y - 2*round(y/2), r in [-1, 1].
    const double k = std::nearbyint(y.hi / 2.0) * 2.0;
    DDReal r = dd_sub(y, DDReal{k});
    // Reduce to octant center: q in {-4,...,4}, z = r - q/2 in [-1/4, 1/4].
    const double q = std::nearbyint(r.hi * 2.0);
    const DDReal z = dd_sub(r, DDReal{q * 0.5});
    DDReal sz, cz;
    detail::sincospi_taylor(z, sz, cz);
    const int qi = static_cast<int>(q);
    switch (((qi % 4) + 4) % 4) {
        case 0: s = sz; c = cz; break;
        case 1: s = cz; c = dd_neg(sz); break;
        case 2: s = dd_neg(sz); c = dd_neg(cz); break;
        default: s = dd_neg(cz); c = sz; break;
    }
}

inline DDReal dd_sinpi(const DDReal& y) {
    DDReal s, c;
    dd_sincospi(y, s, c);
    return s;
}

inline DDReal dd_cospi(const DDReal& y) {
    DDReal s, c;
    dd_sincospi(y, s, c);
    return c;
}

} // namespace fna
