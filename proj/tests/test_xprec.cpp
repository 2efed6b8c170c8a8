#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>

#include "fna/kernels.hpp"
#include "fna/xprec.hpp"

using namespace fna;

namespace {

double dd_rel_err(const DDReal& got, const DDReal& want) {
    const DDReal diff = dd_sub(got, want);
    const double scale = std::max(std::abs(want.to_double()), 1e-300);
    return std::abs(diff.to_double()) / scale;
}

// Exact rational arithmetic, only as an oracle for small matrices.
struct Rat {
    long long num = 0, den = 1;
    Rat() = default;
    Rat(long long n, long long d = 1) : num(n), den(d) { reduce(); }
    void reduce() {
        if (den < 0) { num = -num; den = -den; }
        const long long g = std::gcd(std::abs(num), den);
        if (g > 1) { num /= g; den /= g; }
    }
};
Rat operator+(Rat a, Rat b) { return Rat(a.num * b.den + b.num * a.den, a.den * b.den); }
Rat operator-(Rat a, Rat b) { return Rat(a.num * b.den - b.num * a.den, a.den * b.den); }
Rat operator*(Rat a, Rat b) { return Rat(a.num * b.num, a.den * b.den); }
Rat operator/(Rat a, long long k) { return Rat(a.num, a.den * k); }

// Characteristic polynomial coefficients by Faddeev-LeVerrier:
// p(x) = x^4 - c1 x^3 + ... with exact rationals.
std::array<Rat, 5> charpoly4(const std::array<std::array<Rat, 4>, 4>& h) {
    auto matmul = [](const auto& a, const auto& b) {
        std::array<std::array<Rat, 4>, 4> c{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 4; ++k) c[i][j] = c[i][j] + a[i][k] * b[k][j];
        return c;
    };
    std::array<Rat, 5> coef{}; // p(x) = x^4 + coef[3] x^3 + ... + coef[0]
    coef[4] = Rat(1);
    auto m = h;
    Rat c = Rat(0);
    for (int k = 1; k <= 4; ++k) {
        if (k > 1) {
            auto mk = m;
            for (int i = 0; i < 4; ++i) mk[i][i] = mk[i][i] + coef[5 - k];
            m = matmul(h, mk);
        }
        Rat tr = Rat(0);
        for (int i = 0; i < 4; ++i) tr = tr + m[i][i];
        c = Rat(0) - tr / k;
        coef[4 - k] = c;
    }
    return coef;
}

DDReal eval_poly(const std::array<Rat, 5>& c, const DDReal& x) {
    DDReal acc{};
    for (int k = 4; k >= 0; --k) {
        acc = dd_mul(acc, x);
        acc = dd_add(acc, dd_div(DDReal{double(c[k].num)}, DDReal{double(c[k].den)}));
    }
    return acc;
}

} // namespace

TEST_CASE("eft basics capture the low word") {
    const DDReal a = dd_add(DDReal{1e16}, DDReal{1.0});
    const DDReal b = dd_sub(a, DDReal{1e16});
    CHECK(b.to_double() == 1.0);

    const DDReal r = dd_sqrt(DDReal{4.0});
    CHECK(r.hi == 2.0);
    CHECK(r.lo == 0.0);
}

TEST_CASE("repeated 0.1 accumulation vs rational oracle") {
    DDReal acc{};
    const DDReal tenth = dd_div(DDReal{1.0}, DDReal{10.0});
    for (int i = 0; i < 10000; ++i) acc = dd_add(acc, tenth);
    CHECK(dd_rel_err(acc, DDReal{1000.0}) < 1e-28);
}

TEST_CASE("division and sqrt accuracy") {
    // (a/b)*b == a to dd precision
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int i = 0; i < 200; ++i) {
        const DDReal a{u(rng), 0.0};
        const DDReal b{u(rng), 0.0};
        CHECK(dd_rel_err(dd_mul(dd_div(a, b), b), a) < 5e-31);
        const DDReal s = dd_sqrt(a);
        CHECK(dd_rel_err(dd_mul(s, s), a) < 5e-31);
    }
    CHECK_THROWS_AS((void)dd_div(DDReal{1.0}, DDReal{0.0}), std::domain_error);
    CHECK_THROWS_AS((void)dd_sqrt(DDReal{-1.0}), std::domain_error);
}

TEST_CASE("sinpi / cospi against closed forms") {
    // sin(pi/6) = 1/2 exactly
    const DDReal s6 = dd_sinpi(DDReal{1.0} / DDReal{6.0});
    CHECK(dd_rel_err(s6, DDReal{0.5}) < 1e-30);
    // cos(pi/3) = 1/2
    const DDReal c3 = dd_cospi(DDReal{1.0} / DDReal{3.0});
    CHECK(dd_rel_err(c3, DDReal{0.5}) < 1e-30);
    // sin(pi/4) = sqrt(1/2)
    const DDReal s4 = dd_sinpi(DDReal{0.25});
    CHECK(dd_rel_err(s4, dd_sqrt(DDReal{0.5})) < 1e-30);
    // sin^2 + cos^2 = 1 at scattered arguments, including large ones
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-500.0, 500.0);
    for (int i = 0; i < 500; ++i) {
        const DDReal y{u(rng), 0.0};
        DDReal s, c;
        dd_sincospi(y, s, c);
        CHECK(std::abs(dd_add(dd_mul(s, s), dd_mul(c, c)).to_double() - 1.0) < 1e-30);
        CHECK(std::abs(s.to_double() - std::sin(3.14159265358979323846 * y.hi)) < 1e-12);
    }
}

TEST_CASE("kernel backends agree") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t n = 103;
    DDVector x(n), y(n);
    std::vector<double> dx(n), dy(n);
    for (std::size_t i = 0; i < n; ++i) {
        x.set(i, dd_mul(DDReal{u(rng)}, DDReal{1.0, u(rng) * 1e-17}));
        y.set(i, dd_mul(DDReal{u(rng)}, DDReal{1.0, u(rng) * 1e-17}));
        dx[i] = u(rng);
        dy[i] = u(rng);
    }
    const DDReal c{0.8, 1e-17}, s{0.6, -2e-17};

    kernels::force(kernels::Backend::scalar);
    const DDReal dot_s = kernels::dot_dd(x.hi.data(), x.lo.data(), y.hi.data(), y.lo.data(), n);
    const DDReal dotd_s = kernels::dot_double_dd(dx.data(), dy.data(), n);
    DDVector xs = x, ys = y;
    kernels::rot_dd(xs.hi.data(), xs.lo.data(), ys.hi.data(), ys.lo.data(), n, c, s);
    DDVector as = y;
    kernels::axpy_dd(as.hi.data(), as.lo.data(), x.hi.data(), x.lo.data(), n, c);

    if (!kernels::cpu_has_avx2()) return;
    kernels::force(kernels::Backend::avx2);
    const DDReal dot_v = kernels::dot_dd(x.hi.data(), x.lo.data(), y.hi.data(), y.lo.data(), n);
    const DDReal dotd_v = kernels::dot_double_dd(dx.data(), dy.data(), n);
    DDVector xv = x, yv = y;
    kernels::rot_dd(xv.hi.data(), xv.lo.data(), yv.hi.data(), yv.lo.data(), n, c, s);
    DDVector av = y;
    kernels::axpy_dd(av.hi.data(), av.lo.data(), x.hi.data(), x.lo.data(), n, c);
    kernels::force(kernels::Backend::scalar);

    CHECK(dd_rel_err(dot_v, dot_s) < 1e-29);
    CHECK(dd_rel_err(dotd_v, dotd_s) < 1e-29);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(dd_sub(xv.get(i), xs.get(i)).to_double()) < 1e-29);
        CHECK(std::abs(dd_sub(yv.get(i), ys.get(i)).to_double()) < 1e-29);
        CHECK(std::abs(dd_sub(av.get(i), as.get(i)).to_double()) < 1e-29);
    }
    kernels::force(kernels::cpu_has_avx2() ? kernels::Backend::avx2 : kernels::Backend::scalar);
}

TEST_CASE("dd_sym_eig: diagonal with tiny entry") {
    DDMatrix s(3, 3);
    s.set(0, 0, DDReal{1.0});
    s.set(1, 1, DDReal{1e-25});
    s.set(2, 2, DDReal{3.0});
    const auto r = dd_sym_eig(s);
    CHECK(r.values.get(0).to_double() == doctest::Approx(1e-25).epsilon(1e-12));
    CHECK(r.values.get(1).to_double() == doctest::Approx(1.0));
    CHECK(r.values.get(2).to_double() == doctest::Approx(3.0));
}

TEST_CASE("dd_sym_eig: Hilbert 4x4 lambda_min vs exact characteristic polynomial") {
    std::array<std::array<Rat, 4>, 4> h{};
    DDMatrix hd(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            h[i][j] = Rat(1, i + j + 1);
            hd.set(i, j, dd_div(DDReal{1.0}, DDReal{double(i + j + 1)}));
        }
    const auto coef = charpoly4(h);
    // Bisect the characteristic polynomial for its smallest root.
    DDReal lo{1e-6}, hi{1e-3};
    REQUIRE(eval_poly(coef, lo).to_double() * eval_poly(coef, hi).to_double() < 0.0);
    for (int it = 0; it < 200; ++it) {
        const DDReal mid = dd_mul(dd_add(lo, hi), 0.5);
        if (eval_poly(coef, mid).to_double() * eval_poly(coef, lo).to_double() <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    const DDReal oracle = dd_mul(dd_add(lo, hi), 0.5);
    CHECK(oracle.to_double() == doctest::Approx(9.6702304022603313e-5).epsilon(1e-12));

    const auto eig = dd_sym_eig(hd);
    CHECK(dd_rel_err(eig.values.get(0), oracle) < 1e-26);
}

TEST_CASE("dd_sym_eig: eigenvalue sum equals trace, vectors reconstruct") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t n = 12;
    DDMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const DDReal v{u(rng), 0.0};
            a.set(i, j, v);
            a.set(j, i, v);
        }
    const auto r = dd_sym_eig(a, true);
    DDReal sum{};
    for (std::size_t i = 0; i < n; ++i) sum = dd_add(sum, r.values.get(i));
    const double norm = dd_frobenius(a).to_double();
    CHECK(std::abs(dd_sub(sum, dd_trace(a)).to_double()) < 1e-27 * norm);

    // residual || A v - lambda v || per pair
    for (std::size_t i = 0; i < n; ++i) {
        double resid = 0.0;
        for (std::size_t row = 0; row < n; ++row) {
            DDReal av{};
            for (std::size_t k = 0; k < n; ++k)
                av = dd_add(av, dd_mul(a.get(row, k), r.vectors_t.get(i, k)));
            const DDReal diff = dd_sub(av, dd_mul(r.values.get(i), r.vectors_t.get(i, row)));
            resid += std::abs(diff.to_double());
        }
        CHECK(resid < 1e-28 * norm);
    }
}

TEST_CASE("dd_cholesky_solve: spec examples") {
    DDMatrix eye(3, 3);
    for (int i = 0; i < 3; ++i) eye.set(i, i, DDReal{1.0});
    DDVector e1(3);
    e1.set(0, DDReal{1.0});
    const DDVector x = dd_cholesky_solve(eye, DDReal{}, e1);
    CHECK(x.get(0).to_double() == 1.0);
    CHECK(x.get(1).to_double() == 0.0);

    DDMatrix d(2, 2);
    d.set(0, 0, DDReal{1e-31});
    d.set(1, 1, DDReal{1.0});
    DDVector ones(2);
    ones.set(0, DDReal{1.0});
    ones.set(1, DDReal{1.0});
    const DDVector y = dd_cholesky_solve(d, DDReal{1e-30}, ones);
    CHECK(dd_rel_err(y.get(0), dd_div(DDReal{1.0}, dd_add(DDReal{1e-31}, DDReal{1e-30}))) < 1e-25);
    CHECK(dd_rel_err(y.get(1), dd_div(DDReal{1.0}, dd_add(DDReal{1.0}, DDReal{1e-30}))) < 1e-30);
}

TEST_CASE("dd_cholesky_solve: random SPD vs dd Gauss-Jordan oracle") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t n = 10;
    DDMatrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b.set(i, j, DDReal{u(rng)});
    // SPD: A = B B^T + I
    DDMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            DDReal v = kernels::dot_dd(b.row_hi(i), b.row_lo(i), b.row_hi(j), b.row_lo(j), n);
            if (i == j) v = dd_add(v, DDReal{1.0});
            a.set(i, j, v);
        }
    DDVector rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs.set(i, DDReal{u(rng)});

    // Gauss-Jordan with partial pivoting in dd (test-only oracle)
    DDMatrix aug = a;
    DDVector sol = rhs;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r2 = col + 1; r2 < n; ++r2)
            if (std::abs(aug.get(r2, col).to_double()) > std::abs(aug.get(piv, col).to_double()))
                piv = r2;
        if (piv != col) {
            for (std::size_t k = 0; k < n; ++k) {
                const DDReal tmp = aug.get(col, k);
                aug.set(col, k, aug.get(piv, k));
                aug.set(piv, k, tmp);
            }
            const DDReal tmp = sol.get(col);
            sol.set(col, sol.get(piv));
            sol.set(piv, tmp);
        }
        const DDReal d = aug.get(col, col);
        for (std::size_t r2 = 0; r2 < n; ++r2) {
            if (r2 == col) continue;
            const DDReal f = dd_div(aug.get(r2, col), d);
            for (std::size_t k = col; k < n; ++k)
                aug.set(r2, k, dd_sub(aug.get(r2, k), dd_mul(f, aug.get(col, k))));
            sol.set(r2, dd_sub(sol.get(r2), dd_mul(f, sol.get(col))));
        }
    }
    for (std::size_t i = 0; i < n; ++i) sol.set(i, dd_div(sol.get(i), aug.get(i, i)));

    const DDVector x = dd_cholesky_solve(a, DDReal{}, rhs);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(dd_sub(x.get(i), sol.get(i)).to_double()) <
              1e-24 * std::max(1.0, std::abs(sol.get(i).to_double())));
}

TEST_CASE("dd_cholesky reports nonpositive pivots") {
    DDMatrix a(2, 2);
    a.set(0, 0, DDReal{1.0});
    a.set(0, 1, DDReal{2.0});
    a.set(1, 0, DDReal{2.0});
    a.set(1, 1, DDReal{1.0});
    CHECK_THROWS_AS((void)dd_cholesky(a, DDReal{}), NotPositiveDefiniteError);
    try {
        (void)dd_cholesky(a, DDReal{});
    } catch (const NotPositiveDefiniteError& e) {
        CHECK(e.pivot_index == 1);
        CHECK(e.pivot_value < 0.0);
    }
}

TEST_CASE("dd_gen_sym_eig: diagonal pencils") {
    DDMatrix a(2, 2), b(2, 2);
    a.set(0, 0, DDReal{1.0});
    a.set(1, 1, DDReal{4.0});
    b.set(0, 0, DDReal{1.0});
    b.set(1, 1, DDReal{2.0});
    const DDVector v = dd_gen_sym_eig(a, b, DDReal{});
    CHECK(v.get(0).to_double() == doctest::Approx(1.0));
    CHECK(v.get(1).to_double() == doctest::Approx(2.0));
}

TEST_CASE("realified Hermitian matrix doubles the spectrum") {
    // G = [[2, i], [-i, 2]] has eigenvalues 1 and 3
    DDMatrix re(2, 2), im(2, 2);
    re.set(0, 0, DDReal{2.0});
    re.set(1, 1, DDReal{2.0});
    im.set(0, 1, DDReal{1.0});
    im.set(1, 0, DDReal{-1.0});
    const DDMatrix r = dd_realify(re, im);
    const auto eig = dd_sym_eig(r);
    CHECK(eig.values.get(0).to_double() == doctest::Approx(1.0));
    CHECK(eig.values.get(1).to_double() == doctest::Approx(1.0));
    CHECK(eig.values.get(2).to_double() == doctest::Approx(3.0));
    CHECK(eig.values.get(3).to_double() == doctest::Approx(3.0));
}

TEST_CASE("double round-trips through DDReal") {
    for (double v : {0.1, -3.7e100, 5e-300, 0.0, 1.0}) {
        const DDReal d{v};
        CHECK(d.to_double() == v);
    }
}
