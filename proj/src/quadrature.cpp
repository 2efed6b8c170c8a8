#include "fna/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "fna/kernels.hpp"

namespace fna {

namespace {

constexpr double kPi = 3.14159265358979323846;

// P_n(x) and P_n'(x) by the three-term recurrence.
void legendre_pair(std::size_t n, double x, double& p, double& dp) {
    double pkm1 = 1.0, pk = x;
    if (n == 0) { p = 1.0; dp = 0.0; return; }
    for (std::size_t k = 1; k < n; ++k) {
        const double pkp1 = ((2.0 * k + 1.0) * x * pk - k * pkm1) / (k + 1.0);
        pkm1 = pk;
        pk = pkp1;
    }
    p = pk;
    dp = n * (x * pk - pkm1) / (x * x - 1.0);
}

void legendre_pair_dd(std::size_t n, const DDReal& x, DDReal& p, DDReal& dp) {
    DDReal pkm1{1.0}, pk = x;
    if (n == 0) { p = DDReal{1.0}; dp = DDReal{}; return; }
    for (std::size_t k = 1; k < n; ++k) {
        const DDReal pkp1 =
            dd_div(dd_sub(dd_mul(dd_mul(DDReal{2.0 * k + 1.0}, x), pk),
                          dd_mul(DDReal{double(k)}, pkm1)),
                   DDReal{double(k + 1)});
        pkm1 = pk;
        pk = pkp1;
    }
    p = pk;
    dp = dd_div(dd_mul(DDReal{double(n)}, dd_sub(dd_mul(x, pk), pkm1)),
                dd_sub(dd_mul(x, x), DDReal{1.0}));
}

} // namespace

QuadRule gauss_legendre(std::size_t n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
    QuadRule r;
    r.nodes.assign(n, 0.0);
    r.weights.assign(n, 0.0);
    r.exactness = 2 * n - 1;
    const std::size_t half = (n + 1) / 2;
    for (std::size_t k = 0; k < half; ++k) {
        // Tricomi-style initial guess for the (k+1)-th root in (0, 1]
        double x = std::cos(kPi * (k + 0.75) / (n + 0.5));
        double p, dp;
        for (int it = 0; it < 100; ++it) {
            legendre_pair(n, x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        legendre_pair(n, x, p, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // roots were generated descending from +1; store ascending
        r.nodes[n - 1 - k] = x;
        r.nodes[k] = -x;
        r.weights[n - 1 - k] = w;
        r.weights[k] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

DDQuadRule gauss_legendre_dd(std::size_t n) {
    const QuadRule seed = gauss_legendre(n);
    DDQuadRule r;
    r.nodes = DDVector(n);
    r.weights = DDVector(n);
    for (std::size_t k = 0; k < n; ++k) {
        DDReal x{seed.nodes[k]};
        DDReal p, dp;
        for (int it = 0; it < 3; ++it) {
            legendre_pair_dd(n, x, p, dp);
            x = dd_sub(x, dd_div(p, dp));
        }
        legendre_pair_dd(n, x, p, dp);
        if (std::abs(p.to_double()) > 1e-26 * std::abs(dp.to_double()))
            throw std::runtime_error("gauss_legendre_dd: Newton refinement did not converge");
        const DDReal omx2 = dd_sub(DDReal{1.0}, dd_mul(x, x));
        r.nodes.set(k, x);
        r.weights.set(k, dd_div(DDReal{2.0}, dd_mul(omx2, dd_mul(dp, dp))));
    }
    return r;
}

QuadRule scaled_rule(const QuadRule& r, double lo, double hi) {
    QuadRule s = r;
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        s.nodes[i] = c + h * r.nodes[i];
        s.weights[i] = h * r.weights[i];
    }
    return s;
}

namespace {

template <typename MatT, typename Scalar, typename Eval>
MatT gram_generic(const Dictionary& dict, const std::vector<double>& nodes,
                  const std::vector<double>& weights, GramConvention conv, Eval eval) {
    const std::size_t n = dict.count, q = nodes.size();
    // rows of p are the sampled functions
    MatT p(n, q);
    std::vector<double> wq(q);
    for (std::size_t j = 0; j < q; ++j) {
        const double rho = conv == GramConvention::probability ? dict.rho_density(nodes[j]) : 1.0;
        wq[j] = weights[j] * rho;
        for (std::size_t i = 0; i < n; ++i) p(i, j) = eval(i, nodes[j]);
    }
    MatT g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Scalar s{};
            for (std::size_t k = 0; k < q; ++k) s += wq[k] * conj_of(p(i, k)) * p(j, k);
            g(i, j) = s;
            g(j, i) = conj_of(s);
        }
    return g;
}

} // namespace

Matrix gram_continuous(const Dictionary& dict, const QuadRule& rule, GramConvention conv) {
    if (dict.is_complex)
        throw std::invalid_argument("gram_continuous: complex dictionary, use gram_continuous_c");
    const QuadRule r = scaled_rule(rule, dict.lo, dict.hi);
    return gram_generic<Matrix, double>(
        dict, r.nodes, r.weights, conv,
        [&dict](std::size_t i, double x) { return dict.eval(i, x).real(); });
}

CMatrix gram_continuous_c(const Dictionary& dict, const QuadRule& rule, GramConvention conv) {
    const QuadRule r = scaled_rule(rule, dict.lo, dict.hi);
    return gram_generic<CMatrix, std::complex<double>>(
        dict, r.nodes, r.weights, conv,
        [&dict](std::size_t i, double x) { return dict.eval(i, x); });
}

DDMatrix gram_continuous_dd(const Dictionary& dict, const DDQuadRule& rule, GramConvention conv) {
    const std::size_t n = dict.count, q = rule.nodes.size();
    const DDReal c = dd_mul(dd_add(DDReal{dict.lo}, DDReal{dict.hi}), 0.5);
    const DDReal h = dd_mul(dd_sub(DDReal{dict.hi}, DDReal{dict.lo}), 0.5);

    // sampled functions, rows contiguous for the dd dot kernels
    DDMatrix pre(n, q), pim(n, q);
    DDVector wq(q);
    bool any_imag = false;
    for (std::size_t j = 0; j < q; ++j) {
        const DDReal x = dd_add(c, dd_mul(h, rule.nodes.get(j)));
        const double rho =
            conv == GramConvention::probability ? dict.rho_density(x.to_double()) : 1.0;
        wq.set(j, dd_mul(dd_mul(h, rule.weights.get(j)), rho));
        for (std::size_t i = 0; i < n; ++i) {
            const DDComplex v = dict.eval_dd(i, x);
            pre.set(i, j, v.re);
            pim.set(i, j, v.im);
            any_imag |= v.im.to_double() != 0.0;
        }
    }
    // fold the weights into one factor (split as sqrt would lose signs; the
    // weights are positive so a sqrt split is safe)
    DDVector swq(q);
    for (std::size_t j = 0; j < q; ++j) swq.set(j, dd_sqrt(wq.get(j)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < q; ++j) {
            pre.set(i, j, dd_mul(pre.get(i, j), swq.get(j)));
            if (any_imag) pim.set(i, j, dd_mul(pim.get(i, j), swq.get(j)));
        }

    DDMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            DDReal s = kernels::dot_dd(pre.row_hi(i), pre.row_lo(i), pre.row_hi(j),
                                       pre.row_lo(j), q);
            if (any_imag)
                s = dd_add(s, kernels::dot_dd(pim.row_hi(i), pim.row_lo(i), pim.row_hi(j),
                                              pim.row_lo(j), q));
            g.set(i, j, s);
            g.set(j, i, s);
        }
    // For complex dictionaries this is the real part; the continuous Grams of
    // the trigonometric sets used here are real, which callers rely on.
    return g;
}

Matrix prolate_matrix(std::size_t size, double w) {
    if (!(w > 0.0 && w < 0.5)) throw std::invalid_argument("prolate_matrix: need 0 < W < 1/2");
    Matrix g(size, size);
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j) {
            if (i == j) { g(i, j) = 2.0 * w; continue; }
            const double d = static_cast<double>(i) - static_cast<double>(j);
            g(i, j) = std::sin(2.0 * kPi * w * d) / (kPi * d);
        }
    return g;
}

DDMatrix prolate_matrix_dd(std::size_t size, double w) {
    if (!(w > 0.0 && w < 0.5)) throw std::invalid_argument("prolate_matrix_dd: need 0 < W < 1/2");
    DDMatrix g(size, size);
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j) {
            if (i == j) {
                g.set(i, j, dd_mul(DDReal{w}, 2.0));
                continue;
            }
            const double d = static_cast<double>(i) - static_cast<double>(j);
            double p, e;
            eft::two_prod(2.0 * w, d, p, e); // 2W*(k-l) exact
            const DDReal s = dd_sinpi(DDReal{p, e});
            g.set(i, j, dd_div(s, dd_mul(kDdPi, d)));
        }
    return g;
}

Matrix gram_prolate(std::size_t n, double w) {
    if (n % 2 != 1) throw std::invalid_argument("gram_prolate: n must be odd");
    return prolate_matrix(n, w);
}

DDMatrix gram_prolate_dd(std::size_t n, double w) {
    if (n % 2 != 1) throw std::invalid_argument("gram_prolate_dd: n must be odd");
    return prolate_matrix_dd(n, w);
}

namespace {

// <f, g> entries for the fourier-ext-real set under dx/2:
// s(c) = int cos(c pi x/2) dx/2 = sinpi(c/2) / (pi c / 2), s(0) = 1.

DDReal sinc_half_dd(double c) {
    if (c == 0.0) return DDReal{1.0};
    return dd_div(dd_sinpi(DDReal{c * 0.5}), dd_mul(kDdPi, c * 0.5));
}

// index decode: 0 -> constant; odd -> cos((i+1)/2), even -> sin(i/2)
struct TrigId {
    int kind; // 0 const, 1 cos, 2 sin
    double j;
};
TrigId trig_id(std::size_t i) {
    if (i == 0) return {0, 0.0};
    if (i % 2 == 1) return {1, double((i + 1) / 2)};
    return {2, double(i / 2)};
}

template <typename S, typename SFn, typename Half, typename Zero>
S fer_entry(std::size_t i, std::size_t j, SFn sfn, Half half, Zero zero) {
    const TrigId a = trig_id(i), b = trig_id(j);
    if (a.kind == 0 && b.kind == 0) return sfn(0.0);
    if (a.kind == 0 || b.kind == 0) {
        const TrigId t = a.kind == 0 ? b : a;
        if (t.kind == 1) return sfn(t.j);
        return zero();
    }
    if (a.kind != b.kind) return zero();
    if (a.kind == 1) return half(sfn(a.j - b.j), sfn(a.j + b.j), true);
    return half(sfn(a.j - b.j), sfn(a.j + b.j), false);
}


DDMatrix gram_fourier_ext_real_dd(std::size_t count) {
    DDMatrix g(count, count);
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < count; ++j)
            g.set(i, j, fer_entry<DDReal>(
                            i, j, sinc_half_dd,
                            [](DDReal d, DDReal s, bool plus) {
                                return dd_mul(plus ? dd_add(d, s) : dd_sub(d, s), 0.5);
                            },
                            []() { return DDReal{}; }));
    return g;
}

// Sumframe blocks under dx/2. The [plain x weighted] block integrand has a
// sqrt singularity; the substitution x = 2t^2 - 1 makes it polynomial:
// int_{-1}^{1} sqrt((x+1)/2) f(x) dx/2 = 2 int_0^1 t^2 f(2t^2-1) dt.
DDMatrix gram_sumframe_dd(std::size_t n) {
    const std::size_t half = n / 2;
    const Dictionary leg = legendre_dict(half);
    DDMatrix g(n, n);

    const DDQuadRule base = gauss_legendre_dd(n + 16);
    const std::size_t q = base.nodes.size();

    // plain x plain and weighted x weighted: polynomial integrands on [-1,1]
    for (std::size_t a = 0; a < q; ++a) {
        const DDReal x = base.nodes.get(a);
        const DDReal wq = dd_mul(base.weights.get(a), 0.5); // rho = dx/2
        const DDReal wfac = dd_mul(dd_add(x, DDReal{1.0}), 0.5); // w(x)^2
        std::vector<DDReal> phi(half);
        for (std::size_t i = 0; i < half; ++i) phi[i] = leg.eval_dd(i, x).re;
        for (std::size_t i = 0; i < half; ++i)
            for (std::size_t j = i; j < half; ++j) {
                const DDReal pp = dd_mul(dd_mul(phi[i], phi[j]), wq);
                g.set(i, j, dd_add(g.get(i, j), pp));
                g.set(half + i, half + j, dd_add(g.get(half + i, half + j), dd_mul(pp, wfac)));
            }
    }
    // cross block via the substitution rule on [0, 1]
    for (std::size_t a = 0; a < q; ++a) {
        const DDReal t = dd_mul(dd_add(base.nodes.get(a), DDReal{1.0}), 0.5);
        const DDReal wq = dd_mul(base.weights.get(a), 0.5);
        const DDReal x = dd_sub(dd_mul(dd_mul(t, t), 2.0), DDReal{1.0});
        const DDReal fac = dd_mul(dd_mul(dd_mul(t, t), 2.0), wq);
        std::vector<DDReal> phi(half);
        for (std::size_t i = 0; i < half; ++i) phi[i] = leg.eval_dd(i, x).re;
        for (std::size_t i = 0; i < half; ++i)
            for (std::size_t j = 0; j < half; ++j)
                g.set(i, half + j,
                      dd_add(g.get(i, half + j), dd_mul(dd_mul(phi[i], phi[j]), fac)));
    }
    for (std::size_t i = 0; i < half; ++i)
        for (std::size_t j = 0; j < half; ++j) g.set(half + j, i, g.get(i, half + j));
    // mirror upper triangles of the diagonal blocks
    for (std::size_t i = 0; i < half; ++i)
        for (std::size_t j = i + 1; j < half; ++j) {
            g.set(j, i, g.get(i, j));
            g.set(half + j, half + i, g.get(half + i, half + j));
        }
    return g;
}

DDMatrix scale_dd(DDMatrix g, const DDReal& f) {
    for (std::size_t i = 0; i < g.rows; ++i)
        for (std::size_t j = 0; j < g.cols; ++j) g.set(i, j, dd_mul(g.get(i, j), f));
    return g;
}

double max_abs_diff(const DDMatrix& a, const DDMatrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.hi.size(); ++i)
        m = std::max(m, std::abs(DDReal{a.hi[i], a.lo[i]}.to_double() -
                                 DDReal{b.hi[i], b.lo[i]}.to_double()));
    return m;
}

} // namespace

DDMatrix gram_auto_dd(const Dictionary& dict, GramConvention conv) {
    if (dict.label == "fourier-ext") {
        DDMatrix g = prolate_matrix_dd(dict.count, dict.hi);
        if (conv == GramConvention::probability)
            g = scale_dd(std::move(g), dd_div(DDReal{1.0}, DDReal{2.0 * dict.hi}));
        return g;
    }
    if (dict.label == "fourier-ext-real") {
        DDMatrix g = gram_fourier_ext_real_dd(dict.count);
        if (conv == GramConvention::lebesgue) g = scale_dd(std::move(g), DDReal{2.0});
        return g;
    }
    if (dict.label == "sumframe") {
        DDMatrix g = gram_sumframe_dd(dict.count);
        if (conv == GramConvention::lebesgue) g = scale_dd(std::move(g), DDReal{2.0});
        return g;
    }
    // generic quadrature with a doubling guard, escalating N as needed
    std::size_t n_rule = dict.count + 16;
    DDMatrix g = gram_continuous_dd(dict, gauss_legendre_dd(n_rule), conv);
    for (int attempt = 0; attempt < 7; ++attempt) {
        const DDMatrix g2 = gram_continuous_dd(dict, gauss_legendre_dd(2 * n_rule), conv);
        double scale = 0.0;
        for (std::size_t i = 0; i < g2.rows; ++i)
            scale = std::max(scale, std::abs(g2.get(i, i).to_double()));
        if (max_abs_diff(g, g2) <= 1e-13 * std::max(scale, 1.0)) return g2;
        g = g2;
        n_rule *= 2;
    }
    throw QuadratureGuardError("gram_auto_dd: quadrature did not stabilize for '" + dict.label +
                               "'");
}

Matrix gram_auto(const Dictionary& dict, GramConvention conv) {
    const DDMatrix g = gram_auto_dd(dict, conv);
    Matrix out(g.rows, g.cols);
    for (std::size_t i = 0; i < g.rows; ++i)
        for (std::size_t j = 0; j < g.cols; ++j) out(i, j) = g.get(i, j).to_double();
    return out;
}

Matrix gram_discrete(const Dictionary& dict, const SampleSet& samples) {
    if (dict.is_complex)
        throw std::invalid_argument("gram_discrete: complex dictionary, use gram_discrete_c");
    if (samples.size() == 0) throw std::invalid_argument("gram_discrete: empty sample set");
    const std::size_t m = samples.size(), n = dict.count;
    Matrix at(n, m); // rows are sampled functions, scaled by sqrt(w/m)
    for (std::size_t j = 0; j < m; ++j) {
        const double s = std::sqrt(samples.weights[j] / double(m));
        for (std::size_t i = 0; i < n; ++i) at(i, j) = s * dict.eval(i, samples.points[j]).real();
    }
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < m; ++k) acc += at(i, k) * at(j, k);
            g(i, j) = g(j, i) = acc;
        }
    return g;
}

CMatrix gram_discrete_c(const Dictionary& dict, const SampleSet& samples) {
    if (samples.size() == 0) throw std::invalid_argument("gram_discrete_c: empty sample set");
    const std::size_t m = samples.size(), n = dict.count;
    CMatrix at(n, m);
    for (std::size_t j = 0; j < m; ++j) {
        const double s = std::sqrt(samples.weights[j] / double(m));
        for (std::size_t i = 0; i < n; ++i) at(i, j) = s * dict.eval(i, samples.points[j]);
    }
    CMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            std::complex<double> acc{};
            for (std::size_t k = 0; k < m; ++k) acc += std::conj(at(i, k)) * at(j, k);
            g(i, j) = acc;
            g(j, i) = std::conj(acc);
        }
    return g;
}

DDMatrix gram_discrete_dd(const Dictionary& dict, const SampleSet& samples) {
    if (dict.is_complex)
        throw std::invalid_argument("gram_discrete_dd: complex dictionary, use gram_discrete_dd_c");
    if (samples.size() == 0) throw std::invalid_argument("gram_discrete_dd: empty sample set");
    const std::size_t m = samples.size(), n = dict.count;
    Matrix at(n, m);
    for (std::size_t j = 0; j < m; ++j) {
        const double s = std::sqrt(samples.weights[j] / double(m));
        for (std::size_t i = 0; i < n; ++i) at(i, j) = s * dict.eval(i, samples.points[j]).real();
    }
    DDMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const DDReal acc = kernels::dot_double_dd(&at(i, 0), &at(j, 0), m);
            g.set(i, j, acc);
            g.set(j, i, acc);
        }
    return g;
}

void gram_discrete_dd_c(const Dictionary& dict, const SampleSet& samples,
                        DDMatrix& re, DDMatrix& im) {
    if (samples.size() == 0) throw std::invalid_argument("gram_discrete_dd_c: empty sample set");
    const std::size_t m = samples.size(), n = dict.count;
    Matrix atr(n, m), ati(n, m);
    for (std::size_t j = 0; j < m; ++j) {
        const double s = std::sqrt(samples.weights[j] / double(m));
        for (std::size_t i = 0; i < n; ++i) {
            const std::complex<double> v = dict.eval(i, samples.points[j]);
            atr(i, j) = s * v.real();
            ati(i, j) = s * v.imag();
        }
    }
    re = DDMatrix(n, n);
    im = DDMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            // (A* A)_ij = sum_k conj(a_ki) a_kj
            const DDReal rr = kernels::dot_double_dd(&atr(i, 0), &atr(j, 0), m);
            const DDReal ii = kernels::dot_double_dd(&ati(i, 0), &ati(j, 0), m);
            const DDReal ri = kernels::dot_double_dd(&atr(i, 0), &ati(j, 0), m);
            const DDReal ir = kernels::dot_double_dd(&ati(i, 0), &atr(j, 0), m);
            re.set(i, j, dd_add(rr, ii));
            im.set(i, j, dd_sub(ri, ir));
        }
}

} // namespace fna
