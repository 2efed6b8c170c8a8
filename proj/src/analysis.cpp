#include "fna/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "fna/rng.hpp"

namespace fna {

namespace {

constexpr double kPi = 3.14159265358979323846;

} // namespace

FrameReport frame_bounds_from_values(const DDVector& values_ascending, double zero_tol,
                                     double eps_mach) {
    const std::size_t n = values_ascending.size();
    if (n == 0) throw std::invalid_argument("frame_bounds: empty spectrum");
    FrameReport r;
    r.eps_mach = eps_mach;
    r.b_n = values_ascending.get(n - 1).to_double();
    if (r.b_n <= 0.0)
        throw std::runtime_error("frame_bounds: no positive eigenvalues above the floor");
    const double floor = zero_tol * r.b_n;
    bool found = false;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = values_ascending.get(i).to_double();
        if (v >= floor) {
            r.a_n = v;
            found = true;
            break;
        }
    }
    if (!found) throw std::runtime_error("frame_bounds: all eigenvalues below the floor");
    // The redundancy predicate compares against eps_mach^2 B_n, which for
    // eps_mach = eps_dp sits near one dd ulp of B_n -- below the zero_tol
    // floor that defines A_n. The raw clamped minimum is accurate to about
    // one ulp (cross-checked against an extended-precision oracle), so the
    // flag uses it directly.
    const double raw_min = std::max(values_ascending.get(0).to_double(), 0.0);
    r.numerically_redundant = raw_min <= eps_mach * eps_mach * r.b_n;
    return r;
}

FrameReport frame_bounds(const DDMatrix& gram, double zero_tol, double eps_mach) {
    return frame_bounds_from_values(dd_sym_eig(gram).values, zero_tol, eps_mach);
}

namespace {

// Smallest generalized eigenvalue with the semidefinite-B shift policy.
// The shift is applied to BOTH sides of the pencil: (a + dI, b + dI) maps
// every Rayleigh quotient monotonically toward 1, so directions in the dd
// null space of b (true quotient >> 1) stay >= 1 instead of collapsing to
// eps^2/d, while genuine minima below 1 move by O(d / denominator).
double gen_min_eig_dd(const DDMatrix& a, const DDMatrix& b) {
    DDReal shift{};
    const DDReal base = dd_mul(dd_trace(b), kDdEps);
    for (int attempt = 0;; ++attempt) {
        try {
            DDMatrix as = a;
            if (shift.to_double() != 0.0)
                for (std::size_t i = 0; i < as.rows; ++i)
                    as.set(i, i, dd_add(as.get(i, i), shift));
            const DDVector vals = dd_gen_sym_eig(as, b, shift);
            return vals.get(0).to_double();
        } catch (const NotPositiveDefiniteError&) {
            if (attempt >= 10) throw;
            shift = attempt == 0 ? base : dd_mul(shift, 4.0);
        }
    }
}

DDMatrix add_eps2_identity(DDMatrix m, double eps) {
    if (eps <= 0.0) return m;
    const DDReal e2 = dd_mul(DDReal{eps}, DDReal{eps});
    for (std::size_t i = 0; i < m.rows; ++i) m.set(i, i, dd_add(m.get(i, i), e2));
    return m;
}

} // namespace

double stability_constant(const DDMatrix& g_nm, const DDMatrix& g_n, double eps) {
    if (g_nm.rows != g_n.rows) throw std::invalid_argument("stability_constant: size mismatch");
    const double lam = gen_min_eig_dd(add_eps2_identity(g_nm, eps), g_n);
    return std::max(lam, 0.0);
}

double stability_constant_c(const DDMatrix& g_nm_re, const DDMatrix& g_nm_im,
                            const DDMatrix& g_n, double eps) {
    const DDMatrix a = dd_realify(g_nm_re, g_nm_im);
    DDMatrix zero(g_n.rows, g_n.cols);
    const DDMatrix b = dd_realify(g_n, zero);
    const double lam = gen_min_eig_dd(add_eps2_identity(a, eps), b);
    return std::max(lam, 0.0);
}

SpectrumReport plunge_and_tail(const std::vector<double>& sigmas, double eps,
                               PlungeNormalization norm) {
    SpectrumReport r;
    r.sigmas = sigmas;
    const std::size_t n = sigmas.size();
    const double smax = n ? sigmas.front() : 0.0;
    const double eps_eff = norm == PlungeNormalization::relative ? eps * smax : eps;
    const double hi_thr = (norm == PlungeNormalization::relative ? smax * smax : 1.0) *
                          (1.0 - eps * eps);
    const double lo_thr = eps_eff * eps_eff;

    std::size_t i1 = 0;
    while (i1 < n && sigmas[i1] * sigmas[i1] >= hi_thr) ++i1;
    std::size_t i2 = n;
    while (i2 > 0 && sigmas[i2 - 1] * sigmas[i2 - 1] <= lo_thr) --i2;
    r.i1 = i1;
    r.i2 = std::max(i2, i1); // plunge region is empty at worst
    double tail = 0.0;
    for (std::size_t i = r.i2; i < n; ++i) tail += (sigmas[i] / eps_eff) * (sigmas[i] / eps_eff);
    r.s_tail = tail;
    r.n_eps = numerical_dimension(sigmas, eps_eff);
    return r;
}

Theorem9Report verify_theorem9(ChristoffelEngine& engine, double eps,
                               const std::vector<double>& probes, PlungeNormalization norm) {
    Theorem9Report rep;
    rep.spectrum = plunge_and_tail(engine.sigmas(), eps, norm);
    const auto& sp = rep.spectrum;
    const std::size_t n = sp.sigmas.size();
    const double floor = 1e-30 * engine.lambda_max();
    double viol = 0.0;

    // n_eps <= i2 + S_tail
    viol = std::max(viol, (sp.n_eps - (double(sp.i2) + sp.s_tail)) / std::max(sp.n_eps, 1.0));

    const Dictionary& dict = engine.dict();
    double phi_sup = 0.0;
    std::vector<double> u_sup(n, 0.0);
    double sup_k = 0.0;
    for (double x : probes) {
        const double k_eps = engine.ridge(eps, x);
        sup_k = std::max(sup_k, k_eps);
        double k_trunc = 0.0;
        for (std::size_t i = 0; i < sp.i2; ++i) k_trunc += engine.u_sq(i, x);
        double tail_max = 0.0;
        for (std::size_t i = sp.i2; i < n; ++i) {
            const double lam = sp.sigmas[i] * sp.sigmas[i];
            if (lam < floor) continue; // below the dd floor; contributes ~0 to both sides
            tail_max = std::max(tail_max, engine.u_sq(i, x));
        }
        const double scale = std::max({k_eps, k_trunc, 1.0});
        viol = std::max(viol, (0.5 * k_trunc - k_eps) / scale);
        viol = std::max(viol, (k_eps - (k_trunc + sp.s_tail * tail_max)) / scale);

        for (std::size_t i = 0; i < dict.count; ++i)
            phi_sup = std::max(phi_sup, std::abs(dict.eval(i, x)));
        for (std::size_t i = sp.i1; i < n; ++i) {
            const double lam = sp.sigmas[i] * sp.sigmas[i];
            if (lam < floor) continue;
            u_sup[i] = std::max(u_sup[i], engine.u_sq(i, x));
        }
    }
    rep.sup_k_eps = sup_k;
    // the sup bound needs linear independence and |phi_i| <= 1
    if (dict.dim_hint == dict.count && phi_sup <= 1.0 + 1e-12) {
        rep.uniform_bound_checked = true;
        double u_max = 0.0;
        for (std::size_t i = sp.i1; i < n; ++i) u_max = std::max(u_max, u_sup[i]);
        rep.sup_bound = double(n) / (1.0 - eps * eps) +
                        (double(sp.i2 - sp.i1) + sp.s_tail) * u_max;
        viol = std::max(viol, (sup_k - rep.sup_bound) / std::max(rep.sup_bound, 1.0));
    }
    rep.max_rel_violation = viol;
    rep.holds = viol <= 1e-8;
    return rep;
}

FourierTheoremReport verify_fourier_theorems(std::size_t n, double w, double eps,
                                             std::size_t sup_grid) {
    FourierTheoremReport rep;
    rep.n = n;
    rep.w = w;
    rep.eps = eps;

    const Dictionary dict = fourier_ext_dict(n, w);
    // Lebesgue convention: the Gram is exactly the prolate matrix, whose
    // spectrum sits in (0,1) -- the normalized setting of the index bounds.
    ChristoffelEngine engine(dict, gram_prolate_dd(n, w));
    const auto& sigmas = engine.sigmas();

    const double log4n = std::log(4.0 * double(n));
    const double log8e2 = std::log(8.0 / (eps * eps));
    const double c = 2.0 / (kPi * kPi);
    rep.i2_formula = std::ceil(2.0 * double(n) * w) + 2.0 + c * log8e2 * log4n;
    rep.i1_formula = std::floor(2.0 * double(n) * w) - 1.0 - c * log8e2 * log4n;

    rep.k2_ok = true;
    rep.k1_ok = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double idx1 = double(i + 1);
        if (idx1 > rep.i2_formula && sigmas[i] * sigmas[i] > eps * eps) rep.k2_ok = false;
        if (idx1 <= rep.i1_formula && sigmas[i] * sigmas[i] < 1.0 - eps * eps) rep.k1_ok = false;
    }

    rep.s_tail = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (double(i + 1) > rep.i2_formula) rep.s_tail += (sigmas[i] / eps) * (sigmas[i] / eps);
    rep.s_tail_bound = c * log4n;
    rep.s_tail_ok = rep.s_tail <= rep.s_tail_bound * (1.0 + 1e-8);

    rep.n_eps = numerical_dimension(sigmas, eps);
    rep.n_eps_bound = std::ceil(2.0 * double(n) * w) + 2.0 + c * (log8e2 + 1.0) * log4n;
    rep.n_eps_ok = rep.n_eps <= std::min(rep.n_eps_bound, double(n)) * (1.0 + 1e-12) &&
                   rep.n_eps <= double(n) * (1.0 + 1e-12);

    // sup of k_n^eps over a fine grid (endpoints included; the maximum of the
    // Christoffel functions of this frame sits at the boundary)
    const double floor = 1e-30 * engine.lambda_max();
    double sup_k = 0.0;
    std::vector<double> u_sup(n, 0.0);
    for (std::size_t j = 0; j < sup_grid; ++j) {
        const double x = -w + 2.0 * w * double(j) / double(sup_grid - 1);
        sup_k = std::max(sup_k, engine.ridge(eps, x));
        for (std::size_t i = 0; i < n; ++i) {
            if (double(i + 1) <= rep.i1_formula) continue;
            if (sigmas[i] * sigmas[i] < floor) continue;
            u_sup[i] = std::max(u_sup[i], engine.u_sq(i, x));
        }
    }
    rep.sup_k_eps = sup_k;
    double u_max = 0.0;
    for (double v : u_sup) u_max = std::max(u_max, v);
    rep.sup_k_eps_bound =
        double(n) / (1.0 - eps * eps) +
        (4.0 + c * (2.0 * log8e2 + 1.0) * log4n) * u_max;
    rep.sup_ok = sup_k <= rep.sup_k_eps_bound * (1.0 + 1e-8);

    if (engine.plain_computable()) {
        const double kw = engine.plain(w);
        rep.theorem12_ratio = kw / (double(n) * double(n) * (kPi / 2.0) / std::tan(w * kPi));
    }
    return rep;
}

double mz_montecarlo(const Dictionary& dict, const DDMatrix& g_n, const DensityTable& density,
                     std::size_t m, double eps, std::size_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("mz_montecarlo: trials >= 1 required");
    std::size_t success = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const SampleSet s = draw_iid(density, m, Rng::derive(seed, t));
        double a_eps;
        if (dict.is_complex) {
            DDMatrix re, im;
            gram_discrete_dd_c(dict, s, re, im);
            a_eps = stability_constant_c(re, im, g_n, eps);
        } else {
            a_eps = stability_constant(gram_discrete_dd(dict, s), g_n, eps);
        }
        if (a_eps >= 0.5) ++success;
    }
    return double(success) / double(trials);
}

AugmentedBasisReport verify_augmented_basis(const Dictionary& base,
                                            const std::function<double(double)>& psi,
                                            const SampleSet& samples, double eps) {
    if (base.is_complex)
        throw std::invalid_argument("verify_augmented_basis: real bases only");
    Dictionary aug = base;
    aug.label = base.label + "+psi";
    aug.count = base.count + 1;
    aug.dim_hint = base.dim_hint + 1;
    const Dictionary base_copy = base;
    aug.eval = [base_copy, psi](std::size_t i, double x) {
        if (i < base_copy.count) return base_copy.eval(i, x);
        return std::complex<double>(psi(x), 0.0);
    };
    aug.eval_dd = [base_copy, psi](std::size_t i, DDReal x) {
        if (i < base_copy.count) return base_copy.eval_dd(i, x);
        return DDComplex{DDReal{psi(x.to_double())}, DDReal{}};
    };
    const DDMatrix g_n = gram_auto_dd(aug, GramConvention::probability);
    const DDMatrix g_nm = gram_discrete_dd(aug, samples);
    AugmentedBasisReport rep;
    rep.a_eps = stability_constant(g_nm, g_n, eps);
    rep.holds = rep.a_eps >= 0.5;
    return rep;
}

double condition_probe(const Dictionary& dict, const System& sys, double eps,
                       const Matrix& g_n, std::size_t trials, std::uint64_t seed) {
    if (sys.is_complex) throw std::invalid_argument("condition_probe: real systems only");
    const SvdResult f = svd(sys.a_r);
    Rng rng(seed);
    const std::size_t m = sys.a_r.rows;
    double best = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        std::vector<double> delta(m);
        for (double& v : delta) v = rng.next_normal();
        const double nd = norm2(delta);
        for (double& v : delta) v /= nd;
        const std::vector<double> x = tikhonov_apply(f, eps, delta);
        // ||F delta||_H^2 = x^T G_n x
        const std::vector<double> gx = matvec(g_n, x);
        double h2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) h2 += x[i] * gx[i];
        best = std::max(best, std::sqrt(std::max(h2, 0.0)));
    }
    (void)dict;
    return best;
}

} // namespace fna
