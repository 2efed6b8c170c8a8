#include "fna/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace fna {

namespace {

constexpr double kEpsDp = 2.220446049250313e-16;

double default_eps(double sigma_max) { return 10.0 * kEpsDp * sigma_max; }

} // namespace

System build_system(const Dictionary& dict, const SampleSet& samples,
                    const std::function<double(double)>& f,
                    const std::optional<std::vector<double>>& noise) {
    const std::size_t m = samples.size(), n = dict.count;
    if (m == 0) throw std::invalid_argument("build_system: empty sample set");
    if (noise && noise->size() != m)
        throw std::invalid_argument("build_system: noise length does not match sample count");
    System sys;
    sys.is_complex = dict.is_complex;
    if (sys.is_complex) {
        sys.a_c = CMatrix(m, n);
        sys.d_c.resize(m);
    } else {
        sys.a_r = Matrix(m, n);
        sys.d_r.resize(m);
    }
    for (std::size_t j = 0; j < m; ++j) {
        const double x = samples.points[j];
        const double s = std::sqrt(samples.weights[j] / double(m));
        const double dj = s * f(x) + (noise ? (*noise)[j] : 0.0);
        if (sys.is_complex) {
            for (std::size_t i = 0; i < n; ++i) sys.a_c(j, i) = s * dict.eval(i, x);
            sys.d_c[j] = dj;
        } else {
            for (std::size_t i = 0; i < n; ++i) sys.a_r(j, i) = s * dict.eval(i, x).real();
            sys.d_r[j] = dj;
        }
    }
    return sys;
}

FitMethod fit_method_from_string(const std::string& s) {
    if (s == "ls") return FitMethod::ls;
    if (s == "tikhonov") return FitMethod::tikhonov;
    if (s == "tsvd") return FitMethod::tsvd;
    throw std::invalid_argument("unknown fit method: " + s);
}

namespace {

template <typename T>
void fit_impl(const Mat<T>& a, const std::vector<T>& d, FitMethod method, double eps,
              ApproxResult& out) {
    const SvdResultT<T> f = svd(a);
    const double smax = f.s.empty() ? 0.0 : f.s.front();
    double eff = eps > 0.0 ? eps : default_eps(smax);
    std::vector<T> x;
    switch (method) {
        case FitMethod::ls: {
            const double smin = f.s.empty() ? 0.0 : f.s.back();
            if (smin <= kEpsDp * smax)
                throw std::runtime_error(
                    "fit: system is numerically rank-deficient; plain least squares is "
                    "meaningless here, use tsvd or tikhonov");
            x = tsvd_apply(f, 0.0, d);
            eff = 0.0;
            out.solver = "ls";
            break;
        }
        case FitMethod::tikhonov:
            x = tikhonov_apply(f, eff, d);
            out.solver = "tikhonov";
            break;
        case FitMethod::tsvd:
            x = tsvd_apply(f, eff, d);
            out.solver = "tsvd";
            break;
    }
    // residual and coefficient norm
    std::vector<T> ax = matvec(a, x);
    double r2 = 0.0, c2 = 0.0;
    for (std::size_t j = 0; j < ax.size(); ++j)
        r2 += std::norm(std::complex<double>(ax[j] - d[j]));
    for (const T& c : x) c2 += std::norm(std::complex<double>(c));
    out.eps = eff;
    out.residual = std::sqrt(r2);
    out.coeff_norm = std::sqrt(c2);
    out.coeffs.assign(x.begin(), x.end());
}

} // namespace

ApproxResult fit(const Dictionary& dict, const System& sys, FitMethod method, double eps) {
    ApproxResult out;
    out.dict = dict;
    if (sys.is_complex) {
        fit_impl(sys.a_c, sys.d_c, method, eps, out);
        out.real_part = true; // targets are real-valued in this library
    } else {
        fit_impl(sys.a_r, sys.d_r, method, eps, out);
    }
    return out;
}

namespace {

template <typename T>
void fit_qr_impl(const Dictionary& dict, const SampleSet& samples, const std::vector<double>& d,
                 ApproxResult& out) {
    const std::size_t m = samples.size(), n = dict.count;
    Mat<T> a(m, n);
    std::vector<T> ds(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double s = std::sqrt(samples.weights[j] / double(m));
        for (std::size_t i = 0; i < n; ++i) {
            const std::complex<double> v = dict.eval(i, samples.points[j]);
            if constexpr (std::is_same_v<T, double>)
                a(j, i) = s * v.real();
            else
                a(j, i) = T(s) * v;
        }
        ds[j] = T(s * d[j]);
    }
    const QrResultT<T> qr = householder_qr(a);
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(std::complex<double>(qr.r(i, i))) == 0.0)
            throw std::runtime_error("fit_qr_orthogonalized: exactly singular R");
    const std::vector<T> c = matvec_adj(qr.q, ds);
    std::vector<T> x(n, T{});
    for (std::size_t ii = n; ii-- > 0;) {
        T sum = c[ii];
        for (std::size_t k = ii + 1; k < n; ++k) sum -= qr.r(ii, k) * x[k];
        x[ii] = sum / qr.r(ii, ii);
    }
    out.skeel = skeel_cond(qr.r);
    std::vector<T> ax = matvec(a, x);
    double r2 = 0.0, c2 = 0.0;
    for (std::size_t j = 0; j < m; ++j) r2 += std::norm(std::complex<double>(ax[j] - ds[j]));
    for (const T& v : x) c2 += std::norm(std::complex<double>(v));
    out.residual = std::sqrt(r2);
    out.coeff_norm = std::sqrt(c2);
    out.coeffs.assign(x.begin(), x.end());
}

} // namespace

ApproxResult fit_qr_orthogonalized(const Dictionary& dict, const SampleSet& samples,
                                   const std::vector<double>& d, double eps) {
    if (d.size() != samples.size())
        throw std::invalid_argument("fit_qr_orthogonalized: data length mismatch");
    ApproxResult out;
    out.dict = dict;
    out.solver = "qr-orthogonalized";
    out.eps = eps;
    if (dict.is_complex) {
        fit_qr_impl<std::complex<double>>(dict, samples, d, out);
        out.real_part = true;
    } else {
        fit_qr_impl<double>(dict, samples, d, out);
    }
    return out;
}

ApproxResult fit_vwa(const std::function<std::complex<double>(double)>& shift,
                     const std::string& shift_label, std::size_t n,
                     const std::vector<double>& grid, const std::vector<double>& d) {
    if (grid.size() < n) throw std::invalid_argument("fit_vwa: grid size must be >= n");
    if (d.size() != grid.size()) throw std::invalid_argument("fit_vwa: data length mismatch");
    const std::size_t l = grid.size();
    const std::vector<double> w(l, 1.0 / double(l));
    auto basis = std::make_shared<ArnoldiBasis>(
        stieltjes_orthonormalize(n, shift, shift_label, grid, w));

    using cd = std::complex<double>;
    std::vector<cd> coeffs(n);
    for (std::size_t i = 0; i < n; ++i) {
        cd acc{};
        for (std::size_t j = 0; j < l; ++j) acc += w[j] * std::conj(basis->columns(j, i)) * d[j];
        coeffs[i] = acc;
    }
    double r2 = 0.0, c2 = 0.0;
    for (std::size_t j = 0; j < l; ++j) {
        cd p{};
        for (std::size_t i = 0; i < n; ++i) p += coeffs[i] * basis->columns(j, i);
        r2 += std::norm(cd(d[j]) - p) * w[j];
        // residual reported in the same sqrt(1/m)-scaled sense as fit()
    }
    for (const cd& c : coeffs) c2 += std::norm(c);

    const double lo = *std::min_element(grid.begin(), grid.end());
    const double hi = *std::max_element(grid.begin(), grid.end());
    ApproxResult out;
    out.dict = arnoldi_dict(basis, lo, hi);
    out.solver = "vwa";
    out.residual = std::sqrt(r2);
    out.coeff_norm = std::sqrt(c2);
    out.coeffs = std::move(coeffs);
    out.real_part = basis->is_complex;
    return out;
}

std::complex<double> evaluate(const ApproxResult& res, double x) {
    std::complex<double> acc{};
    for (std::size_t i = 0; i < res.coeffs.size(); ++i) acc += res.coeffs[i] * res.dict.eval(i, x);
    return acc;
}

double evaluate_real(const ApproxResult& res, double x) {
    // real dictionaries carry zero imaginary parts; complex spans of real
    // targets are evaluated through their real part
    return evaluate(res, x).real();
}

double error_l2(const std::function<double(double)>& f, const ApproxResult& res,
                const QuadRule& rule) {
    const Dictionary& dict = res.dict;
    const QuadRule r = scaled_rule(rule, dict.lo, dict.hi);
    double acc = 0.0;
    for (std::size_t q = 0; q < r.nodes.size(); ++q) {
        const double x = r.nodes[q];
        const std::complex<double> p = evaluate(res, x);
        const double err = res.real_part
                               ? std::abs(f(x) - p.real())
                               : std::abs(std::complex<double>(f(x)) - p);
        acc += r.weights[q] * dict.rho_density(x) * err * err;
    }
    return std::sqrt(acc);
}

double error_sup(const std::function<double(double)>& f, const ApproxResult& res,
                 std::size_t grid_points) {
    const Dictionary& dict = res.dict;
    double best = 0.0;
    for (std::size_t j = 0; j < grid_points; ++j) {
        const double x = dict.lo + (dict.hi - dict.lo) * double(j) / double(grid_points - 1);
        const std::complex<double> p = evaluate(res, x);
        const double err = res.real_part
                               ? std::abs(f(x) - p.real())
                               : std::abs(std::complex<double>(f(x)) - p);
        best = std::max(best, err);
    }
    return best;
}

} // namespace fna
