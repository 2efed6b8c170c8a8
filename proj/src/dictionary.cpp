#include "fna/dictionary.hpp"

#include <cmath>

namespace fna {

namespace {

// sqrt(2i+1) * P_i(x), orthonormal under dx/2 on [-1, 1]
double legendre_fn(std::size_t i, double x) {
    double pkm1 = 1.0, pk = x;
    if (i == 0) return 1.0;
    for (std::size_t k = 1; k < i; ++k) {
        const double pkp1 = ((2.0 * k + 1.0) * x * pk - k * pkm1) / (k + 1.0);
        pkm1 = pk;
        pk = pkp1;
    }
    return std::sqrt(2.0 * i + 1.0) * pk;
}

DDReal legendre_fn_dd(std::size_t i, const DDReal& x) {
    if (i == 0) return DDReal{1.0};
    DDReal pkm1{1.0}, pk = x;
    const DDReal xd = x;
    for (std::size_t k = 1; k < i; ++k) {
        const DDReal pkp1 = dd_div(
            dd_sub(dd_mul(dd_mul(DDReal{2.0 * k + 1.0}, xd), pk), dd_mul(DDReal{double(k)}, pkm1)),
            DDReal{double(k + 1)});
        pkm1 = pk;
        pk = pkp1;
    }
    return dd_mul(pk, dd_sqrt(DDReal{2.0 * i + 1.0}));
}

} // namespace

Dictionary legendre_dict(std::size_t n) {
    if (n < 1) throw std::invalid_argument("legendre_dict: n >= 1 required");
    Dictionary d;
    d.label = "legendre";
    d.count = n;
    d.dim_hint = n;
    d.lo = -1.0;
    d.hi = 1.0;
    d.rho_density = [](double) { return 0.5; };
    d.eval = [](std::size_t i, double x) { return std::complex<double>(legendre_fn(i, x), 0.0); };
    d.eval_dd = [](std::size_t i, DDReal x) { return DDComplex{legendre_fn_dd(i, x), DDReal{}}; };
    return d;
}

Dictionary monomial_dict(std::size_t n) {
    if (n < 1) throw std::invalid_argument("monomial_dict: n >= 1 required");
    Dictionary d;
    d.label = "monomial";
    d.count = n;
    d.dim_hint = n;
    d.lo = -1.0;
    d.hi = 1.0;
    d.rho_density = [](double) { return 0.5; };
    d.eval = [](std::size_t i, double x) {
        double p = 1.0;
        for (std::size_t k = 0; k < i; ++k) p *= x;
        return std::complex<double>(p, 0.0);
    };
    d.eval_dd = [](std::size_t i, DDReal x) {
        DDReal p{1.0};
        for (std::size_t k = 0; k < i; ++k) p = dd_mul(p, x);
        return DDComplex{p, DDReal{}};
    };
    return d;
}

Dictionary sumframe_dict(std::size_t n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("sumframe_dict: n must be even and >= 2");
    Dictionary d;
    d.label = "sumframe";
    d.count = n;
    d.dim_hint = n;
    d.lo = -1.0;
    d.hi = 1.0;
    d.rho_density = [](double) { return 0.5; };
    const std::size_t half = n / 2;
    d.eval = [half](std::size_t i, double x) {
        if (i < half) return std::complex<double>(legendre_fn(i, x), 0.0);
        return std::complex<double>(std::sqrt((x + 1.0) / 2.0) * legendre_fn(i - half, x), 0.0);
    };
    d.eval_dd = [half](std::size_t i, DDReal x) {
        if (i < half) return DDComplex{legendre_fn_dd(i, x), DDReal{}};
        const DDReal w = dd_sqrt(dd_mul(dd_add(x, DDReal{1.0}), 0.5));
        return DDComplex{dd_mul(w, legendre_fn_dd(i - half, x)), DDReal{}};
    };
    return d;
}

Dictionary fourier_ext_dict(std::size_t n, double w) {
    if (n % 2 != 1) throw std::invalid_argument("fourier_ext_dict: n must be odd");
    if (!(w > 0.0 && w < 0.5)) throw std::invalid_argument("fourier_ext_dict: need 0 < W < 1/2");
    Dictionary d;
    d.label = "fourier-ext";
    d.count = n;
    d.dim_hint = n;
    d.lo = -w;
    d.hi = w;
    d.is_complex = true;
    d.rho_density = [w](double) { return 1.0 / (2.0 * w); };
    const long half = static_cast<long>((n - 1) / 2);
    d.eval = [half](std::size_t i, double x) {
        const double k = static_cast<double>(static_cast<long>(i) - half);
        return std::exp(std::complex<double>(0.0, 2.0 * 3.14159265358979323846 * k * x));
    };
    d.eval_dd = [half](std::size_t i, DDReal x) {
        const double k = static_cast<double>(static_cast<long>(i) - half);
        // exp(2 pi i k x) = cos(pi * 2kx) + i sin(pi * 2kx)
        DDReal s, c;
        dd_sincospi(dd_mul(x, 2.0 * k), s, c);
        return DDComplex{c, s};
    };
    return d;
}

Dictionary fourier_ext_real_dict(std::size_t n) {
    if (n < 1) throw std::invalid_argument("fourier_ext_real_dict: n >= 1 required");
    Dictionary d;
    d.label = "fourier-ext-real";
    d.count = 2 * n + 1;
    d.dim_hint = 2 * n + 1;
    d.lo = -1.0;
    d.hi = 1.0;
    d.rho_density = [](double) { return 0.5; };
    // index 0 -> 1; 2j-1 -> cos(j pi x / 2); 2j -> sin(j pi x / 2)
    d.eval = [](std::size_t i, double x) {
        if (i == 0) return std::complex<double>(1.0, 0.0);
        const double j = static_cast<double>((i + 1) / 2);
        const double arg = j * 3.14159265358979323846 * x / 2.0;
        return std::complex<double>(i % 2 == 1 ? std::cos(arg) : std::sin(arg), 0.0);
    };
    d.eval_dd = [](std::size_t i, DDReal x) {
        if (i == 0) return DDComplex{DDReal{1.0}, DDReal{}};
        const double j = static_cast<double>((i + 1) / 2);
        DDReal s, c;
        dd_sincospi(dd_mul(x, j * 0.5), s, c); // j*0.5 exact for j < 2^52
        return DDComplex{i % 2 == 1 ? c : s, DDReal{}};
    };
    return d;
}

Dictionary fourier_halfrange_dict(std::size_t n) {
    Dictionary d;
    d.label = "fourier-halfrange";
    d.count = n + 1;
    d.dim_hint = n + 1;
    d.lo = -1.0;
    d.hi = 1.0;
    d.is_complex = true;
    d.rho_density = [](double) { return 0.5; };
    d.eval = [](std::size_t i, double x) {
        const double arg = double(i) * 3.14159265358979323846 * x / 2.0;
        return std::complex<double>(std::cos(arg), std::sin(arg));
    };
    d.eval_dd = [](std::size_t i, DDReal x) {
        DDReal s, c;
        dd_sincospi(dd_mul(x, double(i) * 0.5), s, c);
        return DDComplex{c, s};
    };
    return d;
}

ArnoldiBasis stieltjes_orthonormalize(std::size_t n,
                                      const std::function<std::complex<double>(double)>& shift,
                                      const std::string& shift_label,
                                      const std::vector<double>& nodes,
                                      const std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("stieltjes_orthonormalize: n >= 1 required");
    if (nodes.size() != weights.size() || nodes.empty())
        throw std::invalid_argument("stieltjes_orthonormalize: bad grid");
    const std::size_t l = nodes.size();
    using cd = std::complex<double>;

    auto inner = [&](const std::vector<cd>& f, const std::vector<cd>& g) {
        cd s{};
        for (std::size_t j = 0; j < l; ++j) s += weights[j] * std::conj(f[j]) * g[j];
        return s;
    };

    ArnoldiBasis b;
    b.shift_label = shift_label;
    b.nodes = nodes;
    b.weights = weights;
    b.shift = shift;
    b.columns = CMatrix(l, n);
    b.h = CMatrix(n + 1, n);

    std::vector<cd> v(l, cd(1.0, 0.0));
    b.norm0 = std::sqrt(std::abs(inner(v, v)));
    if (b.norm0 == 0.0) throw ArnoldiBreakdownError(0);
    for (std::size_t j = 0; j < l; ++j) b.columns(j, 0) = v[j] / b.norm0;
    const double breakdown_tol = 1e-14 * b.norm0;

    std::vector<cd> svals(l);
    for (std::size_t j = 0; j < l; ++j) {
        svals[j] = shift(nodes[j]);
        if (std::abs(svals[j]) != 0.0) b.is_complex |= svals[j].imag() != 0.0;
    }

    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 0; j < l; ++j) v[j] = svals[j] * b.columns(j, i - 1);
        // modified Gram-Schmidt with one reorthogonalization pass
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < i; ++k) {
                std::vector<cd> qk(l);
                for (std::size_t j = 0; j < l; ++j) qk[j] = b.columns(j, k);
                const cd coef = inner(qk, v);
                b.h(k, i - 1) += coef;
                for (std::size_t j = 0; j < l; ++j) v[j] -= coef * qk[j];
            }
        }
        const double nv = std::sqrt(std::abs(inner(v, v)));
        if (nv <= breakdown_tol) throw ArnoldiBreakdownError(i);
        b.h(i, i - 1) = cd(nv, 0.0);
        for (std::size_t j = 0; j < l; ++j) b.columns(j, i) = v[j] / nv;
    }
    return b;
}

std::complex<double> arnoldi_eval(const ArnoldiBasis& basis, std::size_t i, double x) {
    const std::size_t n = basis.size();
    if (i >= n) throw std::out_of_range("arnoldi_eval: index out of range");
    using cd = std::complex<double>;
    std::vector<cd> q(i + 1);
    q[0] = cd(1.0, 0.0) / basis.norm0;
    const cd sx = basis.shift(x);
    for (std::size_t k = 1; k <= i; ++k) {
        cd v = sx * q[k - 1];
        for (std::size_t j = 0; j < k; ++j) v -= basis.h(j, k - 1) * q[j];
        q[k] = v / basis.h(k, k - 1);
    }
    return q[i];
}

Dictionary arnoldi_dict(std::shared_ptr<const ArnoldiBasis> basis, double lo, double hi) {
    Dictionary d;
    d.label = "arnoldi:" + basis->shift_label;
    d.count = basis->size();
    d.dim_hint = basis->size();
    d.lo = lo;
    d.hi = hi;
    d.is_complex = basis->is_complex;
    d.rho_density = [lo, hi](double) { return 1.0 / (hi - lo); };
    d.eval = [basis](std::size_t i, double x) { return arnoldi_eval(*basis, i, x); };
    d.eval_dd = [basis](std::size_t i, DDReal x) {
        const auto v = arnoldi_eval(*basis, i, x.to_double());
        return DDComplex{DDReal{v.real()}, DDReal{v.imag()}};
    };
    return d;
}

} // namespace fna
