#include "fna/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "fna/kernels.hpp"
#include "fna/rng.hpp"

namespace fna {

ChristoffelEngine::ChristoffelEngine(const Dictionary& dict, const DDMatrix& gram,
                                     double zero_tol)
    : dict_(dict), gram_(gram), zero_tol_(zero_tol) {
    if (gram.rows != gram.cols || gram.rows != dict.count)
        throw std::invalid_argument("ChristoffelEngine: Gram size mismatch");
    eig_ = dd_sym_eig(gram, true);
    const std::size_t n = gram.rows;
    lambda_max_ = eig_.values.get(n - 1).to_double();
    if (lambda_max_ <= 0.0)
        throw OutOfNumericRangeError("ChristoffelEngine: Gram has no positive eigenvalues",
                                     lambda_max_);
    sigmas_.resize(n);
    smallest_retained_ = lambda_max_;
    for (std::size_t i = 0; i < n; ++i) {
        const double lam = eig_.values.get(n - 1 - i).to_double();
        sigmas_[i] = std::sqrt(std::max(lam, 0.0));
        if (lam >= zero_tol_ * lambda_max_) smallest_retained_ = std::min(smallest_retained_, lam);
    }
}

bool ChristoffelEngine::plain_computable() const {
    return smallest_retained_ >= 1e-25 * lambda_max_;
}

DDVector ChristoffelEngine::phi_dd(double x) const {
    // stacked [Re phi ; Im phi]; the two blocks are used as separate
    // right-hand sides of real quadratic forms
    const std::size_t n = dict_.count;
    DDVector v(dict_.is_complex ? 2 * n : n);
    for (std::size_t i = 0; i < n; ++i) {
        const DDComplex f = dict_.eval_dd(i, DDReal{x});
        v.set(i, f.re);
        if (dict_.is_complex) v.set(n + i, f.im);
    }
    return v;
}

double ChristoffelEngine::plain(double x) const {
    if (!plain_computable())
        throw OutOfNumericRangeError(
            "christoffel: smallest retained eigenvalue " + std::to_string(smallest_retained_) +
                " below 1e-25 * lambda_max; k_n is not dd-computable",
            smallest_retained_);
    const std::size_t n = dict_.count;
    const DDVector phi = phi_dd(x);
    const double floor = zero_tol_ * lambda_max_;
    DDReal acc{};
    for (std::size_t e = 0; e < n; ++e) {
        const DDReal lam = eig_.values.get(e);
        if (lam.to_double() < floor) continue;
        DDReal pr = kernels::dot_dd(eig_.vectors_t.row_hi(e), eig_.vectors_t.row_lo(e),
                                    phi.hi.data(), phi.lo.data(), n);
        DDReal term = dd_mul(pr, pr);
        if (dict_.is_complex) {
            DDReal pi2 = kernels::dot_dd(eig_.vectors_t.row_hi(e), eig_.vectors_t.row_lo(e),
                                         phi.hi.data() + n, phi.lo.data() + n, n);
            term = dd_add(term, dd_mul(pi2, pi2));
        }
        acc = dd_add(acc, dd_div(term, lam));
    }
    return acc.to_double();
}

double ChristoffelEngine::ridge(double eps, double x) {
    if (!(eps > 0.0)) throw std::invalid_argument("num_christoffel: eps must be positive");
    if (eps * eps < 1e-30 * lambda_max_)
        throw OutOfNumericRangeError(
            "num_christoffel: eps^2 below 1e-30 * lambda_max, outside dd range", eps * eps);
    auto it = chol_cache_.find(eps);
    if (it == chol_cache_.end()) {
        auto l = std::make_shared<DDMatrix>(
            dd_cholesky(gram_, dd_mul(DDReal{eps}, DDReal{eps})));
        it = chol_cache_.emplace(eps, std::move(l)).first;
    }
    const DDMatrix& l = *it->second;
    const std::size_t n = dict_.count;
    const DDVector phi = phi_dd(x);

    auto form = [&](std::size_t offset) {
        DDVector rhs(n);
        for (std::size_t i = 0; i < n; ++i)
            rhs.set(i, DDReal{phi.hi[offset + i], phi.lo[offset + i]});
        const DDVector y = dd_chol_backward(l, dd_chol_forward(l, rhs));
        return kernels::dot_dd(rhs.hi.data(), rhs.lo.data(), y.hi.data(), y.lo.data(), n);
    };
    DDReal k = form(0);
    if (dict_.is_complex) k = dd_add(k, form(n));
    return k.to_double();
}

double ChristoffelEngine::ridge_sigma_sum(double eps, double x) const {
    const std::size_t n = dict_.count;
    const DDVector phi = phi_dd(x);
    const DDReal eps2 = dd_mul(DDReal{eps}, DDReal{eps});
    DDReal acc{};
    for (std::size_t e = 0; e < n; ++e) {
        DDReal lam = eig_.values.get(e);
        if (lam.to_double() < 0.0) lam = DDReal{}; // PSD floor
        DDReal pr = kernels::dot_dd(eig_.vectors_t.row_hi(e), eig_.vectors_t.row_lo(e),
                                    phi.hi.data(), phi.lo.data(), n);
        DDReal term = dd_mul(pr, pr);
        if (dict_.is_complex) {
            DDReal pi2 = kernels::dot_dd(eig_.vectors_t.row_hi(e), eig_.vectors_t.row_lo(e),
                                         phi.hi.data() + n, phi.lo.data() + n, n);
            term = dd_add(term, dd_mul(pi2, pi2));
        }
        // sigma^2/(sigma^2+eps^2) |u(x)|^2 == |<phi, v>|^2 / (lambda + eps^2)
        acc = dd_add(acc, dd_div(term, dd_add(lam, eps2)));
    }
    return acc.to_double();
}

double ChristoffelEngine::u_sq(std::size_t i, double x) const {
    const std::size_t n = dict_.count;
    if (i >= n) throw std::out_of_range("u_sq: index out of range");
    const std::size_t e = n - 1 - i; // descending -> ascending
    const DDReal lam = eig_.values.get(e);
    if (lam.to_double() < zero_tol_ * lambda_max_)
        throw OutOfNumericRangeError("u_sq: eigenvalue below the dd floor", lam.to_double());
    const DDVector phi = phi_dd(x);
    DDReal pr = kernels::dot_dd(eig_.vectors_t.row_hi(e), eig_.vectors_t.row_lo(e),
                                phi.hi.data(), phi.lo.data(), n);
    DDReal term = dd_mul(pr, pr);
    if (dict_.is_complex) {
        DDReal pi2 = kernels::dot_dd(eig_.vectors_t.row_hi(e), eig_.vectors_t.row_lo(e),
                                     phi.hi.data() + n, phi.lo.data() + n, n);
        term = dd_add(term, dd_mul(pi2, pi2));
    }
    return dd_div(term, lam).to_double();
}

double numerical_dimension(const std::vector<double>& sigmas, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("numerical_dimension: eps must be positive");
    double acc = 0.0;
    for (double s : sigmas) {
        if (s < 0.0) throw std::invalid_argument("numerical_dimension: negative singular value");
        const double s2 = s * s;
        acc += s2 / (s2 + eps * eps);
    }
    return acc;
}

namespace {

DensityTable tabulate(const std::vector<double>& grid, std::vector<double> raw,
                      const std::function<double(double)>& rho_density,
                      const std::string& label) {
    DensityTable t;
    t.grid = grid;
    t.lo = grid.front();
    t.hi = grid.back();
    t.label = label;
    t.rho.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) t.rho[i] = rho_density(grid[i]);
    // trapezoid normalization
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        total += 0.5 * (raw[i] + raw[i + 1]) * (grid[i + 1] - grid[i]);
    if (total <= 0.0) throw std::runtime_error("density table: nonpositive mass");
    t.density.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) t.density[i] = raw[i] / total;
    t.cdf.assign(grid.size(), 0.0);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        t.cdf[i + 1] = t.cdf[i] + 0.5 * (t.density[i] + t.density[i + 1]) * (grid[i + 1] - grid[i]);
    const double scale = t.cdf.back();
    for (double& c : t.cdf) c /= scale;
    for (double& d : t.density) d /= scale;
    return t;
}

} // namespace

DensityTable optimal_density(ChristoffelEngine& engine, DensityKind kind, double eps,
                             std::size_t grid_points) {
    const Dictionary& d = engine.dict();
    // Chebyshev-spaced grid: Christoffel functions of weighted sets can form
    // very narrow spikes at the domain endpoints, and a uniform grid inflates
    // their trapezoid mass by orders of magnitude.
    std::vector<double> grid(grid_points), raw(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double t = std::cos(3.14159265358979323846 *
                                  (1.0 - double(i) / double(grid_points - 1)));
        grid[i] = 0.5 * (d.lo + d.hi) + 0.5 * (d.hi - d.lo) * t;
    }
    grid.front() = d.lo;
    grid.back() = d.hi;
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double k =
            kind == DensityKind::plain ? engine.plain(grid[i]) : engine.ridge(eps, grid[i]);
        raw[i] = k * d.rho_density(grid[i]);
    }
    const std::string label =
        (kind == DensityKind::plain ? "christoffel:" : "ridge:") + d.label +
        (kind == DensityKind::ridge ? ":eps=" + std::to_string(eps) : "");
    return tabulate(grid, std::move(raw), d.rho_density, label);
}

DensityTable uniform_density(double lo, double hi, std::size_t grid_points) {
    std::vector<double> grid(grid_points), raw(grid_points, 1.0);
    for (std::size_t i = 0; i < grid_points; ++i)
        grid[i] = lo + (hi - lo) * double(i) / double(grid_points - 1);
    return tabulate(grid, std::move(raw),
                    [lo, hi](double) { return 1.0 / (hi - lo); }, "uniform");
}

SampleSet draw_iid(const DensityTable& density, std::size_t m, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("draw_iid: m >= 1 required");
    Rng rng(seed);
    SampleSet s;
    s.points.resize(m);
    s.weights.resize(m);
    const auto& cdf = density.cdf;
    for (std::size_t j = 0; j < m; ++j) {
        const double u = rng.next_double();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t hi_idx = std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
        if (hi_idx == 0) hi_idx = 1;
        const std::size_t lo_idx = hi_idx - 1;
        const double seg = cdf[hi_idx] - cdf[lo_idx];
        const double frac = seg > 0.0 ? (u - cdf[lo_idx]) / seg : 0.0;
        const double x =
            density.grid[lo_idx] + frac * (density.grid[hi_idx] - density.grid[lo_idx]);
        const double pdf =
            density.density[lo_idx] + frac * (density.density[hi_idx] - density.density[lo_idx]);
        const double rho = density.rho[lo_idx] + frac * (density.rho[hi_idx] - density.rho[lo_idx]);
        s.points[j] = x;
        s.weights[j] = pdf > 0.0 ? rho / pdf : 0.0;
    }
    s.provenance = density.label + ":xoshiro256++:seed=" + std::to_string(seed);
    return s;
}

PointKind point_kind_from_string(const std::string& s) {
    if (s == "legendre") return PointKind::legendre;
    if (s == "chebyshev") return PointKind::chebyshev;
    if (s == "clustered") return PointKind::clustered;
    if (s == "uniform-grid") return PointKind::uniform_grid;
    throw std::invalid_argument("unknown point kind: " + s);
}

SampleSet deterministic_set(PointKind kind, std::size_t m, double lo, double hi) {
    if (m < 1) throw std::invalid_argument("deterministic_set: m >= 1 required");
    SampleSet s;
    s.points.resize(m);
    s.weights.assign(m, 1.0);
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    switch (kind) {
        case PointKind::legendre: {
            const QuadRule r = gauss_legendre(m);
            for (std::size_t j = 0; j < m; ++j) s.points[j] = c + h * r.nodes[j];
            s.provenance = "legendre-points";
            break;
        }
        case PointKind::chebyshev: {
            for (std::size_t j = 0; j < m; ++j) {
                const double t =
                    m == 1 ? 1.0 : std::cos(double(j) * 3.14159265358979323846 / double(m - 1));
                s.points[j] = c + h * t;
            }
            s.provenance = "chebyshev-points";
            break;
        }
        case PointKind::clustered: {
            for (std::size_t j = 0; j < m; ++j)
                s.points[j] = c + h * (-1.0 + 2.0 * std::pow(2.0, -double(j + 1)));
            s.provenance = "clustered-points";
            break;
        }
        case PointKind::uniform_grid: {
            for (std::size_t j = 0; j < m; ++j)
                s.points[j] = m == 1 ? c : lo + (hi - lo) * double(j) / double(m - 1);
            s.provenance = "uniform-grid";
            break;
        }
    }
    return s;
}

void export_density_csv(const DensityTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "x,density,cdf\n";
    char buf[128];
    for (std::size_t i = 0; i < table.grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", table.grid[i], table.density[i],
                      table.cdf[i]);
        out << buf;
    }
}

} // namespace fna
