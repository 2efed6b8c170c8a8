#include "fna/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fna {

namespace {

constexpr int kMaxSweeps = 30;
constexpr double kEpsDp = 2.220446049250313e-16;

template <typename T>
T phase_of(const T& x);
template <>
double phase_of(const double& x) { return x < 0.0 ? -1.0 : 1.0; }
template <>
std::complex<double> phase_of(const std::complex<double>& x) {
    const double m = std::abs(x);
    return m == 0.0 ? std::complex<double>(1.0, 0.0) : x / m;
}

} // namespace

template <typename T>
QrResultT<T> householder_qr(const Mat<T>& a) {
    const std::size_t m = a.rows, n = a.cols;
    if (m < n) throw std::invalid_argument("householder_qr: requires rows >= cols");
    Mat<T> w = a;
    std::vector<std::vector<T>> reflectors(n);

    for (std::size_t k = 0; k < n; ++k) {
        double nx = 0.0;
        for (std::size_t i = k; i < m; ++i) nx += std::norm(std::complex<double>(w(i, k)));
        nx = std::sqrt(nx);
        std::vector<T> v(m - k);
        for (std::size_t i = k; i < m; ++i) v[i - k] = w(i, k);
        const T alpha = -phase_of(v[0]) * T(nx);
        v[0] -= alpha;
        double beta = 0.0;
        for (const T& vi : v) beta += std::norm(std::complex<double>(vi));
        if (beta > 0.0) {
            for (std::size_t j = k; j < n; ++j) {
                T dot{};
                for (std::size_t i = k; i < m; ++i) dot += conj_of(v[i - k]) * w(i, j);
                dot *= T(2.0 / beta);
                for (std::size_t i = k; i < m; ++i) w(i, j) -= v[i - k] * dot;
            }
            w(k, k) = alpha;
        }
        reflectors[k] = std::move(v);
    }

    QrResultT<T> res;
    res.r = Mat<T>(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) res.r(i, j) = w(i, j);

    // Accumulate the thin Q by applying reflectors to I in reverse.
    res.q = Mat<T>(m, n);
    for (std::size_t j = 0; j < n; ++j) res.q(j, j) = T(1.0);
    for (std::size_t kk = n; kk-- > 0;) {
        const auto& v = reflectors[kk];
        double beta = 0.0;
        for (const T& vi : v) beta += std::norm(std::complex<double>(vi));
        if (beta == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            T dot{};
            for (std::size_t i = kk; i < m; ++i) dot += conj_of(v[i - kk]) * res.q(i, j);
            dot *= T(2.0 / beta);
            for (std::size_t i = kk; i < m; ++i) res.q(i, j) -= v[i - kk] * dot;
        }
    }
    return res;
}

namespace {

// One-sided Jacobi on the columns of w (rows >= cols); overwrites w with U
// and fills v with the accumulated right vectors, s descending.
template <typename T>
void jacobi_svd_core(Mat<T>& w, Mat<T>& v, std::vector<double>& s) {
    const std::size_t m = w.rows, n = w.cols;
    v = Mat<T>::identity(n);

    // Cosine tolerance scaled by the dimension (gesvj-style). Columns that
    // are pure rounding noise settle at cosines ~ sqrt(m)*eps and would spin
    // forever under a stricter gate; the quadratic convergence of Jacobi
    // makes the singular value error ~ tol^2, far below eps.
    const double tol = double(std::max(m, n)) * kEpsDp;

    int sweeps = 0;
    for (;; ++sweeps) {
        if (sweeps >= kMaxSweeps)
            throw std::runtime_error("svd: one-sided Jacobi sweep cap (30) exceeded");
        std::size_t rotations = 0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0;
                T apq{};
                for (std::size_t i = 0; i < m; ++i) {
                    app += std::norm(std::complex<double>(w(i, p)));
                    aqq += std::norm(std::complex<double>(w(i, q)));
                    apq += conj_of(w(i, p)) * w(i, q);
                }
                const double g = std::abs(std::complex<double>(apq));
                if (g == 0.0 || g <= tol * std::sqrt(app * aqq)) continue;
                ++rotations;
                // Fold out the phase of the coupling, then a real rotation.
                const T phi = phase_of(apq);
                const T cphi = conj_of(phi);
                const double gamma = (aqq - app) / (2.0 * g);
                const double t = (gamma >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(gamma) + std::sqrt(1.0 + gamma * gamma));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const T wp = w(i, p), wq = w(i, q);
                    w(i, p) = T(cs) * wp - T(sn) * (cphi * wq);
                    w(i, q) = T(sn) * (phi * wp) + T(cs) * wq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const T vp = v(i, p), vq = v(i, q);
                    v(i, p) = T(cs) * vp - T(sn) * (cphi * vq);
                    v(i, q) = T(sn) * (phi * vp) + T(cs) * vq;
                }
            }
        }
        if (rotations == 0) break;
    }

    s.assign(n, 0.0);
    std::vector<std::size_t> order(n);
    for (std::size_t j = 0; j < n; ++j) {
        double nj = 0.0;
        for (std::size_t i = 0; i < m; ++i) nj += std::norm(std::complex<double>(w(i, j)));
        s[j] = std::sqrt(nj);
        order[j] = j;
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return s[i] > s[j]; });

    Mat<T> u(m, n), vo(n, n);
    std::vector<double> so(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        so[j] = s[src];
        for (std::size_t i = 0; i < n; ++i) vo(i, j) = v(i, src);
        if (so[j] > 0.0)
            for (std::size_t i = 0; i < m; ++i) u(i, j) = w(i, src) * T(1.0 / so[j]);
    }
    // Exact-zero singular values: complete U to an orthonormal set.
    for (std::size_t j = 0; j < n; ++j) {
        if (so[j] > 0.0) continue;
        for (std::size_t cand = 0; cand < m; ++cand) {
            std::vector<T> e(m, T{});
            e[cand] = T(1.0);
            for (std::size_t k = 0; k < n; ++k) {
                T dot{};
                for (std::size_t i = 0; i < m; ++i) dot += conj_of(u(i, k)) * e[i];
                for (std::size_t i = 0; i < m; ++i) e[i] -= u(i, k) * dot;
            }
            const double ne = norm2(e);
            if (ne > 0.5) {
                for (std::size_t i = 0; i < m; ++i) u(i, j) = e[i] * T(1.0 / ne);
                break;
            }
        }
    }
    w = std::move(u);
    v = std::move(vo);
    s = std::move(so);
}

} // namespace

template <typename T>
SvdResultT<T> svd(const Mat<T>& a) {
    const std::size_t m = a.rows, n = a.cols;
    if (m < n) {
        SvdResultT<T> t = svd(adjoint(a));
        return {t.v, t.s, t.u};
    }
    SvdResultT<T> res;
    if (m > n) {
        // QR first: Jacobi then runs on the small square factor.
        QrResultT<T> qr = householder_qr(a);
        Mat<T> w = qr.r;
        jacobi_svd_core(w, res.v, res.s);
        res.u = matmul(qr.q, w);
    } else {
        Mat<T> w = a;
        jacobi_svd_core(w, res.v, res.s);
        res.u = std::move(w);
    }
    return res;
}

EigResult sym_eig(const Matrix& s) {
    if (s.rows != s.cols) throw std::invalid_argument("sym_eig: matrix not square");
    const std::size_t n = s.rows;
    double amax = 0.0, asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            amax = std::max(amax, std::abs(s(i, j)));
            asym = std::max(asym, std::abs(s(i, j) - s(j, i)));
        }
    if (asym > 1e-12 * std::max(amax, 1e-300))
        throw std::invalid_argument("sym_eig: matrix asymmetric beyond tolerance");

    Matrix a = s;
    Matrix vt = Matrix::identity(n); // rows carry eigenvectors while iterating
    int sweeps = 0;
    for (;; ++sweeps) {
        if (sweeps >= kMaxSweeps)
            throw std::runtime_error("sym_eig: Jacobi sweep cap (30) exceeded");
        std::size_t rotations = 0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                const double app = a(p, p), aqq = a(q, q);
                const double gate =
                    double(n) * kEpsDp * std::sqrt(std::abs(app) * std::abs(aqq));
                if (apq == 0.0 || std::abs(apq) <= gate) continue;
                ++rotations;
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = c * t;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(p, k), akq = a(q, k);
                    a(p, k) = c * akp - sn * akq;
                    a(q, k) = sn * akp + c * akq;
                }
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    a(k, p) = a(p, k);
                    a(k, q) = a(q, k);
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vp = vt(p, k), vq = vt(q, k);
                    vt(p, k) = c * vp - sn * vq;
                    vt(q, k) = sn * vp + c * vq;
                }
            }
        if (rotations == 0) break;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
    EigResult res;
    res.values.resize(n);
    res.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        res.values[j] = a(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) res.vectors(i, j) = vt(order[j], i);
    }
    return res;
}

namespace {

Matrix cholesky_lower(const Matrix& b) {
    const std::size_t n = b.rows;
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = b(i, j);
            for (std::size_t k = 0; k < j; ++k) sum -= l(i, k) * l(j, k);
            if (i == j) {
                if (sum <= 0.0) throw CholeskyError(i, sum);
                l(i, i) = std::sqrt(sum);
            } else {
                l(i, j) = sum / l(j, j);
            }
        }
    return l;
}

} // namespace

std::vector<double> gen_sym_eig(const Matrix& a, const Matrix& b) {
    if (a.rows != a.cols || b.rows != b.cols || a.rows != b.rows)
        throw std::invalid_argument("gen_sym_eig: dimension mismatch");
    const std::size_t n = a.rows;
    const Matrix l = cholesky_lower(b);

    // W = L^-1 A L^-T via two rounds of triangular solves
    Matrix u(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            double sum = a(i, j);
            for (std::size_t k = 0; k < i; ++k) sum -= l(i, k) * u(k, j);
            u(i, j) = sum / l(i, i);
        }
    }
    Matrix w(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double sum = u(i, j);
            for (std::size_t k = 0; k < j; ++k) sum -= l(j, k) * w(i, k);
            w(i, j) = sum / l(j, j);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double avg = 0.5 * (w(i, j) + w(j, i));
            w(i, j) = w(j, i) = avg;
        }
    return sym_eig(w).values;
}

template <typename T>
std::vector<T> tsvd_apply(const SvdResultT<T>& f, double eps, const std::vector<T>& b) {
    if (eps < 0.0) throw std::invalid_argument("tsvd_apply: eps must be nonnegative");
    if (b.size() != f.u.rows) throw std::invalid_argument("tsvd_apply: shape mismatch");
    std::vector<T> x(f.v.rows, T{});
    for (std::size_t i = 0; i < f.s.size(); ++i) {
        const double sig = f.s[i];
        const bool keep = sig > eps || (eps > 0.0 && sig == eps);
        if (!keep) continue;
        T coef{};
        for (std::size_t r = 0; r < f.u.rows; ++r) coef += conj_of(f.u(r, i)) * b[r];
        coef *= T(1.0 / sig);
        for (std::size_t r = 0; r < f.v.rows; ++r) x[r] += f.v(r, i) * coef;
    }
    return x;
}

template <typename T>
std::vector<T> tikhonov_apply(const SvdResultT<T>& f, double eps, const std::vector<T>& b) {
    if (eps <= 0.0) throw std::invalid_argument("tikhonov_apply: eps must be positive");
    if (b.size() != f.u.rows) throw std::invalid_argument("tikhonov_apply: shape mismatch");
    std::vector<T> x(f.v.rows, T{});
    for (std::size_t i = 0; i < f.s.size(); ++i) {
        const double sig = f.s[i];
        if (sig == 0.0) continue;
        T coef{};
        for (std::size_t r = 0; r < f.u.rows; ++r) coef += conj_of(f.u(r, i)) * b[r];
        coef *= T(sig / (sig * sig + eps * eps));
        for (std::size_t r = 0; r < f.v.rows; ++r) x[r] += f.v(r, i) * coef;
    }
    return x;
}

template <typename T>
double skeel_cond(const Mat<T>& r) {
    const std::size_t n = r.rows;
    if (r.rows != r.cols) throw std::invalid_argument("skeel_cond: matrix not square");
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(std::complex<double>(r(i, i))) == 0.0)
            throw std::domain_error("skeel_cond: exactly zero diagonal entry");

    Mat<T> rinv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t ii = j + 1; ii-- > 0;) {
            T sum = (ii == j) ? T(1.0) : T{};
            for (std::size_t k = ii + 1; k <= j; ++k) sum -= r(ii, k) * rinv(k, j);
            rinv(ii, j) = sum / r(ii, ii);
        }
    }
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = i; j < n; ++j) {
            double m = 0.0;
            for (std::size_t k = i; k <= j; ++k)
                m += std::abs(std::complex<double>(rinv(i, k))) *
                     std::abs(std::complex<double>(r(k, j)));
            row += m;
        }
        best = std::max(best, row);
    }
    return best;
}

template QrResultT<double> householder_qr(const Mat<double>&);
template QrResultT<std::complex<double>> householder_qr(const Mat<std::complex<double>>&);
template SvdResultT<double> svd(const Mat<double>&);
template SvdResultT<std::complex<double>> svd(const Mat<std::complex<double>>&);
template std::vector<double> tsvd_apply(const SvdResultT<double>&, double,
                                        const std::vector<double>&);
template std::vector<std::complex<double>> tsvd_apply(const SvdResultT<std::complex<double>>&,
                                                      double,
                                                      const std::vector<std::complex<double>>&);
template std::vector<double> tikhonov_apply(const SvdResultT<double>&, double,
                                            const std::vector<double>&);
template std::vector<std::complex<double>> tikhonov_apply(
    const SvdResultT<std::complex<double>>&, double, const std::vector<std::complex<double>>&);
template double skeel_cond(const Mat<double>&);
template double skeel_cond(const Mat<std::complex<double>>&);

} // namespace fna
