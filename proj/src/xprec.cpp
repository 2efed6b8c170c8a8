#include "fna/xprec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fna/kernels.hpp"

namespace fna {

DDReal dd_frobenius(const DDMatrix& A) {
    DDReal s{};
    for (std::size_t i = 0; i < A.rows; ++i)
        s = dd_add(s, kernels::dot_dd(A.row_hi(i), A.row_lo(i), A.row_hi(i), A.row_lo(i), A.cols));
    return dd_sqrt(s);
}

DDReal dd_trace(const DDMatrix& A) {
    DDReal s{};
    for (std::size_t i = 0; i < A.rows && i < A.cols; ++i) s = dd_add(s, A.get(i, i));
    return s;
}

namespace {

constexpr int kMaxSweeps = 30;

// Rutishauser rotation for the 2x2 block [[app, apq], [apq, aqq]].
void jacobi_angle(const DDReal& app, const DDReal& aqq, const DDReal& apq,
                  DDReal& c, DDReal& s, DDReal& t) {
    const DDReal theta = dd_div(dd_sub(aqq, app), dd_mul(apq, 2.0));
    const DDReal abs_theta = dd_abs(theta);
    t = dd_div(DDReal{1.0}, dd_add(abs_theta, dd_sqrt(dd_add(dd_mul(theta, theta), DDReal{1.0}))));
    if (theta.hi < 0.0) t = dd_neg(t);
    c = dd_div(DDReal{1.0}, dd_sqrt(dd_add(dd_mul(t, t), DDReal{1.0})));
    s = dd_mul(t, c);
}

} // namespace

DdEigResult dd_sym_eig(const DDMatrix& S, bool want_vectors) {
    if (S.rows != S.cols) throw std::invalid_argument("dd_sym_eig: matrix not square");
    const std::size_t n = S.rows;
    DDMatrix a = S;
    DDMatrix vt;
    if (want_vectors) {
        vt = DDMatrix(n, n);
        for (std::size_t i = 0; i < n; ++i) vt.set(i, i, DDReal{1.0});
    }

    int sweeps = 0;
    for (;; ++sweeps) {
        if (sweeps >= kMaxSweeps)
            throw IterationCapError("dd_sym_eig: Jacobi sweep cap (30) exceeded");
        std::size_t rotations = 0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const DDReal apq = a.get(p, q);
                const DDReal app = a.get(p, p);
                const DDReal aqq = a.get(q, q);
                // Converged relative to the local scale (geometric mean of
                // the two diagonal entries); keeps small eigenvalues of
                // graded PSD matrices accurate.
                const double gate = std::max<double>(4.0, double(n)) * kDdEps *
                                    std::sqrt(std::abs(app.to_double()) *
                                              std::abs(aqq.to_double()));
                if (std::abs(apq.to_double()) <= gate || apq.to_double() == 0.0) continue;
                ++rotations;
                DDReal c, s, t;
                jacobi_angle(app, aqq, apq, c, s, t);
                // Rows p and q of the full symmetric matrix carry all the
                // information; columns are restored by mirroring.
                kernels::rot_dd(a.row_hi(p), a.row_lo(p), a.row_hi(q), a.row_lo(q), n, c, s);
                const DDReal tapq = dd_mul(t, apq);
                a.set(p, p, dd_sub(app, tapq));
                a.set(q, q, dd_add(aqq, tapq));
                a.set(p, q, DDReal{});
                a.set(q, p, DDReal{});
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    a.set(k, p, a.get(p, k));
                    a.set(k, q, a.get(q, k));
                }
                if (want_vectors)
                    kernels::rot_dd(vt.row_hi(p), vt.row_lo(p), vt.row_hi(q), vt.row_lo(q), n, c, s);
            }
        }
        if (rotations == 0) break;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a.get(i, i) < a.get(j, j);
    });

    DdEigResult res;
    res.sweeps = sweeps;
    res.values = DDVector(n);
    for (std::size_t i = 0; i < n; ++i) res.values.set(i, a.get(order[i], order[i]));
    if (want_vectors) {
        res.vectors_t = DDMatrix(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                res.vectors_t.set(i, j, vt.get(order[i], j));
    }
    return res;
}

DDMatrix dd_cholesky(const DDMatrix& S, const DDReal& shift) {
    if (S.rows != S.cols) throw std::invalid_argument("dd_cholesky: matrix not square");
    const std::size_t n = S.rows;
    DDMatrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const DDReal dot = kernels::dot_dd(l.row_hi(i), l.row_lo(i),
                                               l.row_hi(j), l.row_lo(j), j);
            DDReal v = dd_sub(S.get(i, j), dot);
            if (i == j) v = dd_add(v, shift);
            if (i == j) {
                if (v.to_double() <= 0.0)
                    throw NotPositiveDefiniteError(i, v.to_double());
                l.set(i, i, dd_sqrt(v));
            } else {
                l.set(i, j, dd_div(v, l.get(j, j)));
            }
        }
    }
    return l;
}

DDVector dd_chol_forward(const DDMatrix& L, const DDVector& b) {
    const std::size_t n = L.rows;
    DDVector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const DDReal dot = kernels::dot_dd(L.row_hi(i), L.row_lo(i), y.hi.data(), y.lo.data(), i);
        y.set(i, dd_div(dd_sub(b.get(i), dot), L.get(i, i)));
    }
    return y;
}

DDVector dd_chol_backward(const DDMatrix& L, const DDVector& y) {
    const std::size_t n = L.rows;
    DDVector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        DDReal dot{};
        for (std::size_t k = ii + 1; k < n; ++k)
            dot = dd_add(dot, dd_mul(L.get(k, ii), x.get(k)));
        x.set(ii, dd_div(dd_sub(y.get(ii), dot), L.get(ii, ii)));
    }
    return x;
}

DDVector dd_cholesky_solve(const DDMatrix& S, const DDReal& shift, const DDVector& rhs) {
    if (S.rows != rhs.size()) throw std::invalid_argument("dd_cholesky_solve: size mismatch");
    const DDMatrix l = dd_cholesky(S, shift);
    return dd_chol_backward(l, dd_chol_forward(l, rhs));
}

DDVector dd_gen_sym_eig(const DDMatrix& A, const DDMatrix& B, const DDReal& shift_b) {
    if (A.rows != A.cols || B.rows != B.cols || A.rows != B.rows)
        throw std::invalid_argument("dd_gen_sym_eig: dimension mismatch");
    const std::size_t n = A.rows;
    const DDMatrix l = dd_cholesky(B, shift_b);

    // U = L^-1 A (A symmetric, so its columns are its rows)
    DDMatrix u(n, n);
    DDVector col(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) col.set(i, A.get(j, i));
        const DDVector uj = dd_chol_forward(l, col);
        for (std::size_t i = 0; i < n; ++i) u.set(i, j, uj.get(i));
    }
    // W^T = L^-1 U^T, i.e. forward-solve each row of U
    DDMatrix w(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) col.set(i, u.get(j, i));
        const DDVector wj = dd_chol_forward(l, col);
        for (std::size_t i = 0; i < n; ++i) w.set(i, j, wj.get(i));
    }
    // Symmetrize against roundoff before the eigensolve.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const DDReal avg = dd_mul(dd_add(w.get(i, j), w.get(j, i)), 0.5);
            w.set(i, j, avg);
            w.set(j, i, avg);
        }
    return dd_sym_eig(w, false).values;
}

DDMatrix dd_realify(const DDMatrix& re, const DDMatrix& im) {
    if (re.rows != im.rows || re.cols != im.cols)
        throw std::invalid_argument("dd_realify: dimension mismatch");
    const std::size_t n = re.rows, m = re.cols;
    DDMatrix out(2 * n, 2 * m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const DDReal r = re.get(i, j), z = im.get(i, j);
            out.set(i, j, r);
            out.set(n + i, m + j, r);
            out.set(i, m + j, dd_neg(z));
            out.set(n + i, j, z);
        }
    return out;
}

} // namespace fna
