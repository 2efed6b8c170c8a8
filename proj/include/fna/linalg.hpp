#pragma once

#include <stdexcept>
#include <vector>

#include "fna/matrix.hpp"

namespace fna {

template <typename T>
struct QrResultT {
    Mat<T> q; // m x n, orthonormal columns
    Mat<T> r; // n x n, upper triangular
};
using QrResult = QrResultT<double>;
using CQrResult = QrResultT<std::complex<double>>;

template <typename T>
struct SvdResultT {
    Mat<T> u;              // m x n
    std::vector<double> s; // descending, nonnegative
    Mat<T> v;              // n x n
};
using SvdResult = SvdResultT<double>;
using CSvdResult = SvdResultT<std::complex<double>>;

struct EigResult {
    std::vector<double> values; // ascending
    Matrix vectors;             // column i is the eigenvector of values[i]
};

struct CholeskyError : std::runtime_error {
    std::size_t pivot_index;
    double pivot_value;
    CholeskyError(std::size_t idx, double piv)
        : std::runtime_error("Cholesky failed: pivot " + std::to_string(idx) + " = " +
                             std::to_string(piv)),
          pivot_index(idx), pivot_value(piv) {}
};

// Householder QR, thin form. Requires rows >= cols.
template <typename T>
QrResultT<T> householder_qr(const Mat<T>& a);

// One-sided Jacobi SVD (preceded by a QR step for tall matrices). Chosen over
// bidiagonalization for its relative accuracy on small singular values.
template <typename T>
SvdResultT<T> svd(const Mat<T>& a);

// Cyclic Jacobi for symmetric matrices; input checked for symmetry.
EigResult sym_eig(const Matrix& s);

// Eigenvalues of (A, B) with B = L L^T Cholesky reduction. B must be
// positive definite; failures carry the offending pivot so callers can fall
// back to the dd route or a diagonal shift.
std::vector<double> gen_sym_eig(const Matrix& a, const Matrix& b);

// x = sum_{sigma_i > eps} v_i sigma_i^-1 (u_i* b). Ties at exactly eps are
// kept, matching the truncated pseudo-inverse convention; eps = 0 gives the
// plain pseudo-inverse.
template <typename T>
std::vector<T> tsvd_apply(const SvdResultT<T>& f, double eps, const std::vector<T>& b);

// x = sum_i v_i sigma_i/(sigma_i^2+eps^2) (u_i* b), eps > 0.
template <typename T>
std::vector<T> tikhonov_apply(const SvdResultT<T>& f, double eps, const std::vector<T>& b);

// || |R^-1| |R| ||_inf for upper-triangular nonsingular R.
template <typename T>
double skeel_cond(const Mat<T>& r);

} // namespace fna
