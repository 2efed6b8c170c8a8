#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fna/dd.hpp"

// Double-double dense linear algebra: symmetric Jacobi eigensolver,
// Cholesky factorization/solves and the generalized symmetric-definite
// reduction. This is what makes spectra near and below eps_dp^2 (~1e-32)
// meaningful, as required for numerical-dimension and Christoffel-function
// computations at eps = 10*eps_dp.

namespace fna {

struct DDVector {
    std::vector<double> hi, lo;

    DDVector() = default;
    explicit DDVector(std::size_t n) : hi(n, 0.0), lo(n, 0.0) {}

    std::size_t size() const { return hi.size(); }
    DDReal get(std::size_t i) const { return {hi[i], lo[i]}; }
    void set(std::size_t i, const DDReal& v) { hi[i] = v.hi; lo[i] = v.lo; }
};

// Row-major, split (hi, lo) storage so rows feed the SIMD kernels directly.
struct DDMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> hi, lo;

    DDMatrix() = default;
    DDMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), hi(r * c, 0.0), lo(r * c, 0.0) {}

    DDReal get(std::size_t i, std::size_t j) const { return {hi[i * cols + j], lo[i * cols + j]}; }
    void set(std::size_t i, std::size_t j, const DDReal& v) {
        hi[i * cols + j] = v.hi;
        lo[i * cols + j] = v.lo;
    }
    double* row_hi(std::size_t i) { return hi.data() + i * cols; }
    double* row_lo(std::size_t i) { return lo.data() + i * cols; }
    const double* row_hi(std::size_t i) const { return hi.data() + i * cols; }
    const double* row_lo(std::size_t i) const { return lo.data() + i * cols; }
};

struct DdEigResult {
    DDVector values;     // ascending
    DDMatrix vectors_t;  // row i is the eigenvector of values[i]; empty unless requested
    int sweeps = 0;
};

struct NotPositiveDefiniteError : std::runtime_error {
    std::size_t pivot_index;
    double pivot_value;
    NotPositiveDefiniteError(std::size_t idx, double piv)
        : std::runtime_error("matrix not positive definite: pivot " + std::to_string(idx) +
                             " = " + std::to_string(piv)),
          pivot_index(idx), pivot_value(piv) {}
};

struct IterationCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Cyclic two-sided Jacobi. Sweeps are capped at 30; exceeding the cap
// throws, it never returns a half-converged spectrum.
DdEigResult dd_sym_eig(const DDMatrix& S, bool want_vectors = false);

// Lower Cholesky factor of S + shift*I.
DDMatrix dd_cholesky(const DDMatrix& S, const DDReal& shift);

// Solve (S + shift*I) x = rhs via Cholesky.
DDVector dd_cholesky_solve(const DDMatrix& S, const DDReal& shift, const DDVector& rhs);

DDVector dd_chol_forward(const DDMatrix& L, const DDVector& b);  // L y = b
DDVector dd_chol_backward(const DDMatrix& L, const DDVector& y); // L^T x = y

// Eigenvalues (ascending) of the pencil (A, B + shift_b*I); B must be
// positive definite after the shift. Reduction B = L L^T, then Jacobi on
// L^-1 A L^-T.
DDVector dd_gen_sym_eig(const DDMatrix& A, const DDMatrix& B, const DDReal& shift_b);

DDReal dd_frobenius(const DDMatrix& A);
DDReal dd_trace(const DDMatrix& A);

// Realification of a complex Hermitian matrix G = Re + i*Im into the
// symmetric 2n x 2n form [[Re, -Im], [Im, Re]]; the spectrum of G appears
// twice. Used because the dd pipeline has no complex eigensolver.
DDMatrix dd_realify(const DDMatrix& re, const DDMatrix& im);

} // namespace fna
