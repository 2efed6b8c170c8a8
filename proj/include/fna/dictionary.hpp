#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fna/dd.hpp"
#include "fna/matrix.hpp"

namespace fna {

struct DDComplex {
    DDReal re, im;
};

// A spanning set Phi = {phi_i} for an approximation space, with pointwise
// evaluation in working and in double-double precision. The reference
// measure rho is a probability measure on [lo, hi], stored as its density
// with respect to dx. Indices are zero-based.
struct Dictionary {
    std::string label;
    std::size_t count = 0;    // number of functions n'
    std::size_t dim_hint = 0; // analytic dimension n of the span
    double lo = -1.0, hi = 1.0;
    bool is_complex = false;
    std::function<double(double)> rho_density;
    std::function<std::complex<double>(std::size_t, double)> eval;
    std::function<DDComplex(std::size_t, DDReal)> eval_dd;

    std::complex<double> operator()(std::size_t i, double x) const { return eval(i, x); }
};

Dictionary legendre_dict(std::size_t n);
Dictionary monomial_dict(std::size_t n);
// Half orthonormal Legendre, half weighted by w(x) = sqrt((x+1)/2); n even.
Dictionary sumframe_dict(std::size_t n);
// exp(2 pi i k x) for k = -(n-1)/2 ... (n-1)/2 on [-W, W]; n odd, 0 < W < 1/2.
Dictionary fourier_ext_dict(std::size_t n, double w);
// Real span of Re(sum x_k exp(i k pi x / 2)), k = 0..n, on [-1, 1]:
// {1} followed by cos/sin pairs, 2n+1 real functions in total.
Dictionary fourier_ext_real_dict(std::size_t n);
// The one-sided complex set exp(i k pi x / 2), k = 0..n, on [-1, 1]; the
// Vandermonde system of the half-range extension solver comparison.
Dictionary fourier_halfrange_dict(std::size_t n);

struct ArnoldiBreakdownError : std::runtime_error {
    std::size_t stage;
    ArnoldiBreakdownError(std::size_t st)
        : std::runtime_error("Stieltjes/Arnoldi breakdown at stage " + std::to_string(st)),
          stage(st) {}
};

// Orthonormal basis built by the Stieltjes recurrence eta_i = shift * q_{i-1}
// orthogonalized against all previous columns (with one reorthogonalization
// pass). The inner product is the discrete one defined by (nodes, weights);
// quadrature rules make it a continuous inner product in the usual sense.
struct ArnoldiBasis {
    std::string shift_label;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::function<std::complex<double>(double)> shift;
    CMatrix columns;     // nodes.size() x n, orthonormal in the discrete inner product
    CMatrix h;           // (n+1) x n recurrence coefficients; h(i+1, i) are the norms
    double norm0 = 1.0;  // norm of the constant function
    bool is_complex = false;

    std::size_t size() const { return columns.cols; }
};

ArnoldiBasis stieltjes_orthonormalize(std::size_t n,
                                      const std::function<std::complex<double>(double)>& shift,
                                      const std::string& shift_label,
                                      const std::vector<double>& nodes,
                                      const std::vector<double>& weights);

std::complex<double> arnoldi_eval(const ArnoldiBasis& basis, std::size_t i, double x);

// Wraps the basis as a Dictionary ("arnoldi:<shift>"). eval_dd promotes the
// double recurrence; the Arnoldi set has A_n ~ B_n so nothing below working
// precision is ever needed from it.
Dictionary arnoldi_dict(std::shared_ptr<const ArnoldiBasis> basis, double lo, double hi);

} // namespace fna
