#pragma once

#include <vector>

#include "fna/dictionary.hpp"
#include "fna/matrix.hpp"
#include "fna/sampleset.hpp"
#include "fna/xprec.hpp"

namespace fna {

// Nodes/weights for plain dx on [-1, 1]; exact for polynomials of degree
// <= 2n - 1 (weights sum to 2).
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t exactness = 0;
};

struct DDQuadRule {
    DDVector nodes;
    DDVector weights;
};

QuadRule gauss_legendre(std::size_t n);
// Double nodes polished by three Newton steps on the Legendre recurrence in
// dd; residuals are verified.
DDQuadRule gauss_legendre_dd(std::size_t n);

QuadRule scaled_rule(const QuadRule& r, double lo, double hi);

enum class GramConvention { probability, lebesgue };

// Quadrature-assembled continuous Gram (G)_ij = int phi_i conj(phi_j) dmu
// with dmu = rho (probability) or dx (lebesgue). Hermitian by construction.
// The rule is given on [-1,1] and mapped to the dictionary domain.
Matrix gram_continuous(const Dictionary& dict, const QuadRule& rule, GramConvention conv);
CMatrix gram_continuous_c(const Dictionary& dict, const QuadRule& rule, GramConvention conv);
DDMatrix gram_continuous_dd(const Dictionary& dict, const DDQuadRule& rule, GramConvention conv);

// Dictionary-aware continuous Gram in dd: closed forms for the trigonometric
// sets (prolate matrix / sinc blocks), exact split rules for the sumframe
// weight, plain Gauss with an N vs 2N doubling check otherwise. For complex
// dictionaries the continuous Gram is real, so one matrix suffices.
DDMatrix gram_auto_dd(const Dictionary& dict, GramConvention conv);
Matrix gram_auto(const Dictionary& dict, GramConvention conv);

struct QuadratureGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Prolate matrix: entries sin(2 pi W (k-l)) / (pi (k-l)), diagonal 2W.
Matrix gram_prolate(std::size_t n, double w);          // n odd
DDMatrix gram_prolate_dd(std::size_t n, double w);
Matrix prolate_matrix(std::size_t size, double w);     // parity-free helper
DDMatrix prolate_matrix_dd(std::size_t size, double w);

// Discrete Gram G_{n,m} = A* A, A_ji = sqrt(w_j/m) phi_i(x_j).
Matrix gram_discrete(const Dictionary& dict, const SampleSet& samples);
CMatrix gram_discrete_c(const Dictionary& dict, const SampleSet& samples);
// dd accumulation of the double sample matrix (exact products, dd sums);
// complex dictionaries get the Hermitian pair (re, im).
DDMatrix gram_discrete_dd(const Dictionary& dict, const SampleSet& samples);
void gram_discrete_dd_c(const Dictionary& dict, const SampleSet& samples,
                        DDMatrix& re, DDMatrix& im);

} // namespace fna
