#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fna/dictionary.hpp"
#include "fna/linalg.hpp"
#include "fna/quadrature.hpp"
#include "fna/sampleset.hpp"

namespace fna {

// Discretized least squares system A_ji = sqrt(w_j/m) phi_i(x_j),
// d_j = sqrt(w_j/m) f(x_j) + noise_j. Real dictionaries keep a real system
// so the whole solve path stays in real arithmetic.
struct System {
    bool is_complex = false;
    Matrix a_r;
    CMatrix a_c;
    std::vector<double> d_r;
    std::vector<std::complex<double>> d_c;

    std::size_t rows() const { return is_complex ? a_c.rows : a_r.rows; }
    std::size_t cols() const { return is_complex ? a_c.cols : a_r.cols; }
};

System build_system(const Dictionary& dict, const SampleSet& samples,
                    const std::function<double(double)>& f,
                    const std::optional<std::vector<double>>& noise = std::nullopt);

struct ApproxResult {
    std::vector<std::complex<double>> coeffs;
    Dictionary dict;
    std::string solver;
    double eps = 0.0;        // regularization actually used
    double residual = 0.0;   // ||d - A x||_2 in the scaled system
    double coeff_norm = 0.0; // ||x||_2
    double skeel = 0.0;      // Skeel condition of R, qr route only
    bool real_part = false;  // evaluation takes the real part (real data, complex span)
};

enum class FitMethod { ls, tikhonov, tsvd };
FitMethod fit_method_from_string(const std::string& s);

// eps <= 0 selects the default 10 * eps_dp * sigma_max(A). Plain ls refuses
// numerically rank-deficient systems (sigma_min <= eps_dp * sigma_max)
// instead of silently regularizing.
ApproxResult fit(const Dictionary& dict, const System& sys, FitMethod method, double eps);

// Householder-QR orthogonalization of the sampled dictionary, least squares
// in the Q basis, coefficients mapped back through the triangular factor.
// There is no explicit regularization on this route; eps is only recorded.
ApproxResult fit_qr_orthogonalized(const Dictionary& dict, const SampleSet& samples,
                                   const std::vector<double>& d, double eps);

// Stieltjes/Arnoldi fit: build the orthonormal basis on the grid (uniform
// discrete inner product), project, evaluate through the stored recurrence.
ApproxResult fit_vwa(const std::function<std::complex<double>(double)>& shift,
                     const std::string& shift_label, std::size_t n,
                     const std::vector<double>& grid, const std::vector<double>& d);

std::complex<double> evaluate(const ApproxResult& res, double x);
double evaluate_real(const ApproxResult& res, double x);

// L2 error under the dictionary's reference measure, by quadrature.
double error_l2(const std::function<double(double)>& f, const ApproxResult& res,
                const QuadRule& rule);
// sup error on an equispaced grid over the dictionary domain.
double error_sup(const std::function<double(double)>& f, const ApproxResult& res,
                 std::size_t grid_points = 10001);

} // namespace fna
