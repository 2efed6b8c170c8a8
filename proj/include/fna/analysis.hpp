#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fna/dictionary.hpp"
#include "fna/sampling.hpp"
#include "fna/solvers.hpp"
#include "fna/xprec.hpp"

namespace fna {

struct FrameReport {
    double a_n = 0.0; // squared smallest retained singular value
    double b_n = 0.0; // squared largest singular value
    bool numerically_redundant = false;
    double eps_mach = 0.0;
    std::string precision = "dd";
};

// Optimal frame bounds from the Gram spectrum: B_n is the largest
// eigenvalue, A_n the smallest one above zero_tol * B_n (the dd floor).
// The redundancy flag realizes A_n <= eps_mach^2 B_n.
FrameReport frame_bounds(const DDMatrix& gram, double zero_tol = 1e-30,
                         double eps_mach = 2.220446049250313e-16);
FrameReport frame_bounds_from_values(const DDVector& values_ascending, double zero_tol,
                                     double eps_mach);

// Smallest generalized eigenvalue of (G_nm + eps^2 I, G_n), computed in dd.
// A numerically semidefinite G_n is shifted by escalating multiples of
// u_dd * trace(G_n) until its Cholesky succeeds. eps = 0 gives A_{n,m}.
double stability_constant(const DDMatrix& g_nm, const DDMatrix& g_n, double eps);
// complex Hermitian G_nm against a real G_n: realified internally
double stability_constant_c(const DDMatrix& g_nm_re, const DDMatrix& g_nm_im,
                            const DDMatrix& g_n, double eps);

struct SpectrumReport {
    std::vector<double> sigmas; // descending
    std::size_t i1 = 0;         // 1-based count: sigma_i^2 >= (1-eps^2) scale for i <= i1
    std::size_t i2 = 0;         // 1-based: sigma_i^2 <= eps^2 scale for i > i2
    double s_tail = 0.0;        // sum_{i > i2} (sigma_i/eps_eff)^2
    double n_eps = 0.0;
};

enum class PlungeNormalization { literal, relative };

// literal: thresholds 1-eps^2 and eps^2 applied to sigma^2 directly (the
// A = B = 1 setting); relative: eps is scaled by sigma_max first.
SpectrumReport plunge_and_tail(const std::vector<double>& sigmas_descending, double eps,
                               PlungeNormalization norm);

struct Theorem9Report {
    SpectrumReport spectrum;
    double max_rel_violation = 0.0; // over all inequalities and probes
    bool holds = false;
    bool uniform_bound_checked = false; // hypothesis |phi_i| <= 1 verified
    double sup_k_eps = 0.0;
    double sup_bound = 0.0; // right side of the sup bound, when checked
};

// Sandwich and sup bounds on k_n^eps plus n^eps <= i2 + S_tail, evaluated at
// the probe points; violations beyond 1e-8 relative slack fail the report.
Theorem9Report verify_theorem9(ChristoffelEngine& engine, double eps,
                               const std::vector<double>& probes,
                               PlungeNormalization norm = PlungeNormalization::literal);

struct FourierTheoremReport {
    std::size_t n = 0;
    double w = 0.0, eps = 0.0;
    double n_eps = 0.0;
    double n_eps_bound = 0.0; // ceil(2nW) + 2 + (2/pi^2)(log(8/eps^2)+1) log(4n)
    bool n_eps_ok = false;
    double i2_formula = 0.0;
    bool k2_ok = false; // sigma_i^2 <= eps^2 beyond i2_formula
    double s_tail = 0.0;
    double s_tail_bound = 0.0; // (2/pi^2) log(4n)
    bool s_tail_ok = false;
    double i1_formula = 0.0;
    bool k1_ok = false; // sigma_i^2 >= 1 - eps^2 up to i1_formula
    double sup_k_eps = 0.0;
    double sup_k_eps_bound = 0.0;
    bool sup_ok = false;
    std::optional<double> theorem12_ratio; // k_n(W)/(n^2 (pi/2) cot(pi W)), when computable
};

FourierTheoremReport verify_fourier_theorems(std::size_t n, double w, double eps,
                                             std::size_t sup_grid = 601);

// Fraction of trials in which (G_nm + eps^2 I, G_n) has smallest generalized
// eigenvalue >= 1/2, drawing m weighted iid samples per trial.
double mz_montecarlo(const Dictionary& dict, const DDMatrix& g_n, const DensityTable& density,
                     std::size_t m, double eps, std::size_t trials, std::uint64_t seed);

struct AugmentedBasisReport {
    double a_eps = 0.0;
    bool holds = false; // a_eps >= 1/2
};

// Augment `base` with one extra function psi without adding samples and
// measure the regularized stability constant.
AugmentedBasisReport verify_augmented_basis(const Dictionary& base,
                                            const std::function<double(double)>& psi,
                                            const SampleSet& samples, double eps);

inline double condition_bound(double a_eps) {
    return (1.0 + std::numbers::sqrt2) / std::sqrt(a_eps);
}

// Empirical absolute condition of the Tikhonov map d -> synthesized
// function: max ||F delta||_H / ||delta||_2 over random unit probes.
double condition_probe(const Dictionary& dict, const System& sys, double eps,
                       const Matrix& g_n, std::size_t trials, std::uint64_t seed);

} // namespace fna
