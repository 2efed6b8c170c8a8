#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fna/dictionary.hpp"
#include "fna/quadrature.hpp"
#include "fna/sampleset.hpp"
#include "fna/xprec.hpp"

namespace fna {

struct OutOfNumericRangeError : std::runtime_error {
    double offending_eigenvalue;
    OutOfNumericRangeError(const std::string& what, double ev)
        : std::runtime_error(what), offending_eigenvalue(ev) {}
};

// Christoffel-function machinery for one dictionary and one (dd) continuous
// Gram. The Gram's eigendecomposition is done once; complex dictionaries are
// handled through two real quadratic forms against the real Gram, so no
// complex dd arithmetic is needed.
//
// plain(x):  k_n(x) = phi(x) G^+ phi(x)^*, the spectral pseudo-inverse with
//            eigenvalues below zero_tol*lambda_max dropped; requires the
//            smallest retained eigenvalue >= 1e-25 * lambda_max.
// ridge(eps, x): k_n^eps(x) = phi(x)(G + eps^2 I)^-1 phi(x)^*, the resolvent
//            route; requires eps^2 >= 1e-30 * lambda_max.
// ridge_sigma_sum: the equivalent sum_i sigma_i^2/(sigma_i^2+eps^2)|u_i(x)|^2,
//            kept as an independent identity check.
class ChristoffelEngine {
  public:
    ChristoffelEngine(const Dictionary& dict, const DDMatrix& gram,
                      double zero_tol = 1e-30);

    double plain(double x) const;
    double ridge(double eps, double x);
    double ridge_sigma_sum(double eps, double x) const;

    // singular values of the synthesis operator, descending (sqrt of
    // clamped Gram eigenvalues)
    const std::vector<double>& sigmas() const { return sigmas_; }
    double lambda_max() const { return lambda_max_; }
    double smallest_retained() const { return smallest_retained_; }
    bool plain_computable() const;

    // |u_i(x)|^2 for the descending index i (0-based)
    double u_sq(std::size_t i, double x) const;

    const Dictionary& dict() const { return dict_; }

  private:
    DDVector phi_dd(double x) const; // [Re phi; -Im phi] stacked when complex
    Dictionary dict_;
    DDMatrix gram_;
    DdEigResult eig_; // ascending
    std::vector<double> sigmas_;
    double lambda_max_ = 0.0;
    double smallest_retained_ = 0.0;
    double zero_tol_;
    std::map<double, std::shared_ptr<DDMatrix>> chol_cache_;
};

// n^eps = sum sigma_i^2 / (sigma_i^2 + eps^2)
double numerical_dimension(const std::vector<double>& sigmas, double eps);

struct DensityTable {
    std::vector<double> grid;
    std::vector<double> density; // pdf w.r.t. dx, normalized
    std::vector<double> cdf;     // cdf over the grid, cdf.back() == 1
    std::vector<double> rho;     // reference density at the grid
    std::string label;
    double lo = 0.0, hi = 0.0;
};

enum class DensityKind { plain, ridge };

// dmu = (k/n) drho on a 4096-point grid, inverse-CDF ready.
DensityTable optimal_density(ChristoffelEngine& engine, DensityKind kind,
                             double eps = 0.0, std::size_t grid_points = 4096);

// mu = rho (weights come out identically one)
DensityTable uniform_density(double lo, double hi, std::size_t grid_points = 4096);

SampleSet draw_iid(const DensityTable& density, std::size_t m, std::uint64_t seed);

enum class PointKind { legendre, chebyshev, clustered, uniform_grid };
PointKind point_kind_from_string(const std::string& s);

// Deterministic point sets, weight identically 1: legendre -> Gauss nodes,
// chebyshev -> cos(j pi/(m-1)), clustered -> -1 + 2*2^-j, uniform-grid ->
// equispaced. lo/hi rescale the native [-1,1] definitions.
SampleSet deterministic_set(PointKind kind, std::size_t m, double lo = -1.0, double hi = 1.0);

void export_density_csv(const DensityTable& table, const std::string& path);

} // namespace fna
