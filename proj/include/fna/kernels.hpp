#pragma once

#include <cstddef>
#include <string>

#include "fna/dd.hpp"

// Data-parallel inner loops of the double-double pipeline. Vectors are kept
// in split (hi[], lo[]) form so SIMD lanes load contiguously. Every kernel
// has a scalar reference implementation; on x86 an AVX2+FMA variant is
// selected at runtime, and the two are equivalence-tested against each other.

namespace fna::kernels {

enum class Backend { scalar, avx2 };

Backend active();
void force(Backend b);   // testing hook; avx2 request is ignored if the CPU lacks it
bool cpu_has_avx2();
std::string backend_name();

// sum_i x_i * y_i with dd inputs and dd accumulation
DDReal dot_dd(const double* xh, const double* xl,
              const double* yh, const double* yl, std::size_t n);

// sum_i x_i * y_i with double inputs, products taken exactly (two_prod)
// and accumulated in dd; the workhorse of discrete Gram assembly
DDReal dot_double_dd(const double* x, const double* y, std::size_t n);

// plane rotation (x, y) <- (c*x - s*y, s*x + c*y), dd vectors, dd angle
void rot_dd(double* xh, double* xl, double* yh, double* yl,
            std::size_t n, const DDReal& c, const DDReal& s);

// y <- y - a*x, dd
void axpy_dd(double* yh, double* yl, const double* xh, const double* xl,
             std::size_t n, const DDReal& a);

} // namespace fna::kernels
