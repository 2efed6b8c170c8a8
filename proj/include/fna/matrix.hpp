#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fna {

// Dense row-major matrix over double or complex<double>.
template <typename T>
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, T{}) {}

    T& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1.0};
        return m;
    }
};

using Matrix = Mat<double>;
using CMatrix = Mat<std::complex<double>>;

inline double conj_of(double x) { return x; }
inline std::complex<double> conj_of(const std::complex<double>& x) { return std::conj(x); }

template <typename T>
Mat<T> adjoint(const Mat<T>& m) {
    Mat<T> r(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) r(j, i) = conj_of(m(i, j));
    return r;
}

template <typename T>
Mat<T> matmul(const Mat<T>& a, const Mat<T>& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul: dimension mismatch");
    Mat<T> c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const T aik = a(i, k);
            for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

template <typename T>
std::vector<T> matvec(const Mat<T>& a, const std::vector<T>& x) {
    if (a.cols != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
    std::vector<T> y(a.rows, T{});
    for (std::size_t i = 0; i < a.rows; ++i) {
        T s{};
        for (std::size_t j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

// y = A* x
template <typename T>
std::vector<T> matvec_adj(const Mat<T>& a, const std::vector<T>& x) {
    if (a.rows != x.size()) throw std::invalid_argument("matvec_adj: dimension mismatch");
    std::vector<T> y(a.cols, T{});
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) y[j] += conj_of(a(i, j)) * x[i];
    return y;
}

template <typename T>
double norm2(const std::vector<T>& x) {
    double s = 0.0;
    for (const T& v : x) s += std::norm(std::complex<double>(v));
    return std::sqrt(s);
}

template <typename T>
double frobenius(const Mat<T>& m) {
    double s = 0.0;
    for (const T& v : m.a) s += std::norm(std::complex<double>(v));
    return std::sqrt(s);
}

} // namespace fna
