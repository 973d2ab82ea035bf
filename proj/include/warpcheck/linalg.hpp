#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "warpcheck/errors.hpp"
#include "warpcheck/jet.hpp"

namespace warpcheck {

// Dense row-major matrix over an arbitrary scalar (double, Jet1, Jet2).
// Dimensions stay small (n <= ~10), so no attempt at sparsity or blocking.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, const T& fill = T{})
        : rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    T& operator()(int i, int j) { return data_[index(i, j)]; }
    const T& operator()(int i, int j) const { return data_[index(i, j)]; }

    friend bool operator==(const Matrix& a, const Matrix& b) = default;

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(j);
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> data_;
};

// Rank-3 array, indexed (k, i, j); used for Christoffel symbols Gamma^k_ij.
template <class T>
class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(int n, const T& fill = T{})
        : n_(n), data_(cube(n), fill) {}

    int dim() const { return n_; }
    T& operator()(int k, int i, int j) { return data_[index(k, i, j)]; }
    const T& operator()(int k, int i, int j) const { return data_[index(k, i, j)]; }

private:
    static std::size_t cube(int n) {
        const auto m = static_cast<std::size_t>(n);
        return m * m * m;
    }
    std::size_t index(int k, int i, int j) const {
        const auto m = static_cast<std::size_t>(n_);
        return (static_cast<std::size_t>(k) * m + static_cast<std::size_t>(i)) * m +
               static_cast<std::size_t>(j);
    }

    int n_ = 0;
    std::vector<T> data_;
};

// Rank-4 array, indexed (l, k, i, j); used for dGamma: d_l Gamma^k_ij.
template <class T>
class Tensor4 {
public:
    Tensor4() = default;
    explicit Tensor4(int n, const T& fill = T{})
        : n_(n), data_(quart(n), fill) {}

    int dim() const { return n_; }
    T& operator()(int l, int k, int i, int j) { return data_[index(l, k, i, j)]; }
    const T& operator()(int l, int k, int i, int j) const { return data_[index(l, k, i, j)]; }

private:
    static std::size_t quart(int n) {
        const auto m = static_cast<std::size_t>(n);
        return m * m * m * m;
    }
    std::size_t index(int l, int k, int i, int j) const {
        const auto m = static_cast<std::size_t>(n_);
        return ((static_cast<std::size_t>(l) * m + static_cast<std::size_t>(k)) * m +
                static_cast<std::size_t>(i)) * m +
               static_cast<std::size_t>(j);
    }

    int n_ = 0;
    std::vector<T> data_;
};

namespace detail {

inline double scalar_value(double x) { return x; }
inline double scalar_value(const Jet1& x) { return x.value(); }
inline double scalar_value(const Jet2& x) { return x.value(); }

inline double constant_like(double, double v) { return v; }
inline Jet1 constant_like(const Jet1& x, double v) { return Jet1::constant(v, x.arity()); }
inline Jet2 constant_like(const Jet2& x, double v) { return Jet2::constant(v, x.arity()); }

} // namespace detail

inline constexpr double kPivotThreshold = 1e-12;

// Gauss-Jordan inverse with partial pivoting on |value|. Works over double and
// over jets, in which case the inverse carries derivatives of the inverse.
template <class T>
Matrix<T> invert_matrix(Matrix<T> a) {
    if (a.rows() != a.cols()) throw UsageError("invert_matrix: matrix is not square");
    const int n = a.rows();
    if (n == 0) throw UsageError("invert_matrix: empty matrix");

    Matrix<T> inv(n, n, detail::constant_like(a(0, 0), 0.0));
    for (int i = 0; i < n; ++i) inv(i, i) = detail::constant_like(a(0, 0), 1.0);

    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::fabs(detail::scalar_value(a(col, col)));
        for (int r = col + 1; r < n; ++r) {
            const double mag = std::fabs(detail::scalar_value(a(r, col)));
            if (mag > best) {
                best = mag;
                pivot = r;
            }
        }
        if (best < kPivotThreshold) {
            throw SingularityError("matrix is singular: pivot magnitude " +
                                   std::to_string(best) + " below threshold");
        }
        if (pivot != col) {
            for (int j = 0; j < n; ++j) {
                std::swap(a(col, j), a(pivot, j));
                std::swap(inv(col, j), inv(pivot, j));
            }
        }
        const T diag = a(col, col);
        for (int j = 0; j < n; ++j) {
            a(col, j) = a(col, j) / diag;
            inv(col, j) = inv(col, j) / diag;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const T factor = a(r, col);
            for (int j = 0; j < n; ++j) {
                a(r, j) = a(r, j) - factor * a(col, j);
                inv(r, j) = inv(r, j) - factor * inv(col, j);
            }
        }
    }
    return inv;
}

inline double trace_product(const Matrix<double>& a, const Matrix<double>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
        throw UsageError("trace_product: dimension mismatch");
    }
    double t = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) t += a(i, j) * b(j, i);
    }
    return t;
}

inline double max_abs(const Matrix<double>& a) {
    double m = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::fabs(a(i, j)));
    }
    return m;
}

} // namespace warpcheck
