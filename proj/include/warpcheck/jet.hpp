#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "warpcheck/errors.hpp"

namespace warpcheck {

// ---------------------------------------------------------------------------
// Jet2: truncated second-order Taylor value (value, gradient, Hessian).
//
// Evaluating a chart function once in Jet2 arithmetic yields its value, full
// gradient and full Hessian at the point, exact up to floating-point rounding.
// The Hessian is stored as a packed lower triangle and mirrored on read, so
// symmetry holds by construction.
// ---------------------------------------------------------------------------

class Jet2 {
public:
    Jet2() = default;

    static Jet2 constant(double value, int arity) {
        check_arity_count(arity);
        Jet2 j;
        j.value_ = value;
        j.grad_.assign(static_cast<std::size_t>(arity), 0.0);
        j.hess_.assign(packed_size(arity), 0.0);
        return j;
    }

    static Jet2 variable(double value, int arity, int index) {
        if (index < 0 || index >= arity) {
            throw ArityError("jet variable index " + std::to_string(index) +
                             " out of range for arity " + std::to_string(arity));
        }
        Jet2 j = constant(value, arity);
        j.grad_[static_cast<std::size_t>(index)] = 1.0;
        return j;
    }

    int arity() const { return static_cast<int>(grad_.size()); }
    double value() const { return value_; }
    double grad(int i) const { return grad_[checked(i)]; }
    // Mirrored read of the packed lower triangle: hess(i,j) == hess(j,i) exactly.
    double hess(int i, int j) const { return hess_[packed_index(checked(i), checked(j))]; }

    std::span<const double> gradient() const { return grad_; }

    friend Jet2 operator+(const Jet2& a, const Jet2& b) {
        require_same_arity(a, b);
        Jet2 r = a;
        r.value_ += b.value_;
        for (std::size_t i = 0; i < r.grad_.size(); ++i) r.grad_[i] += b.grad_[i];
        for (std::size_t i = 0; i < r.hess_.size(); ++i) r.hess_[i] += b.hess_[i];
        return r;
    }

    friend Jet2 operator-(const Jet2& a, const Jet2& b) {
        require_same_arity(a, b);
        Jet2 r = a;
        r.value_ -= b.value_;
        for (std::size_t i = 0; i < r.grad_.size(); ++i) r.grad_[i] -= b.grad_[i];
        for (std::size_t i = 0; i < r.hess_.size(); ++i) r.hess_[i] -= b.hess_[i];
        return r;
    }

    friend Jet2 operator-(const Jet2& a) {
        Jet2 r = a;
        r.value_ = -r.value_;
        for (auto& g : r.grad_) g = -g;
        for (auto& h : r.hess_) h = -h;
        return r;
    }

    // (fg)'' = f g'' + g f'' + f' (x) g' + g' (x) f'
    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        require_same_arity(a, b);
        const int n = a.arity();
        Jet2 r = Jet2::constant(a.value_ * b.value_, n);
        for (int i = 0; i < n; ++i) {
            r.grad_[su(i)] = a.value_ * b.grad_[su(i)] + b.value_ * a.grad_[su(i)];
        }
        std::size_t k = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j <= i; ++j, ++k) {
                r.hess_[k] = a.value_ * b.hess_[k] + b.value_ * a.hess_[k] +
                             a.grad_[su(i)] * b.grad_[su(j)] + a.grad_[su(j)] * b.grad_[su(i)];
            }
        }
        return r;
    }

    friend Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

    friend Jet2 operator+(const Jet2& a, double s) {
        Jet2 r = a;
        r.value_ += s;
        return r;
    }
    friend Jet2 operator+(double s, const Jet2& a) { return a + s; }
    friend Jet2 operator-(const Jet2& a, double s) { return a + (-s); }
    friend Jet2 operator-(double s, const Jet2& a) { return (-a) + s; }

    friend Jet2 operator*(const Jet2& a, double s) {
        Jet2 r = a;
        r.value_ *= s;
        for (auto& g : r.grad_) g *= s;
        for (auto& h : r.hess_) h *= s;
        return r;
    }
    friend Jet2 operator*(double s, const Jet2& a) { return a * s; }
    friend Jet2 operator/(const Jet2& a, double s) { return a * (1.0 / s); }
    friend Jet2 operator/(double s, const Jet2& a) { return reciprocal(a) * s; }

    // d(1/x) = -1/x^2, d^2(1/x) = 2/x^3
    friend Jet2 reciprocal(const Jet2& a) {
        if (a.value_ == 0.0) throw SingularityError("reciprocal of a jet with zero value");
        const double inv = 1.0 / a.value_;
        return a.compose(inv, -inv * inv, 2.0 * inv * inv * inv);
    }

    // Integer power by the chain rule: k v^{k-1}, k(k-1) v^{k-2}.
    friend Jet2 pow(const Jet2& a, int k) {
        if (k == 0) return constant(1.0, a.arity());
        if (k < 0 && a.value_ == 0.0) {
            throw SingularityError("negative integer power of a jet with zero value");
        }
        const double v = a.value_;
        const double f0 = std::pow(v, k);
        const double f1 = k * std::pow(v, k - 1);
        const double f2 = static_cast<double>(k) * (k - 1) * std::pow(v, k - 2);
        return a.compose(f0, f1, f2);
    }

    // d sqrt = 1/(2 sqrt), d^2 sqrt = -1/(4 sqrt^3)
    friend Jet2 sqrt(const Jet2& a) {
        if (!(a.value_ > 0.0)) throw DomainError("sqrt of a jet with non-positive value");
        const double s = std::sqrt(a.value_);
        return a.compose(s, 0.5 / s, -0.25 / (s * s * s));
    }

    friend std::ostream& operator<<(std::ostream& out, const Jet2& j) {
        out << "{v=" << j.value_ << ", g=(";
        for (int i = 0; i < j.arity(); ++i) out << (i ? "," : "") << j.grad(i);
        return out << ")}";
    }

private:
    static std::size_t su(int i) { return static_cast<std::size_t>(i); }
    static std::size_t packed_size(int n) { return su(n) * su(n + 1) / 2; }
    static std::size_t packed_index(std::size_t i, std::size_t j) {
        if (j > i) std::swap(i, j);
        return i * (i + 1) / 2 + j;
    }
    static void check_arity_count(int arity) {
        if (arity < 0) throw ArityError("negative jet arity");
    }
    std::size_t checked(int i) const {
        if (i < 0 || i >= arity()) {
            throw ArityError("jet component index " + std::to_string(i) + " out of range");
        }
        return su(i);
    }
    static void require_same_arity(const Jet2& a, const Jet2& b) {
        if (a.arity() != b.arity()) {
            throw ArityError("mixed-arity jet arithmetic: " + std::to_string(a.arity()) +
                             " vs " + std::to_string(b.arity()));
        }
    }

    // Unary chain rule: given f(v), f'(v), f''(v) of the outer function,
    // grad -> f1 * g, hess -> f1 * H + f2 * g (x) g.
    Jet2 compose(double f0, double f1, double f2) const {
        const int n = arity();
        Jet2 r = constant(f0, n);
        for (int i = 0; i < n; ++i) r.grad_[su(i)] = f1 * grad_[su(i)];
        std::size_t k = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j <= i; ++j, ++k) {
                r.hess_[k] = f1 * hess_[k] + f2 * grad_[su(i)] * grad_[su(j)];
            }
        }
        return r;
    }

    double value_ = 0.0;
    std::vector<double> grad_;
    std::vector<double> hess_; // packed lower triangle, row-major
};

// Seeds one chart axis as the active variable: value point[index], gradient
// e_index, zero Hessian. Arity is the full point dimension.
inline Jet2 seed_variable(std::span<const double> point, int index) {
    if (index < 0 || index >= static_cast<int>(point.size())) {
        throw ArityError("seed index " + std::to_string(index) +
                         " out of range for point of dimension " + std::to_string(point.size()));
    }
    return Jet2::variable(point[static_cast<std::size_t>(index)],
                          static_cast<int>(point.size()), index);
}

// Seeds every coordinate of the point, ready to feed a chart function.
inline std::vector<Jet2> seed_point(std::span<const double> point) {
    std::vector<Jet2> jets;
    jets.reserve(point.size());
    for (int i = 0; i < static_cast<int>(point.size()); ++i) jets.push_back(seed_variable(point, i));
    return jets;
}

// ---------------------------------------------------------------------------
// Jet1: first-order sibling of Jet2 (value + gradient only).
//
// The curvature pipeline evaluates the metric in Jet2, views each component's
// (partial derivative, Hessian row) pair as a Jet1, and runs the Christoffel
// formula in Jet1 arithmetic. The result carries both Gamma and dGamma with no
// nested AD and no finite differences.
// ---------------------------------------------------------------------------

class Jet1 {
public:
    Jet1() = default;
    Jet1(double value, std::vector<double> grad) : value_(value), grad_(std::move(grad)) {}

    static Jet1 constant(double value, int arity) {
        if (arity < 0) throw ArityError("negative jet arity");
        return Jet1(value, std::vector<double>(static_cast<std::size_t>(arity), 0.0));
    }

    int arity() const { return static_cast<int>(grad_.size()); }
    double value() const { return value_; }
    double grad(int i) const { return grad_[static_cast<std::size_t>(i)]; }

    friend Jet1 operator+(const Jet1& a, const Jet1& b) {
        require_same_arity(a, b);
        Jet1 r = a;
        r.value_ += b.value_;
        for (std::size_t i = 0; i < r.grad_.size(); ++i) r.grad_[i] += b.grad_[i];
        return r;
    }
    friend Jet1 operator-(const Jet1& a, const Jet1& b) {
        require_same_arity(a, b);
        Jet1 r = a;
        r.value_ -= b.value_;
        for (std::size_t i = 0; i < r.grad_.size(); ++i) r.grad_[i] -= b.grad_[i];
        return r;
    }
    friend Jet1 operator-(const Jet1& a) {
        Jet1 r = a;
        r.value_ = -r.value_;
        for (auto& g : r.grad_) g = -g;
        return r;
    }
    friend Jet1 operator*(const Jet1& a, const Jet1& b) {
        require_same_arity(a, b);
        Jet1 r = Jet1::constant(a.value_ * b.value_, a.arity());
        for (std::size_t i = 0; i < r.grad_.size(); ++i) {
            r.grad_[i] = a.value_ * b.grad_[i] + b.value_ * a.grad_[i];
        }
        return r;
    }
    friend Jet1 operator/(const Jet1& a, const Jet1& b) {
        require_same_arity(a, b);
        if (b.value_ == 0.0) throw SingularityError("division by a jet with zero value");
        const double inv = 1.0 / b.value_;
        Jet1 r = Jet1::constant(a.value_ * inv, a.arity());
        for (std::size_t i = 0; i < r.grad_.size(); ++i) {
            r.grad_[i] = (a.grad_[i] - r.value_ * b.grad_[i]) * inv;
        }
        return r;
    }
    friend Jet1 operator*(const Jet1& a, double s) {
        Jet1 r = a;
        r.value_ *= s;
        for (auto& g : r.grad_) g *= s;
        return r;
    }
    friend Jet1 operator*(double s, const Jet1& a) { return a * s; }

private:
    static void require_same_arity(const Jet1& a, const Jet1& b) {
        if (a.arity() != b.arity()) {
            throw ArityError("mixed-arity jet arithmetic: " + std::to_string(a.arity()) +
                             " vs " + std::to_string(b.arity()));
        }
    }

    double value_ = 0.0;
    std::vector<double> grad_;
};

// First-order view of a Jet2 (drops the Hessian).
inline Jet1 first_order(const Jet2& j) {
    std::vector<double> g(static_cast<std::size_t>(j.arity()));
    for (int i = 0; i < j.arity(); ++i) g[static_cast<std::size_t>(i)] = j.grad(i);
    return Jet1(j.value(), std::move(g));
}

// The partial derivative d_k of a Jet2, itself differentiable once more:
// value = grad[k], gradient = Hessian row k.
inline Jet1 partial(const Jet2& j, int k) {
    std::vector<double> g(static_cast<std::size_t>(j.arity()));
    for (int i = 0; i < j.arity(); ++i) g[static_cast<std::size_t>(i)] = j.hess(k, i);
    return Jet1(j.grad(k), std::move(g));
}

} // namespace warpcheck
