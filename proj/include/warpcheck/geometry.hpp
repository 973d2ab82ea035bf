#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "warpcheck/errors.hpp"
#include "warpcheck/fields.hpp"
#include "warpcheck/jet.hpp"
#include "warpcheck/linalg.hpp"

namespace warpcheck {

inline constexpr double kMetricSymmetryTol = 1e-14;

// Evaluates the metric at a point with all coordinates seeded, so every
// component carries its value, gradient and Hessian. Checks the returned
// matrix is square, of the right dimension, and symmetric.
inline Matrix<Jet2> evaluate_metric(const MetricField& metric, std::span<const double> point) {
    if (static_cast<int>(point.size()) != metric.dim) {
        throw UsageError("metric '" + metric.label + "' expects dimension " +
                         std::to_string(metric.dim) + ", got point of dimension " +
                         std::to_string(point.size()));
    }
    const std::vector<Jet2> jets = seed_point(point);
    Matrix<Jet2> g = metric.components(jets);
    if (g.rows() != metric.dim || g.cols() != metric.dim) {
        throw Error("metric '" + metric.label + "' returned a matrix of wrong shape");
    }
    for (int i = 0; i < g.rows(); ++i) {
        for (int j = 0; j < i; ++j) {
            if (std::fabs(g(i, j).value() - g(j, i).value()) > kMetricSymmetryTol) {
                throw Error("metric '" + metric.label + "' is not symmetric at the sampled point");
            }
        }
    }
    return g;
}

// Plain metric values at a point (no derivatives kept).
inline Matrix<double> metric_values(const MetricField& metric, std::span<const double> point) {
    const Matrix<Jet2> g = evaluate_metric(metric, point);
    Matrix<double> gv(g.rows(), g.cols(), 0.0);
    for (int i = 0; i < g.rows(); ++i) {
        for (int j = 0; j < g.cols(); ++j) gv(i, j) = g(i, j).value();
    }
    return gv;
}

inline Jet2 evaluate_scalar(const ScalarField& field, std::span<const double> point) {
    if (static_cast<int>(point.size()) != field.dim) {
        throw UsageError("scalar field '" + field.label + "' expects dimension " +
                         std::to_string(field.dim) + ", got point of dimension " +
                         std::to_string(point.size()));
    }
    const std::vector<Jet2> jets = seed_point(point);
    return field.eval(jets);
}

namespace detail {

// Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij), assembled in Jet1
// arithmetic so each symbol carries its own first derivatives as well.
inline Tensor3<Jet1> christoffel_jets(const Matrix<Jet2>& g) {
    const int n = g.rows();

    Matrix<Jet1> g1(n, n, Jet1::constant(0.0, n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) g1(i, j) = first_order(g(i, j));
    }
    const Matrix<Jet1> ginv = invert_matrix(g1);

    // dg(i, j, l) = d_l g_ij, differentiable once more through its Jet1 gradient.
    Tensor3<Jet1> dg(n, Jet1::constant(0.0, n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int l = 0; l < n; ++l) dg(i, j, l) = partial(g(i, j), l);
        }
    }

    Tensor3<Jet1> gamma(n, Jet1::constant(0.0, n));
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j <= i; ++j) {
                Jet1 sum = Jet1::constant(0.0, n);
                for (int l = 0; l < n; ++l) {
                    sum = sum + ginv(k, l) * (dg(j, l, i) + dg(i, l, j) - dg(i, j, l));
                }
                sum = 0.5 * sum;
                gamma(k, i, j) = sum;
                gamma(k, j, i) = sum;
            }
        }
    }
    return gamma;
}

} // namespace detail

// Christoffel symbols Gamma^k_ij of the metric at a point.
inline Tensor3<double> christoffel(const MetricField& metric, std::span<const double> point) {
    const Matrix<Jet2> g = evaluate_metric(metric, point);
    const Tensor3<Jet1> gamma = detail::christoffel_jets(g);
    const int n = metric.dim;
    Tensor3<double> out(n, 0.0);
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) out(k, i, j) = gamma(k, i, j).value();
        }
    }
    return out;
}

// Christoffel symbols of the conformally flat metric g_ij = delta_ij / phi^2,
// assembled from the four closed-form cases:
//   Gamma^k_ij = 0 (pairwise distinct),  Gamma^i_ij = -phi_j / phi,
//   Gamma^k_ii =  phi_k / phi,           Gamma^i_ii = -phi_i / phi.
inline Tensor3<double> conformal_christoffel(const ScalarField& phi,
                                             std::span<const double> point) {
    const Jet2 p = evaluate_scalar(phi, point);
    if (p.value() == 0.0) throw SingularityError("conformal factor vanishes at the point");
    const int n = phi.dim;
    std::vector<double> ratio(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) ratio[static_cast<std::size_t>(k)] = p.grad(k) / p.value();

    Tensor3<double> gamma(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            gamma(i, i, j) = -ratio[static_cast<std::size_t>(j)];
            gamma(i, j, i) = -ratio[static_cast<std::size_t>(j)];
        }
        for (int k = 0; k < n; ++k) {
            if (k != i) gamma(k, i, i) = ratio[static_cast<std::size_t>(k)];
        }
        gamma(i, i, i) = -ratio[static_cast<std::size_t>(i)];
    }
    return gamma;
}

// Full curvature bundle at a point. The Ricci tensor uses the coordinate
// formula Ric_ij = d_k Gamma^k_ij - d_i Gamma^k_kj
//                + Gamma^k_kl Gamma^l_ij - Gamma^k_il Gamma^l_kj.
inline CurvatureAtPoint ricci(const MetricField& metric, std::span<const double> point) {
    const int n = metric.dim;
    const Matrix<Jet2> g = evaluate_metric(metric, point);
    const Tensor3<Jet1> gamma1 = detail::christoffel_jets(g);

    CurvatureAtPoint out;
    out.point.assign(point.begin(), point.end());
    out.metric_value = Matrix<double>(n, n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) out.metric_value(i, j) = g(i, j).value();
    }
    out.metric_inverse = invert_matrix(out.metric_value);

    out.christoffel = Tensor3<double>(n, 0.0);
    out.christoffel_derivative = Tensor4<double>(n, 0.0);
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                out.christoffel(k, i, j) = gamma1(k, i, j).value();
                for (int l = 0; l < n; ++l) {
                    out.christoffel_derivative(l, k, i, j) = gamma1(k, i, j).grad(l);
                }
            }
        }
    }

    out.ricci = Matrix<double>(n, n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double r = 0.0;
            for (int k = 0; k < n; ++k) {
                r += out.christoffel_derivative(k, k, i, j);
                r -= out.christoffel_derivative(i, k, k, j);
                for (int l = 0; l < n; ++l) {
                    r += out.christoffel(k, k, l) * out.christoffel(l, i, j);
                    r -= out.christoffel(k, i, l) * out.christoffel(l, k, j);
                }
            }
            out.ricci(i, j) = r;
            out.ricci(j, i) = r;
        }
    }

    out.scalar_curvature = trace_product(out.metric_inverse, out.ricci);
    out.normalized_scalar =
        n >= 2 ? out.scalar_curvature / (static_cast<double>(n) * (n - 1)) : 0.0;
    return out;
}

// Covariant Hessian of a scalar: Hess_ij = f_,ij - Gamma^k_ij f_,k.
inline Matrix<double> hessian_scalar(const MetricField& metric, const ScalarField& f,
                                     std::span<const double> point) {
    if (metric.dim != f.dim) {
        throw UsageError("hessian_scalar: metric and scalar field dimensions differ");
    }
    const Tensor3<double> gamma = christoffel(metric, point);
    const Jet2 fj = evaluate_scalar(f, point);
    const int n = metric.dim;
    Matrix<double> hess(n, n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double h = fj.hess(i, j);
            for (int k = 0; k < n; ++k) h -= gamma(k, i, j) * fj.grad(k);
            hess(i, j) = h;
            hess(j, i) = h;
        }
    }
    return hess;
}

// Squared gradient norm g^{ij} f_,i f_,j.
inline double gradient_norm_sq(const MetricField& metric, const ScalarField& f,
                               std::span<const double> point) {
    if (metric.dim != f.dim) {
        throw UsageError("gradient_norm_sq: metric and scalar field dimensions differ");
    }
    const int n = metric.dim;
    const Matrix<double> ginv = invert_matrix(metric_values(metric, point));
    const Jet2 fj = evaluate_scalar(f, point);
    double norm_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) norm_sq += ginv(i, j) * fj.grad(i) * fj.grad(j);
    }
    return norm_sq;
}

// Laplace-Beltrami operator: metric trace of the covariant Hessian.
inline double laplacian(const MetricField& metric, const ScalarField& f,
                        std::span<const double> point) {
    const Matrix<double> ginv = invert_matrix(metric_values(metric, point));
    const Matrix<double> hess = hessian_scalar(metric, f, point);
    return trace_product(ginv, hess);
}

} // namespace warpcheck
