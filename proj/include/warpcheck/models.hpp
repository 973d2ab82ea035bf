#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "warpcheck/errors.hpp"
#include "warpcheck/fields.hpp"
#include "warpcheck/jet.hpp"
#include "warpcheck/linalg.hpp"

namespace warpcheck {

// ---------------------------------------------------------------------------
// Model library: hyperbolic upper half-space metrics, constant-curvature
// space forms realizing a prescribed Einstein constant, the quadratic warp
// family on hyperbolic space, and its closed-form parameter predicates.
// ---------------------------------------------------------------------------

// Parameters of the warp family on the upper half-space chart of H^n:
//   f(x) = (1/x_n) sum_j ((a/2) x_j^2 + b_j x_j + c_j) + (a/2) x_n + b / x_n.
struct WarpParams {
    double a = 0.0;
    double b = 0.0;
    std::vector<double> b_vec;  // b_j, j = 1 .. n-1
    std::vector<double> c_vec;  // c_j, j = 1 .. n-1
    int n = 0;                  // base dimension
};

enum class ChartKind { upper_half_space, stereographic, cartesian };

inline const char* chart_label(ChartKind chart) {
    switch (chart) {
        case ChartKind::upper_half_space: return "upper-half-space";
        case ChartKind::stereographic: return "stereographic";
        case ChartKind::cartesian: return "cartesian";
    }
    return "unknown";
}

// The chart realizing a given Einstein constant: sphere charts for lambda > 0,
// flat charts for lambda = 0, upper half-space charts for lambda < 0.
inline ChartKind chart_for(double lambda) {
    if (lambda > 0.0) return ChartKind::stereographic;
    if (lambda < 0.0) return ChartKind::upper_half_space;
    return ChartKind::cartesian;
}

// A constant-curvature model with Ricci = lambda * g.
struct SpaceFormSpec {
    int dim = 0;
    double einstein_constant = 0.0;
    ChartKind chart = ChartKind::cartesian;
};

inline SpaceFormSpec make_space_form_spec(int dim, double lambda) {
    return SpaceFormSpec{dim, lambda, chart_for(lambda)};
}

namespace detail {

inline int jet_arity(std::span<const Jet2> coords) {
    // All chart inputs share one arity; product charts pass jets wider than
    // the block dimension, so take it from the inputs, not from dim.
    return coords.empty() ? 0 : coords[0].arity();
}

// conf * identity, the only metric shape any model here produces.
inline Matrix<Jet2> conformal_diagonal(int dim, const Jet2& conf) {
    Matrix<Jet2> g(dim, dim, Jet2::constant(0.0, conf.arity()));
    for (int i = 0; i < dim; ++i) g(i, i) = conf;
    return g;
}

inline void require_warp_param_lengths(const WarpParams& p) {
    if (p.n < 2) throw DomainError("warp family needs base dimension n >= 2");
    const auto want = static_cast<std::size_t>(p.n - 1);
    if (p.b_vec.size() != want || p.c_vec.size() != want) {
        throw UsageError("warp parameter vectors must have length n - 1, got " +
                         std::to_string(p.b_vec.size()) + " and " +
                         std::to_string(p.c_vec.size()) + " for n = " + std::to_string(p.n));
    }
}

} // namespace detail

// Upper half-space model of H^n: g_ij = delta_ij / x_n^2 on {x_n > 0},
// Einstein constant -(n-1).
inline MetricField hyperbolic_metric(int n) {
    if (n < 2) throw DomainError("hyperbolic_metric: dimension must be >= 2, got " +
                                 std::to_string(n));
    MetricField field;
    field.dim = n;
    field.label = "H^" + std::to_string(n) + " upper half-space";
    field.components = [n](std::span<const Jet2> x) {
        const Jet2& xn = x[static_cast<std::size_t>(n - 1)];
        if (xn.value() <= 0.0) {
            throw DomainError("hyperbolic chart is defined on x_n > 0");
        }
        return detail::conformal_diagonal(n, reciprocal(xn * xn));
    };
    return field;
}

// Constant-curvature metric with Ricci = lambda * g:
//   lambda = 0: identity (flat);
//   lambda > 0: radius-r sphere, g = 4 r^2 delta / (1 + |y|^2)^2, r^2 = (d-1)/lambda;
//   lambda < 0: scaled hyperbolic, g = k^2 delta / y_d^2, k^2 = (d-1)/(-lambda).
// The scaling works because multiplying a metric by a constant leaves the
// Ricci components unchanged.
inline MetricField space_form(const SpaceFormSpec& spec) {
    const int d = spec.dim;
    const double lambda = spec.einstein_constant;
    if (d < 1) throw DomainError("space_form: dimension must be >= 1, got " + std::to_string(d));
    if (d == 1 && lambda != 0.0) {
        throw DomainError("space_form: a 1-dimensional manifold is Ricci-flat; lambda must be 0");
    }
    if (spec.chart != chart_for(lambda)) {
        throw UsageError(std::string("space_form: chart '") + chart_label(spec.chart) +
                         "' does not match the sign of the Einstein constant");
    }

    MetricField field;
    field.dim = d;
    if (lambda == 0.0) {
        field.label = "flat R^" + std::to_string(d);
        field.components = [d](std::span<const Jet2> y) {
            return detail::conformal_diagonal(d, Jet2::constant(1.0, detail::jet_arity(y)));
        };
    } else if (lambda > 0.0) {
        const double r_sq = (d - 1) / lambda;
        field.label = "round sphere S^" + std::to_string(d);
        field.components = [d, r_sq](std::span<const Jet2> y) {
            Jet2 denom = Jet2::constant(1.0, detail::jet_arity(y));
            for (int i = 0; i < d; ++i) {
                const Jet2& yi = y[static_cast<std::size_t>(i)];
                denom = denom + yi * yi;
            }
            return detail::conformal_diagonal(d, (4.0 * r_sq) * reciprocal(denom * denom));
        };
    } else {
        const double k_sq = (d - 1) / (-lambda);
        field.label = "scaled hyperbolic H^" + std::to_string(d);
        field.components = [d, k_sq](std::span<const Jet2> y) {
            const Jet2& yd = y[static_cast<std::size_t>(d - 1)];
            if (yd.value() <= 0.0) {
                throw DomainError("hyperbolic chart is defined on y_d > 0");
            }
            return detail::conformal_diagonal(d, k_sq * reciprocal(yd * yd));
        };
    }
    return field;
}

inline MetricField space_form(int dim, double lambda) {
    return space_form(make_space_form_spec(dim, lambda));
}

inline MetricField flat_metric(int dim) { return space_form(dim, 0.0); }

// The warp family as a scalar field on n variables, defined on {x_n > 0}.
inline ScalarField theorem2_warp(const WarpParams& params) {
    detail::require_warp_param_lengths(params);
    ScalarField f;
    f.dim = params.n;
    f.label = "warp family";
    f.eval = [p = params](std::span<const Jet2> x) {
        const int n = p.n;
        const Jet2& xn = x[static_cast<std::size_t>(n - 1)];
        if (xn.value() <= 0.0) {
            throw DomainError("warp family is defined on x_n > 0");
        }
        Jet2 tangential = Jet2::constant(0.0, xn.arity());
        for (int j = 0; j < n - 1; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            const Jet2& xj = x[ju];
            tangential = tangential + (0.5 * p.a) * (xj * xj) + p.b_vec[ju] * xj + p.c_vec[ju];
        }
        const Jet2 inv_xn = reciprocal(xn);
        return tangential * inv_xn + (0.5 * p.a) * xn + p.b * inv_xn;
    };
    return f;
}

struct PositivityCheck {
    bool globally_positive = false;
    double c = 0.0;         // the constant in ||grad f||^2 = f^2 + c on H^n
    double lambda_F = 0.0;  // (d-1) * c
};

// Global-positivity predicate for the warp family (a > 0, b >= 0, and every
// tangential quadratic nonnegative: b_j^2 - 2 a c_j <= 0), plus the constant
// of the gradient identity. On H^n the family satisfies pointwise
//   ||grad f||^2 - f^2 = sum_j (b_j^2 - 2 a c_j) - 2 a b,
// which is the c of the linear-fit check; the fiber constant is (d-1) c.
// Under the predicate every summand of c is <= 0, so lambda_F <= 0.
inline PositivityCheck corollary4_check(const WarpParams& params, int d) {
    if (d < 1) throw DomainError("corollary4_check: fiber dimension must be >= 1");
    detail::require_warp_param_lengths(params);
    PositivityCheck out;
    bool quadratics_nonnegative = true;
    double c = -2.0 * params.a * params.b;
    for (std::size_t j = 0; j < params.b_vec.size(); ++j) {
        const double disc = params.b_vec[j] * params.b_vec[j] - 2.0 * params.a * params.c_vec[j];
        if (disc > 0.0) quadratics_nonnegative = false;
        c += disc;
    }
    out.globally_positive = params.a > 0.0 && params.b >= 0.0 && quadratics_nonnegative;
    out.c = c;
    out.lambda_F = (d - 1) * c;
    return out;
}

struct RicciFlatFiberCheck {
    bool applies = false;
    double lambda_F = 0.0;  // always 0 when the predicate applies
};

// Degenerate subfamily f = (sum_j c_j + b) / x_n: a = 0, b >= 0, all b_j = 0,
// and a positive numerator. Then ||grad f||^2 = f^2 (c = 0) and the fiber
// must be Ricci-flat. Parameter comparisons are exact: these are hypothesis
// selections on user-specified constants, not computed values.
inline RicciFlatFiberCheck corollary5_check(const WarpParams& params, int d) {
    if (d < 1) throw DomainError("corollary5_check: fiber dimension must be >= 1");
    detail::require_warp_param_lengths(params);
    bool zero_linear = true;
    double c_sum = 0.0;
    for (std::size_t j = 0; j < params.b_vec.size(); ++j) {
        if (params.b_vec[j] != 0.0) zero_linear = false;
        c_sum += params.c_vec[j];
    }
    RicciFlatFiberCheck out;
    out.applies = params.a == 0.0 && params.b >= 0.0 && (c_sum + params.b) > 0.0 && zero_linear;
    out.lambda_F = 0.0;
    return out;
}

} // namespace warpcheck
