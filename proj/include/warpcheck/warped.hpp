#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "warpcheck/errors.hpp"
#include "warpcheck/fields.hpp"
#include "warpcheck/geometry.hpp"
#include "warpcheck/jet.hpp"
#include "warpcheck/linalg.hpp"

namespace warpcheck {

// ---------------------------------------------------------------------------
// Warped product B x_f F, metric g = g_B + f^2 g_F. Chart coordinates are the
// concatenation (base coords, fiber coords); all block indexing follows this
// order. Two independent Ricci paths live here: direct curvature of the
// assembled (n+d)-dimensional metric, and the block formulas built from
// base-intrinsic operators only.
// ---------------------------------------------------------------------------

struct WarpedProductSpec {
    MetricField base;   // dim n >= 3
    MetricField fiber;  // dim d >= 1
    ScalarField warp;   // scalar field on the base chart, must stay positive
    int n = 0;
    int d = 0;
};

inline void validate(const WarpedProductSpec& spec) {
    if (spec.n < 3) {
        throw UsageError("warped product base dimension must be >= 3, got " +
                         std::to_string(spec.n));
    }
    if (spec.d < 1) {
        throw UsageError("warped product fiber dimension must be >= 1, got " +
                         std::to_string(spec.d));
    }
    if (spec.base.dim != spec.n || spec.fiber.dim != spec.d || spec.warp.dim != spec.n) {
        throw UsageError("warped product dimensions do not match its base/fiber/warp fields");
    }
}

inline std::vector<double> concat_point(std::span<const double> base_point,
                                        std::span<const double> fiber_point) {
    std::vector<double> point;
    point.reserve(base_point.size() + fiber_point.size());
    point.insert(point.end(), base_point.begin(), base_point.end());
    point.insert(point.end(), fiber_point.begin(), fiber_point.end());
    return point;
}

// Block-diagonal product metric: upper block g_B(x), lower block f(x)^2 g_F(y).
// The warp factor is evaluated in jets of the full n+d variables, so its fiber
// partials are exactly zero and the direct curvature path differentiates
// through f like through any other chart function.
inline MetricField assemble_product_metric(const WarpedProductSpec& spec) {
    validate(spec);
    MetricField product;
    product.dim = spec.n + spec.d;
    product.label = spec.base.label + " warped with " + spec.fiber.label;
    product.components = [spec](std::span<const Jet2> z) {
        const int n = spec.n;
        const int d = spec.d;
        const auto base_coords = z.first(static_cast<std::size_t>(n));
        const auto fiber_coords = z.subspan(static_cast<std::size_t>(n));
        const Matrix<Jet2> gb = spec.base.components(base_coords);
        const Matrix<Jet2> gf = spec.fiber.components(fiber_coords);
        const Jet2 f = spec.warp.eval(base_coords);
        if (f.value() <= 0.0) {
            throw DomainViolation("warping function is not positive at the sampled point");
        }
        const Jet2 f_sq = f * f;
        Matrix<Jet2> g(n + d, n + d, Jet2::constant(0.0, f.arity()));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) g(i, j) = gb(i, j);
        }
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) g(n + i, n + j) = f_sq * gf(i, j);
        }
        return g;
    };
    return product;
}

struct RicciBlocks {
    Matrix<double> base_block;   // n x n
    Matrix<double> mixed_block;  // n x d, identically zero on the block path
    Matrix<double> fiber_block;  // d x d
};

// Ricci of the warped product from base/fiber-intrinsic quantities only:
//   Ric(X, Y) = Ric_B(X, Y) - (d/f) Hess_B f(X, Y)
//   Ric(X, Z) = 0
//   Ric(Z, W) = Ric_F(Z, W) - f^2 g_F(Z, W) (lap f / f + (d-1) ||grad f||^2 / f^2)
// This path never assembles the product metric, so agreement with the direct
// path is a genuine cross-check above the jet layer.
inline RicciBlocks oneill_ricci(const WarpedProductSpec& spec,
                                std::span<const double> base_point,
                                std::span<const double> fiber_point) {
    validate(spec);
    const int n = spec.n;
    const int d = spec.d;

    const double f = evaluate_scalar(spec.warp, base_point).value();
    if (f <= 0.0) {
        throw DomainViolation("warping function is not positive at the sampled point");
    }
    const CurvatureAtPoint base_curv = ricci(spec.base, base_point);
    const Matrix<double> hess_f = hessian_scalar(spec.base, spec.warp, base_point);
    const double lap_f = laplacian(spec.base, spec.warp, base_point);
    const double grad_sq = gradient_norm_sq(spec.base, spec.warp, base_point);

    const CurvatureAtPoint fiber_curv = ricci(spec.fiber, fiber_point);

    RicciBlocks blocks;
    blocks.base_block = Matrix<double>(n, n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            blocks.base_block(i, j) = base_curv.ricci(i, j) - (d / f) * hess_f(i, j);
        }
    }
    blocks.mixed_block = Matrix<double>(n, d, 0.0);
    // The (d-1) factor kills the gradient term for 1-dimensional fibers.
    const double radial = lap_f / f + (d - 1) * grad_sq / (f * f);
    blocks.fiber_block = Matrix<double>(d, d, 0.0);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            blocks.fiber_block(i, j) =
                fiber_curv.ricci(i, j) - f * f * fiber_curv.metric_value(i, j) * radial;
        }
    }
    return blocks;
}

// The blocks laid out as one (n+d) x (n+d) matrix in chart order.
inline Matrix<double> assemble_blocks(const RicciBlocks& blocks) {
    const int n = blocks.base_block.rows();
    const int d = blocks.fiber_block.rows();
    Matrix<double> full(n + d, n + d, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) full(i, j) = blocks.base_block(i, j);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) {
            full(i, n + j) = blocks.mixed_block(i, j);
            full(n + j, i) = blocks.mixed_block(i, j);
        }
    }
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) full(n + i, n + j) = blocks.fiber_block(i, j);
    }
    return full;
}

// Max entrywise gap between the direct and block Ricci paths, relative to
// 1 + max |Ric_direct| so Ricci-flat cases stay well-conditioned.
inline double cross_check_ricci(const WarpedProductSpec& spec,
                                std::span<const double> base_point,
                                std::span<const double> fiber_point) {
    const MetricField product = assemble_product_metric(spec);
    const std::vector<double> point = concat_point(base_point, fiber_point);
    const CurvatureAtPoint direct = ricci(product, point);
    const Matrix<double> blocks = assemble_blocks(oneill_ricci(spec, base_point, fiber_point));

    double gap = 0.0;
    for (int i = 0; i < direct.ricci.rows(); ++i) {
        for (int j = 0; j < direct.ricci.cols(); ++j) {
            gap = std::max(gap, std::fabs(direct.ricci(i, j) - blocks(i, j)));
        }
    }
    return gap / (1.0 + max_abs(direct.ricci));
}

} // namespace warpcheck
