#include "warpcheck/geometry.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "fd_oracle.hpp"
#include "warpcheck/errors.hpp"
#include "warpcheck/models.hpp"
#include "warpcheck/sampling.hpp"

namespace wc = warpcheck;

namespace {

constexpr double kTight = 1e-12;

// max |A - B| over all entries
double max_gap(const wc::Matrix<double>& a, const wc::Matrix<double>& b) {
    double gap = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) gap = std::max(gap, std::fabs(a(i, j) - b(i, j)));
    }
    return gap;
}

wc::ScalarField inverse_height(int n) {
    wc::WarpParams p;
    p.a = 0.0;
    p.b = 1.0;
    p.b_vec.assign(static_cast<std::size_t>(n - 1), 0.0);
    p.c_vec.assign(static_cast<std::size_t>(n - 1), 0.0);
    p.n = n;
    return wc::theorem2_warp(p);  // f = 1/x_n
}

} // namespace

TEST(Christoffel, HyperbolicThreeSpaceClosedForm) {
    // Gamma of delta/x3^2 at (0,0,1): Gamma^3_11 = Gamma^3_22 = 1,
    // Gamma^1_13 = Gamma^2_23 = Gamma^3_33 = -1, everything else 0.
    const wc::MetricField h3 = wc::hyperbolic_metric(3);
    const std::vector<double> point = {0.0, 0.0, 1.0};
    const wc::Tensor3<double> gamma = wc::christoffel(h3, point);

    for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                double expected = 0.0;
                if (k == 2 && i == j && i < 2) expected = 1.0;
                if (k < 2 && ((i == k && j == 2) || (i == 2 && j == k))) expected = -1.0;
                if (k == 2 && i == 2 && j == 2) expected = -1.0;
                EXPECT_NEAR(gamma(k, i, j), expected, kTight)
                    << "k=" << k << " i=" << i << " j=" << j;
            }
        }
    }

    // scaling: at (0,0,2) every nonzero symbol halves
    const wc::Tensor3<double> gamma2 = wc::christoffel(h3, std::vector<double>{0.0, 0.0, 2.0});
    EXPECT_NEAR(gamma2(2, 0, 0), 0.5, kTight);
    EXPECT_NEAR(gamma2(0, 0, 2), -0.5, kTight);
    EXPECT_NEAR(gamma2(2, 2, 2), -0.5, kTight);
}

TEST(Christoffel, ConformalClosedFormMatchesAdPath) {
    for (int n = 3; n <= 5; ++n) {
        const wc::MetricField metric = wc::hyperbolic_metric(n);
        wc::ScalarField height;
        height.dim = n;
        height.label = "x_n";
        height.eval = [n](std::span<const wc::Jet2> x) {
            return x[static_cast<std::size_t>(n - 1)];
        };

        wc::Rng rng(11);
        wc::SamplingParams params;
        params.count = 5;
        for (const auto& point :
             wc::sample_chart_points(wc::ChartKind::upper_half_space, n, params, rng)) {
            const wc::Tensor3<double> ad = wc::christoffel(metric, point);
            const wc::Tensor3<double> closed = wc::conformal_christoffel(height, point);
            for (int k = 0; k < n; ++k) {
                for (int i = 0; i < n; ++i) {
                    for (int j = 0; j < n; ++j) {
                        EXPECT_NEAR(ad(k, i, j), closed(k, i, j), kTight);
                    }
                }
            }
        }
    }
}

TEST(Ricci, HyperbolicSpaceIsEinstein) {
    // Ric = -(n-1) g on H^n
    for (int n = 3; n <= 6; ++n) {
        const wc::MetricField metric = wc::hyperbolic_metric(n);
        wc::Rng rng(5);
        wc::SamplingParams params;
        params.count = 10;
        for (const auto& point :
             wc::sample_chart_points(wc::ChartKind::upper_half_space, n, params, rng)) {
            const wc::CurvatureAtPoint curv = wc::ricci(metric, point);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    EXPECT_NEAR(curv.ricci(i, j), -(n - 1.0) * curv.metric_value(i, j), 1e-10);
                }
            }
            EXPECT_NEAR(curv.scalar_curvature, -static_cast<double>(n) * (n - 1), 1e-9);
            EXPECT_NEAR(curv.normalized_scalar, -1.0, 1e-10);
        }
    }
}

TEST(Ricci, SphereAndFlatSpaceForms) {
    const wc::MetricField sphere = wc::space_form(3, 2.0);
    wc::Rng rng(3);
    wc::SamplingParams params;
    params.count = 10;
    for (const auto& point :
         wc::sample_chart_points(wc::ChartKind::stereographic, 3, params, rng)) {
        const wc::CurvatureAtPoint curv = wc::ricci(sphere, point);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                EXPECT_NEAR(curv.ricci(i, j), 2.0 * curv.metric_value(i, j), 1e-10);
            }
        }
    }

    const wc::MetricField flat = wc::flat_metric(4);
    const std::vector<double> origin = {0.3, -1.0, 2.0, 0.7};
    const wc::CurvatureAtPoint curv = wc::ricci(flat, origin);
    EXPECT_EQ(wc::max_abs(curv.ricci), 0.0);
    for (int k = 0; k < 4; ++k) {
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) EXPECT_EQ(curv.christoffel(k, i, j), 0.0);
        }
    }
}

TEST(Ricci, GenericMetricMatchesFiniteDifferences) {
    // a metric with no special symmetry, to exercise every contraction term
    wc::MetricField metric;
    metric.dim = 3;
    metric.label = "diag(1+x1^2, 1+x2^2, 1) + off-diagonal coupling";
    metric.components = [](std::span<const wc::Jet2> x) {
        const int arity = x[0].arity();
        wc::Matrix<wc::Jet2> g(3, 3, wc::Jet2::constant(0.0, arity));
        g(0, 0) = 1.0 + x[0] * x[0];
        g(1, 1) = 1.0 + x[1] * x[1];
        g(2, 2) = wc::Jet2::constant(1.0, arity);
        g(0, 1) = 0.1 * x[2];
        g(1, 0) = g(0, 1);
        return g;
    };

    const std::vector<std::vector<double>> points = {
        {0.4, -0.3, 0.8}, {1.2, 0.5, -0.6}, {-0.7, 1.1, 0.2}};
    for (const auto& point : points) {
        const wc::CurvatureAtPoint curv = wc::ricci(metric, point);
        const wc::Matrix<double> oracle = fd::ricci(metric, point, 1e-4);
        EXPECT_LT(max_gap(curv.ricci, oracle), 1e-6);
    }
}

TEST(ScalarCalculus, FlatHessianIsPlainSecondDerivatives) {
    const wc::MetricField flat = wc::flat_metric(2);
    wc::ScalarField f;
    f.dim = 2;
    f.label = "x1^2 x2";
    f.eval = [](std::span<const wc::Jet2> x) { return x[0] * x[0] * x[1]; };

    const std::vector<double> point = {1.5, -2.0};
    const wc::Matrix<double> hess = wc::hessian_scalar(flat, f, point);
    EXPECT_DOUBLE_EQ(hess(0, 0), 2.0 * point[1]);
    EXPECT_DOUBLE_EQ(hess(0, 1), 2.0 * point[0]);
    EXPECT_DOUBLE_EQ(hess(1, 0), 2.0 * point[0]);
    EXPECT_DOUBLE_EQ(hess(1, 1), 0.0);
}

TEST(ScalarCalculus, InverseHeightIdentitiesOnH3) {
    // f = 1/x3 on H^3 satisfies Hess f = f g, lap f = 3 f, ||grad f||^2 = f^2
    const wc::MetricField h3 = wc::hyperbolic_metric(3);
    const wc::ScalarField f = inverse_height(3);

    wc::Rng rng(17);
    wc::SamplingParams params;
    params.count = 20;
    for (const auto& point :
         wc::sample_chart_points(wc::ChartKind::upper_half_space, 3, params, rng)) {
        const double fv = 1.0 / point[2];
        const wc::Matrix<double> hess = wc::hessian_scalar(h3, f, point);
        const wc::Matrix<double> g = wc::metric_values(h3, point);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) EXPECT_NEAR(hess(i, j), fv * g(i, j), kTight);
        }
        EXPECT_NEAR(wc::laplacian(h3, f, point), 3.0 * fv, kTight);
        EXPECT_NEAR(wc::gradient_norm_sq(h3, f, point), fv * fv, kTight);
    }
}

TEST(ScalarCalculus, MatchesFiniteDifferenceOracle) {
    const wc::MetricField h3 = wc::hyperbolic_metric(3);
    wc::ScalarField f;
    f.dim = 3;
    f.label = "x1 x2 / x3";
    f.eval = [](std::span<const wc::Jet2> x) { return x[0] * x[1] / x[2]; };

    const double h = 1e-4;
    const std::vector<std::vector<double>> points = {{0.5, 1.0, 2.0}, {-1.0, 2.0, 0.9}};
    for (const auto& point : points) {
        EXPECT_LT(max_gap(wc::hessian_scalar(h3, f, point), fd::hessian(h3, f, point, h)), 1e-6);
        EXPECT_NEAR(wc::laplacian(h3, f, point), fd::laplacian(h3, f, point, h), 1e-6);
        EXPECT_NEAR(wc::gradient_norm_sq(h3, f, point), fd::gradient_norm_sq(h3, f, point, h),
                    1e-6);
    }
}

TEST(GeometryErrors, ShapeAndDomainViolations) {
    const wc::MetricField h3 = wc::hyperbolic_metric(3);
    EXPECT_THROW(wc::ricci(h3, std::vector<double>{1.0, 2.0}), wc::UsageError);
    EXPECT_THROW(wc::christoffel(h3, std::vector<double>{0.0, 0.0, -1.0}), wc::DomainError);

    wc::MetricField asymmetric;
    asymmetric.dim = 2;
    asymmetric.label = "broken symmetry";
    asymmetric.components = [](std::span<const wc::Jet2> x) {
        wc::Matrix<wc::Jet2> g(2, 2, wc::Jet2::constant(0.0, x[0].arity()));
        g(0, 0) = wc::Jet2::constant(1.0, x[0].arity());
        g(1, 1) = wc::Jet2::constant(1.0, x[0].arity());
        g(0, 1) = x[0];
        g(1, 0) = -x[0];
        return g;
    };
    EXPECT_THROW(wc::ricci(asymmetric, std::vector<double>{1.0, 1.0}), wc::Error);

    const wc::ScalarField f = inverse_height(3);
    EXPECT_THROW(wc::hessian_scalar(wc::flat_metric(2), f, std::vector<double>{1.0, 1.0}),
                 wc::UsageError);
}
