#include "warpcheck/verify.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "warpcheck/errors.hpp"
#include "warpcheck/expression.hpp"
#include "warpcheck/models.hpp"
#include "warpcheck/sampling.hpp"
#include "warpcheck/warped.hpp"

namespace wc = warpcheck;

namespace {

wc::WarpParams flagship_params() {
    wc::WarpParams p;
    p.a = 0.0;
    p.b = 1.0;
    p.b_vec = {0.0, 0.0};
    p.c_vec = {0.0, 0.0};
    p.n = 3;
    return p;
}

wc::WarpedProductSpec flagship() {
    wc::WarpedProductSpec spec;
    spec.base = wc::hyperbolic_metric(3);
    spec.fiber = wc::flat_metric(2);
    spec.warp = wc::theorem2_warp(flagship_params());
    spec.n = 3;
    spec.d = 2;
    return spec;
}

std::vector<std::vector<double>> base_points(int count, std::uint64_t seed) {
    wc::Rng rng(seed);
    wc::SamplingParams params;
    params.count = count;
    return wc::sample_chart_points(wc::ChartKind::upper_half_space, 3, params, rng);
}

} // namespace

TEST(EinsteinResidual, RecoversTheConstantOnModelSpaces) {
    const auto points = base_points(30, 4);
    const wc::EinsteinReport report = wc::einstein_residual(wc::hyperbolic_metric(3), points);

    EXPECT_NEAR(report.lambda_estimate, -2.0, 1e-11);
    EXPECT_LT(report.lambda_stddev, 1e-11);
    EXPECT_LT(report.max_residual, 1e-11);
    EXPECT_EQ(report.points_checked, 30);
    ASSERT_EQ(report.per_point.size(), 30u);
    EXPECT_EQ(report.per_point[0].point.size(), 3u);
}

TEST(EinsteinResidual, FlagsNonEinsteinMetrics) {
    // unwarped product H^3 x R^2: Ric = diag(-2 g_B, 0), traces to a constant
    // lambda-hat = -1.2 but the residual stays O(1)
    wc::WarpedProductSpec spec = flagship();
    spec.warp = wc::expression_warp("1", 3);
    const wc::MetricField product = wc::assemble_product_metric(spec);

    wc::Rng rng(8);
    wc::SamplingParams params;
    params.count = 10;
    std::vector<std::vector<double>> points;
    for (int i = 0; i < params.count; ++i) {
        const auto base = wc::sample_chart_point(wc::ChartKind::upper_half_space, 3, params, rng);
        const auto fiber = wc::sample_chart_point(wc::ChartKind::cartesian, 2, params, rng);
        points.push_back(wc::concat_point(base, fiber));
    }

    const wc::EinsteinReport report = wc::einstein_residual(product, points);
    EXPECT_NEAR(report.lambda_estimate, -1.2, 1e-9);
    EXPECT_GT(report.max_residual, 0.1);

    EXPECT_THROW(wc::einstein_residual(product, std::vector<std::vector<double>>{}),
                 wc::UsageError);
}

TEST(LambdaFromBase, ProductFormAndExactZero) {
    EXPECT_EQ(wc::lambda_from_base(3, 2, -2.0), -4.0);
    EXPECT_NEAR(wc::lambda_from_base(4, 5, -3.0), -8.0, 1e-13);

    // exact-zero contract, both signs of zero and a spread of shapes
    for (int n = 3; n <= 8; ++n) {
        for (int d = 1; d <= 5; ++d) {
            EXPECT_EQ(wc::lambda_from_base(n, d, 0.0), 0.0);
            EXPECT_NE(wc::lambda_from_base(n, d, -1.0), 0.0);
            EXPECT_NE(wc::lambda_from_base(n, d, 2.0), 0.0);
        }
    }

    EXPECT_THROW(wc::lambda_from_base(2, 1, -1.0), wc::DomainError);
    EXPECT_THROW(wc::lambda_from_base(3, 0, -1.0), wc::DomainError);
}

TEST(ConditionI, HessianProportionalityOnAndOffTheFamily) {
    const auto points = base_points(15, 21);
    const wc::WarpedProductSpec good = flagship();
    EXPECT_LT(wc::check_condition_i(good, -4.0, -2.0, points), 1e-12);

    wc::WarpedProductSpec bad = flagship();
    bad.warp = wc::expression_warp("x3", 3);
    EXPECT_GT(wc::check_condition_i(bad, -4.0, -2.0, points), 0.05);
}

TEST(ConditionIII, CenteredFitRecoversBAndC) {
    const auto points = base_points(25, 33);
    const wc::MetricField h3 = wc::hyperbolic_metric(3);

    // flagship: ||grad f||^2 - f^2 = 0, so b = c = 0
    const wc::LinearFit flag = wc::check_condition_iii(h3, wc::theorem2_warp(flagship_params()),
                                                       -1.0, points);
    EXPECT_FALSE(flag.degenerate);
    EXPECT_NEAR(flag.b_fit, 0.0, 1e-12);
    EXPECT_NEAR(flag.c_fit, 0.0, 1e-12);
    EXPECT_LT(flag.residual, 1e-12);

    // quadratic example: c = sum(b_j^2 - 2 a c_j) - 2 a b = -12
    wc::WarpParams quad;
    quad.a = 2.0;
    quad.b = 1.0;
    quad.b_vec = {0.0, 0.0};
    quad.c_vec = {1.0, 1.0};
    quad.n = 3;
    const wc::LinearFit fit = wc::check_condition_iii(h3, wc::theorem2_warp(quad), -1.0, points);
    EXPECT_NEAR(fit.b_fit, 0.0, 1e-10);
    EXPECT_NEAR(fit.c_fit, -12.0, 1e-9);
    EXPECT_LT(fit.residual, 1e-9);

    // identical points give zero variance in f: fit degenerates to the mean
    const std::vector<std::vector<double>> same(5, std::vector<double>{0.0, 0.0, 2.0});
    const wc::LinearFit flat_fit =
        wc::check_condition_iii(h3, wc::theorem2_warp(flagship_params()), -1.0, same);
    EXPECT_TRUE(flat_fit.degenerate);
    EXPECT_EQ(flat_fit.b_fit, 0.0);

    EXPECT_THROW(wc::check_condition_iii(h3, wc::theorem2_warp(flagship_params()), -1.0,
                                         std::vector<std::vector<double>>(2, {0.0, 0.0, 1.0})),
                 wc::UsageError);
}

TEST(FiberLambda, ScalesWithFiberDimension) {
    EXPECT_DOUBLE_EQ(wc::fiber_lambda_from_c(2, -12.0), -12.0);
    EXPECT_DOUBLE_EQ(wc::fiber_lambda_from_c(3, -12.0), -24.0);
    EXPECT_EQ(wc::fiber_lambda_from_c(1, -12.0), 0.0);
    EXPECT_THROW(wc::fiber_lambda_from_c(0, 1.0), wc::DomainError);
}

TEST(PdeSystem, WarpFamilySolvesItAndOutsidersDoNot) {
    const auto points = base_points(20, 55);

    wc::WarpParams p;
    p.a = -1.5;
    p.b = 2.0;
    p.b_vec = {0.7, -0.3};
    p.c_vec = {1.0, -2.0};
    p.n = 3;
    EXPECT_LT(wc::check_pde_system(wc::theorem2_warp(p), points).max(), 1e-12);

    // f = x3: the two radial equations pick up -2 x3
    const wc::PdeResiduals linear = wc::check_pde_system(wc::expression_warp("x3", 3), points);
    EXPECT_GT(linear.max(), 0.5);
    EXPECT_EQ(linear.off_diagonal, 0.0);

    // f = x1 x2 / x3: only the off-diagonal family sees the failure
    const wc::PdeResiduals mixed =
        wc::check_pde_system(wc::expression_warp("x1*x2/x3", 3), points);
    EXPECT_GT(mixed.off_diagonal, 0.15);
    EXPECT_LT(mixed.radial, 1e-12);

    EXPECT_THROW(wc::check_pde_system(wc::theorem2_warp(p), std::vector<std::vector<double>>{}),
                 wc::UsageError);
}

TEST(Corollary3, SphereRadiusDetector) {
    // hypothesis needs lambda > lambda_B; hyperbolic-base warps sit below it
    EXPECT_FALSE(wc::corollary3_radius(-2.0, -4.0, 2).has_value());

    const auto radius = wc::corollary3_radius(-2.0, 0.0, 2);
    ASSERT_TRUE(radius.has_value());
    EXPECT_DOUBLE_EQ(*radius, 1.0);

    EXPECT_THROW(wc::corollary3_radius(0.0, 1.0, 0), wc::DomainError);
}

TEST(TheoremOneSuite, FlagshipPassesAllFourConditions) {
    const auto points = base_points(30, 42);
    const wc::TheoremOneReport report = wc::run_theorem1_suite(flagship(), -2.0, 0.0, points);

    EXPECT_DOUBLE_EQ(report.lambda, -4.0);
    EXPECT_DOUBLE_EQ(report.rho, -1.0);
    EXPECT_LT(report.residual_i, 1e-11);
    EXPECT_EQ(report.residual_ii, 0.0);
    EXPECT_LT(report.residual_iii, 1e-11);
    EXPECT_LT(report.residual_iv, 1e-11);
    EXPECT_FALSE(report.fit_degenerate);
}

TEST(TheoremOneSuite, WrongFiberConstantFailsConditionIv) {
    // declaring lambda_F = -9 against a fitted c of -12 leaves a gap of 3
    wc::WarpParams quad;
    quad.a = 2.0;
    quad.b = 1.0;
    quad.b_vec = {0.0, 0.0};
    quad.c_vec = {1.0, 1.0};
    quad.n = 3;

    wc::WarpedProductSpec spec;
    spec.base = wc::hyperbolic_metric(3);
    spec.fiber = wc::space_form(2, -9.0);
    spec.warp = wc::theorem2_warp(quad);
    spec.n = 3;
    spec.d = 2;

    const auto points = base_points(30, 42);
    const wc::TheoremOneReport report = wc::run_theorem1_suite(spec, -2.0, -9.0, points);
    EXPECT_LT(report.residual_i, 1e-9);
    EXPECT_LT(report.residual_iii, 1e-8);
    EXPECT_NEAR(report.residual_iv, 3.0, 1e-8);
}
