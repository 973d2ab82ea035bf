#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "warpcheck/errors.hpp"
#include "warpcheck/geometry.hpp"
#include "warpcheck/models.hpp"
#include "warpcheck/report.hpp"
#include "warpcheck/sampling.hpp"
#include "warpcheck/scenario.hpp"
#include "warpcheck/verify.hpp"
#include "warpcheck/warped.hpp"

namespace warpcheck {

struct ScenarioOutcome {
    RunReport report;
    int exit_code = 0;  // 0 all pass, 1 check failure, 3 numeric error inside a check
};

// Runs every requested check over one deterministic point sample. Errors from
// individual checks are captured into the report instead of aborting the run;
// configuration problems (bad counts, unbuildable models) still throw.
inline ScenarioOutcome run_scenario(const Scenario& scenario) {
    if (scenario.sampling.count < 1) {
        throw UsageError("sampling count must be >= 1 to run checks");
    }
    const int n = scenario.base.dim;
    const int d = scenario.fiber.dim;

    const MetricField base_metric = build_metric(scenario.base);
    const MetricField fiber_metric = build_metric(scenario.fiber);
    const ScalarField warp = build_warp(scenario);
    const WarpedProductSpec product_spec{base_metric, fiber_metric, warp, n, d};

    // One interleaved draw per sample index, fixed before any check runs, so
    // every check sees the same points regardless of which checks are enabled.
    Rng rng(scenario.sampling.seed);
    std::vector<std::vector<double>> base_points, fiber_points, product_points;
    base_points.reserve(static_cast<std::size_t>(scenario.sampling.count));
    fiber_points.reserve(base_points.capacity());
    product_points.reserve(base_points.capacity());
    for (int i = 0; i < scenario.sampling.count; ++i) {
        base_points.push_back(sample_chart_point(scenario.base.chart, n, scenario.sampling, rng));
        fiber_points.push_back(
            sample_chart_point(scenario.fiber.chart, d, scenario.sampling, rng));
        product_points.push_back(concat_point(base_points.back(), fiber_points.back()));
    }

    const double lambda_B = scenario.base.lambda;
    const double lambda_F = scenario.fiber.lambda;
    const double rho = lambda_B / (n - 1);

    RunReport report;
    report.scenario = normalized_scenario(scenario);

    std::optional<double> fitted_c;
    bool numeric_error = false;
    using clock = std::chrono::steady_clock;
    const auto run_started = clock::now();

    for (const std::string& name : scenario.checks) {
        CheckResult result;
        result.name = name;
        result.tolerance = scenario.tolerances.at(name);
        const auto check_started = clock::now();
        try {
            if (name == "einstein") {
                const MetricField product = assemble_product_metric(product_spec);
                const EinsteinReport einstein = einstein_residual(product, product_points);
                // Fold the per-point spread of lambda into the residual so
                // pass <=> residual <= tolerance also rejects non-constant Ricci.
                result.residual = std::max(einstein.max_residual, einstein.lambda_stddev);
            } else if (name == "theorem1") {
                const TheoremOneReport suite =
                    run_theorem1_suite(product_spec, lambda_B, lambda_F, base_points);
                fitted_c = suite.c_fit;
                result.residual = std::max(std::max(suite.residual_i, suite.residual_ii),
                                           std::max(suite.residual_iii, suite.residual_iv));
            } else if (name == "pde") {
                result.residual = check_pde_system(warp, base_points).max();
            } else if (name == "corollary4") {
                const PositivityCheck positivity = corollary4_check(scenario.family, d);
                if (!positivity.globally_positive) {
                    result.error = "validation error: parameters are not globally positive "
                                   "(need a > 0, b >= 0, and b_j^2 - 2 a c_j <= 0)";
                } else {
                    double gap = 0.0;
                    for (const auto& point : base_points) {
                        const double f = evaluate_scalar(warp, point).value();
                        const double q =
                            gradient_norm_sq(base_metric, warp, point) + rho * f * f;
                        gap = std::max(gap, std::fabs(q - positivity.c));
                    }
                    result.residual = gap;
                }
            } else if (name == "corollary5") {
                const RicciFlatFiberCheck flat_fiber = corollary5_check(scenario.family, d);
                if (!flat_fiber.applies) {
                    result.error = "validation error: parameters are not in the a = 0, b_j = 0, "
                                   "sum c_j + b > 0 subfamily";
                } else {
                    double gap = 0.0;
                    for (const auto& point : base_points) {
                        const double f = evaluate_scalar(warp, point).value();
                        gap = std::max(gap,
                                       std::fabs(gradient_norm_sq(base_metric, warp, point) - f * f));
                    }
                    result.residual = gap;
                }
            } else if (name == "crosscheck") {
                double gap = 0.0;
                for (std::size_t i = 0; i < base_points.size(); ++i) {
                    gap = std::max(gap,
                                   cross_check_ricci(product_spec, base_points[i], fiber_points[i]));
                }
                result.residual = gap;
            } else {
                throw UsageError("unknown check: " + name);
            }
            result.pass = result.residual.has_value() && *result.residual <= result.tolerance;
        } catch (const Error& err) {
            result.pass = false;
            result.residual.reset();
            result.error = std::string(error_kind(err)) + ": " + err.what();
            if (is_numeric_error(err)) numeric_error = true;
        }
        const std::chrono::duration<double> elapsed = clock::now() - check_started;
        report.timings[name] = elapsed.count();
        report.checks.push_back(std::move(result));
    }
    const std::chrono::duration<double> total = clock::now() - run_started;
    report.timings["total"] = total.count();

    report.derived_constants.emplace_back("lambda_B", lambda_B);
    report.derived_constants.emplace_back("lambda_F", lambda_F);
    report.derived_constants.emplace_back("rho", rho);
    if (n >= 3) {
        report.derived_constants.emplace_back("lambda", lambda_from_base(n, d, lambda_B));
    }
    if (fitted_c.has_value()) {
        report.derived_constants.emplace_back("c", *fitted_c);
    } else if (scenario.warp_is_family) {
        report.derived_constants.emplace_back("c", corollary4_check(scenario.family, d).c);
    }

    ScenarioOutcome outcome;
    outcome.report = std::move(report);
    outcome.exit_code = 0;
    for (const auto& check : outcome.report.checks) {
        if (!check.pass) outcome.exit_code = 1;
    }
    if (numeric_error) outcome.exit_code = 3;
    return outcome;
}

} // namespace warpcheck
