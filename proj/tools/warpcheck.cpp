// Command-line front end: parse a scenario file, run the requested curvature
// checks over deterministic point samples, and emit a JSON or text report.
//
// Exit codes: 0 all checks pass, 1 at least one check fails, 2 configuration
// or parse error, 3 numeric error (singular metric, domain violation).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "warpcheck/errors.hpp"
#include "warpcheck/models.hpp"
#include "warpcheck/report.hpp"
#include "warpcheck/runner.hpp"
#include "warpcheck/scenario.hpp"

namespace {

struct RunOptions {
    std::string scenario_path;
    std::string report_path;
    std::string format = "text";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int samples = 0;
    bool samples_given = false;
    std::vector<std::string> tolerance_overrides;  // NAME=VALUE
};

void apply_overrides(warpcheck::Scenario& scenario, const RunOptions& options) {
    if (options.seed_given) scenario.sampling.seed = options.seed;
    if (options.samples_given) {
        if (options.samples < 1 || options.samples > 10000) {
            throw warpcheck::UsageError("--samples must be between 1 and 10000");
        }
        scenario.sampling.count = options.samples;
    }
    for (const std::string& raw : options.tolerance_overrides) {
        const auto eq = raw.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == raw.size()) {
            throw warpcheck::UsageError("--tolerance expects NAME=VALUE, got '" + raw + "'");
        }
        const std::string name = raw.substr(0, eq);
        double value = 0.0;
        try {
            value = std::stod(raw.substr(eq + 1));
        } catch (const std::exception&) {
            throw warpcheck::UsageError("--tolerance value is not a number in '" + raw + "'");
        }
        if (value <= 0.0) throw warpcheck::UsageError("--tolerance value must be positive");
        const auto it = scenario.tolerances.find(name);
        if (it == scenario.tolerances.end()) {
            throw warpcheck::UsageError("--tolerance names check '" + name +
                                        "', which the scenario does not request");
        }
        it->second = value;
    }
}

int run_command(const RunOptions& options) {
    warpcheck::Scenario scenario = warpcheck::parse_scenario_file(options.scenario_path);
    apply_overrides(scenario, options);
    const warpcheck::ScenarioOutcome outcome = warpcheck::run_scenario(scenario);
    std::cout << warpcheck::emit_report(outcome.report, options.format);
    if (!options.report_path.empty()) {
        std::ofstream out(options.report_path, std::ios::binary);
        if (!out) {
            throw warpcheck::UsageError("cannot write report file: " + options.report_path);
        }
        out << warpcheck::emit_json(outcome.report);
    }
    return outcome.exit_code;
}

int list_models_command() {
    std::cout << "model kinds (usable as base or fiber):\n"
              << "  hyperbolic   dim >= 2, upper-half-space chart, lambda = -(dim - 1)\n"
              << "  flat         dim >= 1, cartesian chart, lambda = 0\n"
              << "  sphere       dim >= 2, stereographic chart, lambda > 0 (default dim - 1)\n"
              << "  space_form   dim >= 1, chart from the sign of lambda; dim 1 needs lambda = 0\n"
              << "warp forms:\n"
              << "  family       f = (1/x_n) sum_j ((a/2) x_j^2 + b_j x_j + c_j)"
                 " + (a/2) x_n + b/x_n\n"
              << "  expression   arithmetic over x1..xn with + - * / ^int sqrt()\n"
              << "checks:\n"
              << "  einstein theorem1 pde corollary4 corollary5 crosscheck\n";
    return 0;
}

int check_params_command(const std::string& path) {
    const warpcheck::Scenario scenario = warpcheck::parse_scenario_file(path);
    if (!scenario.warp_is_family) {
        throw warpcheck::UsageError("check-params needs a family warp (no curvature is run)");
    }
    const int d = scenario.fiber.dim;
    const warpcheck::PositivityCheck positivity =
        warpcheck::corollary4_check(scenario.family, d);
    const warpcheck::RicciFlatFiberCheck flat_fiber =
        warpcheck::corollary5_check(scenario.family, d);
    std::cout << "scenario: " << scenario.name << "\n"
              << "globally_positive: " << (positivity.globally_positive ? "true" : "false")
              << "\n"
              << "c = " << warpcheck::format_double(positivity.c) << "\n"
              << "lambda_F = " << warpcheck::format_double(positivity.lambda_F) << "\n"
              << "ricci_flat_subfamily: " << (flat_fiber.applies ? "true" : "false") << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical curvature checks for warped-product metrics"};
    app.require_subcommand(1);

    RunOptions options;
    CLI::App* run = app.add_subcommand("run", "run a scenario file and report check results");
    run->add_option("scenario", options.scenario_path, "scenario JSON file")->required();
    run->add_option("--report", options.report_path, "also write the JSON report to this file");
    run->add_option("--format", options.format, "stdout format")
        ->check(CLI::IsMember({"json", "text"}));
    CLI::Option* seed_opt =
        run->add_option("--seed", options.seed, "override the sampling seed");
    CLI::Option* samples_opt =
        run->add_option("--samples", options.samples, "override the sample count");
    run->add_option("--tolerance", options.tolerance_overrides,
                    "override a check tolerance as NAME=VALUE (repeatable)");

    app.add_subcommand("list-models", "list model kinds, warp forms, and checks");

    std::string params_path;
    CLI::App* params =
        app.add_subcommand("check-params", "evaluate warp parameter predicates, no curvature");
    params->add_option("scenario", params_path, "scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& err) {
        return app.exit(err);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return 2;
    }

    try {
        if (run->parsed()) {
            options.seed_given = seed_opt->count() > 0;
            options.samples_given = samples_opt->count() > 0;
            return run_command(options);
        }
        if (params->parsed()) return check_params_command(params_path);
        return list_models_command();
    } catch (const warpcheck::ParseError& err) {
        std::cerr << "parse error at line " << err.line << ", column " << err.column << ": "
                  << err.what() << "\n";
        return 2;
    } catch (const warpcheck::ValidationError& err) {
        std::cerr << "invalid scenario: " << err.what() << "\n";
        return 2;
    } catch (const warpcheck::UsageError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const warpcheck::Error& err) {
        std::cerr << warpcheck::error_kind(err) << ": " << err.what() << "\n";
        return 3;
    }
}
