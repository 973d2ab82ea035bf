#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "warpcheck/errors.hpp"
#include "warpcheck/expression.hpp"
#include "warpcheck/fields.hpp"
#include "warpcheck/models.hpp"
#include "warpcheck/sampling.hpp"

namespace warpcheck {

using json = nlohmann::ordered_json;

inline constexpr const char* kScenarioSchema = "warpcheck-scenario/1";

// A model reference from a scenario file, resolved to its Einstein constant
// and chart so the runner can build metrics and sample points.
struct ModelRef {
    std::string kind;  // hyperbolic | flat | sphere | space_form
    int dim = 0;
    double lambda = 0.0;
    ChartKind chart = ChartKind::cartesian;
};

struct Scenario {
    std::string name;
    ModelRef base;
    ModelRef fiber;
    bool warp_is_family = false;
    WarpParams family;       // set when warp_is_family
    std::string expression;  // set otherwise
    std::vector<std::string> checks;
    SamplingParams sampling;
    std::map<std::string, double> tolerances;  // resolved for every requested check
};

inline const std::map<std::string, double>& default_tolerances() {
    // AD-exact identities at 1e-8; the theorem suite composes a least-squares
    // fit over many operators, so it gets the looser composed default.
    static const std::map<std::string, double> defaults = {
        {"einstein", 1e-8},   {"theorem1", 1e-6},   {"pde", 1e-8},
        {"corollary4", 1e-8}, {"corollary5", 1e-8}, {"crosscheck", 1e-8},
    };
    return defaults;
}

namespace detail {

inline std::uint64_t env_default_seed() {
    const char* raw = std::getenv("WARPCHECK_SEED");
    if (raw == nullptr || *raw == '\0') return 42;
    char* end = nullptr;
    const unsigned long long parsed = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0') return 42;
    return static_cast<std::uint64_t>(parsed);
}

inline void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                                const std::string& where) {
    for (const auto& item : obj.items()) {
        if (!allowed.contains(item.key())) {
            throw ValidationError(where.empty() ? item.key() : where + "." + item.key(),
                                  "unknown key");
        }
    }
}

inline const json& require_key(const json& obj, const std::string& key,
                               const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(where, "missing required key");
    return *it;
}

inline std::string require_string(const json& value, const std::string& where) {
    if (!value.is_string()) throw ValidationError(where, "must be a string");
    return value.get<std::string>();
}

inline double require_number(const json& value, const std::string& where) {
    if (!value.is_number()) throw ValidationError(where, "must be a number");
    return value.get<double>();
}

inline int require_int(const json& value, const std::string& where) {
    if (!value.is_number_integer()) throw ValidationError(where, "must be an integer");
    return value.get<int>();
}

inline std::vector<double> require_number_array(const json& value, const std::string& where) {
    if (!value.is_array()) throw ValidationError(where, "must be an array of numbers");
    std::vector<double> out;
    out.reserve(value.size());
    for (const auto& entry : value) {
        if (!entry.is_number()) throw ValidationError(where, "must be an array of numbers");
        out.push_back(entry.get<double>());
    }
    return out;
}

inline ModelRef parse_model(const json& obj, const std::string& where) {
    if (!obj.is_object()) throw ValidationError(where, "must be an object");
    reject_unknown_keys(obj, {"kind", "dim", "lambda"}, where);
    ModelRef model;
    model.kind = require_string(require_key(obj, "kind", where + ".kind"), where + ".kind");
    model.dim = require_int(require_key(obj, "dim", where + ".dim"), where + ".dim");

    if (model.kind == "hyperbolic") {
        if (obj.contains("lambda")) {
            throw ValidationError(where + ".lambda",
                                  "hyperbolic models fix lambda = -(dim - 1); drop the key");
        }
        if (model.dim < 2) throw ValidationError(where + ".dim", "hyperbolic needs dim >= 2");
        model.lambda = -(model.dim - 1);
        model.chart = ChartKind::upper_half_space;
    } else if (model.kind == "flat") {
        if (obj.contains("lambda")) {
            throw ValidationError(where + ".lambda", "flat models fix lambda = 0; drop the key");
        }
        if (model.dim < 1) throw ValidationError(where + ".dim", "flat needs dim >= 1");
        model.lambda = 0.0;
        model.chart = ChartKind::cartesian;
    } else if (model.kind == "sphere") {
        if (model.dim < 2) throw ValidationError(where + ".dim", "sphere needs dim >= 2");
        model.lambda = obj.contains("lambda")
                           ? require_number(obj["lambda"], where + ".lambda")
                           : static_cast<double>(model.dim - 1);
        if (model.lambda <= 0.0) {
            throw ValidationError(where + ".lambda", "sphere needs lambda > 0");
        }
        model.chart = ChartKind::stereographic;
    } else if (model.kind == "space_form") {
        model.lambda = require_number(require_key(obj, "lambda", where + ".lambda"),
                                      where + ".lambda");
        if (model.dim < 1) throw ValidationError(where + ".dim", "space_form needs dim >= 1");
        if (model.dim == 1 && model.lambda != 0.0) {
            throw ValidationError(where + ".lambda",
                                  "a 1-dimensional space form is Ricci-flat; lambda must be 0");
        }
        model.chart = chart_for(model.lambda);
    } else {
        throw ValidationError(where + ".kind",
                              "unknown model kind '" + model.kind +
                                  "' (expected hyperbolic, flat, sphere, or space_form)");
    }
    return model;
}

inline void parse_sampling(const json& obj, SamplingParams& sampling) {
    if (!obj.is_object()) throw ValidationError("sampling", "must be an object");
    reject_unknown_keys(obj, {"count", "seed", "x_n_range", "tangential_bound"}, "sampling");
    if (obj.contains("count")) {
        const int count = require_int(obj["count"], "sampling.count");
        // count = 0 passes validation and trips UsageError at run time.
        if (count < 0 || count > 10000) {
            throw ValidationError("sampling.count", "must be between 0 and 10000");
        }
        sampling.count = count;
    }
    if (obj.contains("seed")) {
        const json& seed = obj["seed"];
        if (!seed.is_number_integer() || seed.get<std::int64_t>() < 0) {
            throw ValidationError("sampling.seed", "must be a nonnegative integer");
        }
        sampling.seed = seed.get<std::uint64_t>();
    }
    if (obj.contains("x_n_range")) {
        const std::vector<double> range = require_number_array(obj["x_n_range"], "sampling.x_n_range");
        if (range.size() != 2) throw ValidationError("sampling.x_n_range", "must be [lo, hi]");
        // Keep the chart boundary and its condition-number blowup out of reach.
        if (range[0] < 0.1 || range[1] <= range[0]) {
            throw ValidationError("sampling.x_n_range", "needs 0.1 <= lo < hi");
        }
        sampling.x_n_lo = range[0];
        sampling.x_n_hi = range[1];
    }
    if (obj.contains("tangential_bound")) {
        const double bound = require_number(obj["tangential_bound"], "sampling.tangential_bound");
        if (bound <= 0.0 || bound > 10.0) {
            throw ValidationError("sampling.tangential_bound", "must be in (0, 10]");
        }
        sampling.tangential_bound = bound;
    }
}

} // namespace detail

inline Scenario parse_scenario_json(const json& doc) {
    if (!doc.is_object()) throw ValidationError("scenario", "top level must be an object");
    detail::reject_unknown_keys(
        doc, {"schema", "name", "base", "fiber", "warp", "checks", "sampling", "tolerances"}, "");

    Scenario scenario;
    const std::string schema =
        detail::require_string(detail::require_key(doc, "schema", "schema"), "schema");
    if (schema != kScenarioSchema) {
        throw ValidationError("schema", "expected \"" + std::string(kScenarioSchema) + "\"");
    }
    scenario.name = detail::require_string(detail::require_key(doc, "name", "name"), "name");
    if (scenario.name.empty()) throw ValidationError("name", "must not be empty");

    scenario.base = detail::parse_model(detail::require_key(doc, "base", "base"), "base");
    scenario.fiber = detail::parse_model(detail::require_key(doc, "fiber", "fiber"), "fiber");
    if (scenario.base.dim + scenario.fiber.dim > 10) {
        throw ValidationError("fiber.dim", "base.dim + fiber.dim must stay <= 10");
    }

    // Warp: exactly one of the closed-form family or a coordinate expression.
    const json& warp = detail::require_key(doc, "warp", "warp");
    if (!warp.is_object()) throw ValidationError("warp", "must be an object");
    detail::reject_unknown_keys(warp, {"family", "expression"}, "warp");
    if (warp.contains("family") == warp.contains("expression")) {
        throw ValidationError("warp", "provide exactly one of 'family' or 'expression'");
    }
    if (warp.contains("family")) {
        const json& family = warp["family"];
        if (!family.is_object()) throw ValidationError("warp.family", "must be an object");
        detail::reject_unknown_keys(family, {"a", "b", "b_vec", "c_vec"}, "warp.family");
        scenario.warp_is_family = true;
        scenario.family.n = scenario.base.dim;
        const auto tangential = static_cast<std::size_t>(scenario.base.dim - 1);
        scenario.family.a =
            family.contains("a") ? detail::require_number(family["a"], "warp.family.a") : 0.0;
        scenario.family.b =
            family.contains("b") ? detail::require_number(family["b"], "warp.family.b") : 0.0;
        scenario.family.b_vec =
            family.contains("b_vec")
                ? detail::require_number_array(family["b_vec"], "warp.family.b_vec")
                : std::vector<double>(tangential, 0.0);
        scenario.family.c_vec =
            family.contains("c_vec")
                ? detail::require_number_array(family["c_vec"], "warp.family.c_vec")
                : std::vector<double>(tangential, 0.0);
        if (scenario.family.b_vec.size() != tangential) {
            throw ValidationError("warp.family.b_vec",
                                  "must have length base.dim - 1 = " + std::to_string(tangential));
        }
        if (scenario.family.c_vec.size() != tangential) {
            throw ValidationError("warp.family.c_vec",
                                  "must have length base.dim - 1 = " + std::to_string(tangential));
        }
    } else {
        scenario.warp_is_family = false;
        scenario.expression =
            detail::require_string(warp["expression"], "warp.expression");
        // Parse now so malformed expressions fail at configuration time.
        Expression::parse(scenario.expression, scenario.base.dim);
    }

    // Checks: nonempty, known, no duplicates, order preserved.
    const json& checks = detail::require_key(doc, "checks", "checks");
    if (!checks.is_array() || checks.empty()) {
        throw ValidationError("checks", "must be a nonempty array of check names");
    }
    for (const auto& entry : checks) {
        const std::string name = detail::require_string(entry, "checks");
        if (!default_tolerances().contains(name)) {
            throw ValidationError("checks", "unknown check '" + name + "'");
        }
        for (const auto& seen : scenario.checks) {
            if (seen == name) throw ValidationError("checks", "duplicate check '" + name + "'");
        }
        scenario.checks.push_back(name);
    }

    scenario.sampling.seed = detail::env_default_seed();
    if (doc.contains("sampling")) detail::parse_sampling(doc["sampling"], scenario.sampling);

    for (const auto& check : scenario.checks) {
        scenario.tolerances[check] = default_tolerances().at(check);
    }
    if (doc.contains("tolerances")) {
        const json& tolerances = doc["tolerances"];
        if (!tolerances.is_object()) throw ValidationError("tolerances", "must be an object");
        for (const auto& item : tolerances.items()) {
            if (!default_tolerances().contains(item.key())) {
                throw ValidationError("tolerances." + item.key(), "unknown check");
            }
            const double tol = detail::require_number(item.value(), "tolerances." + item.key());
            if (tol <= 0.0) {
                throw ValidationError("tolerances." + item.key(), "must be positive");
            }
            if (scenario.tolerances.contains(item.key())) scenario.tolerances[item.key()] = tol;
        }
    }

    // Cross-field rules.
    const auto requested = [&scenario](const char* name) {
        for (const auto& check : scenario.checks) {
            if (check == name) return true;
        }
        return false;
    };
    if ((requested("einstein") || requested("crosscheck") || requested("theorem1")) &&
        scenario.base.dim < 3) {
        throw ValidationError("base.dim", "product checks need base.dim >= 3");
    }
    if ((requested("pde") || requested("corollary4") || requested("corollary5")) &&
        scenario.base.kind != "hyperbolic") {
        throw ValidationError("base.kind",
                              "pde/corollary4/corollary5 checks need a hyperbolic base");
    }
    if ((requested("corollary4") || requested("corollary5")) && !scenario.warp_is_family) {
        throw ValidationError("warp", "corollary4/corollary5 checks need a family warp");
    }
    return scenario;
}

inline Scenario parse_scenario_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        // nlohmann reports a 1-based byte offset of the bad character;
        // recover line and column by walking the text strictly before it
        int line = 1, column = 1;
        const std::size_t stop =
            std::min(text.size(), err.byte > 0 ? static_cast<std::size_t>(err.byte) - 1 : 0);
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        // keep only the detail; the location clause is re-rendered by ParseError
        std::string detail = err.what();
        if (const auto at = detail.find("parse error at "); at != std::string::npos) {
            if (const auto colon = detail.find(": ", at); colon != std::string::npos) {
                detail = detail.substr(colon + 2);
            }
        }
        throw ParseError(detail, line, column);
    }
    return parse_scenario_json(doc);
}

inline Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open scenario file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str());
}

// The scenario with every default materialized, as echoed into reports.
inline json normalized_scenario(const Scenario& scenario) {
    json doc;
    doc["schema"] = kScenarioSchema;
    doc["name"] = scenario.name;
    const auto model_json = [](const ModelRef& model) {
        json out;
        out["kind"] = model.kind;
        out["dim"] = model.dim;
        out["lambda"] = model.lambda;
        return out;
    };
    doc["base"] = model_json(scenario.base);
    doc["fiber"] = model_json(scenario.fiber);
    json warp;
    if (scenario.warp_is_family) {
        json family;
        family["a"] = scenario.family.a;
        family["b"] = scenario.family.b;
        family["b_vec"] = scenario.family.b_vec;
        family["c_vec"] = scenario.family.c_vec;
        warp["family"] = family;
    } else {
        warp["expression"] = scenario.expression;
    }
    doc["warp"] = warp;
    doc["checks"] = scenario.checks;
    json sampling;
    sampling["count"] = scenario.sampling.count;
    sampling["seed"] = scenario.sampling.seed;
    sampling["x_n_range"] = {scenario.sampling.x_n_lo, scenario.sampling.x_n_hi};
    sampling["tangential_bound"] = scenario.sampling.tangential_bound;
    doc["sampling"] = sampling;
    json tolerances;
    for (const auto& [name, tol] : scenario.tolerances) tolerances[name] = tol;
    doc["tolerances"] = tolerances;
    return doc;
}

inline MetricField build_metric(const ModelRef& model) {
    if (model.kind == "hyperbolic") return hyperbolic_metric(model.dim);
    return space_form(SpaceFormSpec{model.dim, model.lambda, model.chart});
}

inline ScalarField build_warp(const Scenario& scenario) {
    if (scenario.warp_is_family) return theorem2_warp(scenario.family);
    return expression_warp(scenario.expression, scenario.base.dim);
}

} // namespace warpcheck
