#pragma once

#include <charconv>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "warpcheck/errors.hpp"
#include "warpcheck/scenario.hpp"

namespace warpcheck {

inline constexpr const char* kReportSchema = "warpcheck-report/1";

struct CheckResult {
    std::string name;
    std::optional<double> residual;  // absent when the check errored before measuring
    double tolerance = 0.0;
    bool pass = false;
    std::string error;  // empty when the check ran cleanly

    friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct RunReport {
    std::string schema = kReportSchema;
    json scenario;  // normalized scenario echo
    std::vector<std::pair<std::string, double>> derived_constants;  // emission order
    std::vector<CheckResult> checks;
    std::map<std::string, double> timings;  // seconds; excluded from determinism comparisons

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

// Shortest representation that parses back to the same double, so text output
// renders -4.0 as "-4" and stays stable across runs.
inline std::string format_double(double value) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

inline json to_json(const RunReport& report) {
    json doc;
    doc["schema"] = report.schema;
    doc["scenario"] = report.scenario;
    json constants;
    for (const auto& [name, value] : report.derived_constants) constants[name] = value;
    doc["derived_constants"] = constants;
    json checks = json::array();
    for (const auto& check : report.checks) {
        json entry;
        entry["name"] = check.name;
        if (check.residual.has_value()) {
            entry["residual"] = *check.residual;
        } else {
            entry["residual"] = nullptr;
        }
        entry["tolerance"] = check.tolerance;
        entry["pass"] = check.pass;
        if (!check.error.empty()) entry["error"] = check.error;
        checks.push_back(std::move(entry));
    }
    doc["checks"] = checks;
    json timings;
    for (const auto& [name, seconds] : report.timings) timings[name] = seconds;
    doc["timings"] = timings;
    return doc;
}

inline RunReport report_from_json(const json& doc) {
    try {
        RunReport report;
        report.schema = doc.at("schema").get<std::string>();
        report.scenario = doc.at("scenario");
        for (const auto& item : doc.at("derived_constants").items()) {
            report.derived_constants.emplace_back(item.key(), item.value().get<double>());
        }
        for (const auto& entry : doc.at("checks")) {
            CheckResult check;
            check.name = entry.at("name").get<std::string>();
            if (!entry.at("residual").is_null()) {
                check.residual = entry.at("residual").get<double>();
            }
            check.tolerance = entry.at("tolerance").get<double>();
            check.pass = entry.at("pass").get<bool>();
            if (entry.contains("error")) check.error = entry.at("error").get<std::string>();
            report.checks.push_back(std::move(check));
        }
        for (const auto& item : doc.at("timings").items()) {
            report.timings[item.key()] = item.value().get<double>();
        }
        return report;
    } catch (const nlohmann::json::exception& err) {
        throw ValidationError("report", err.what());
    }
}

inline std::string emit_json(const RunReport& report) { return to_json(report).dump(2) + "\n"; }

namespace detail {

inline std::string pad_right(std::string text, std::size_t width) {
    // always leave at least one space so oversized cells cannot fuse columns
    text.append(text.size() < width ? width - text.size() : 1, ' ');
    return text;
}

} // namespace detail

// Fixed-width summary: one row per check plus the derived-constants block.
inline std::string render_text(const RunReport& report) {
    std::string out;
    out += "scenario: " + report.scenario.value("name", std::string("?")) + "\n";
    out += "derived constants:\n";
    for (const auto& [name, value] : report.derived_constants) {
        out += "  " + name + " = " + format_double(value) + "\n";
    }
    out += "\n";
    out += detail::pad_right("check", 12) + detail::pad_right("residual", 24) +
           detail::pad_right("tolerance", 12) + "result\n";
    for (const auto& check : report.checks) {
        out += detail::pad_right(check.name, 12);
        out += detail::pad_right(check.residual ? format_double(*check.residual) : "-", 24);
        out += detail::pad_right(format_double(check.tolerance), 12);
        out += check.pass ? "PASS" : "FAIL";
        if (!check.error.empty()) out += "  [" + check.error + "]";
        out += "\n";
    }
    return out;
}

inline std::string emit_report(const RunReport& report, const std::string& format) {
    if (format == "json") return emit_json(report);
    if (format == "text") return render_text(report);
    throw UsageError("unknown report format: " + format);
}

} // namespace warpcheck
