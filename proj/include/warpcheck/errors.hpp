#pragma once

#include <stdexcept>
#include <string>

namespace warpcheck {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Jets of different arity were combined, or a chart-axis index is out of range.
struct ArityError : Error {
    using Error::Error;
};

// Evaluation outside the mathematical domain (sqrt of a negative, x_n <= 0, ...).
struct DomainError : Error {
    using Error::Error;
};

// A warping function or metric violated a positivity requirement at a sampled point.
struct DomainViolation : Error {
    using Error::Error;
};

// Zero denominator or a metric that is numerically singular (pivot below threshold).
struct SingularityError : Error {
    using Error::Error;
};

// API misuse: empty point lists, zero sample counts, mismatched buffer sizes.
struct UsageError : Error {
    using Error::Error;
};

// Malformed input text (JSON or warp expression).
struct ParseError : Error {
    int line = 0;
    int column = 0;
    ParseError(const std::string& msg, int line_, int column_)
        : Error(msg), line(line_), column(column_) {}
};

// Structurally valid input that violates the scenario schema.
struct ValidationError : Error {
    std::string field;
    ValidationError(const std::string& field_, const std::string& msg)
        : Error(field_ + ": " + msg), field(field_) {}
};

inline const char* error_kind(const Error& err) {
    if (dynamic_cast<const SingularityError*>(&err)) return "singularity";
    if (dynamic_cast<const DomainViolation*>(&err)) return "domain violation";
    if (dynamic_cast<const DomainError*>(&err)) return "domain error";
    if (dynamic_cast<const ArityError*>(&err)) return "arity error";
    if (dynamic_cast<const ParseError*>(&err)) return "parse error";
    if (dynamic_cast<const ValidationError*>(&err)) return "validation error";
    if (dynamic_cast<const UsageError*>(&err)) return "usage error";
    return "error";
}

// Numeric failures (as opposed to configuration mistakes) drive the
// internal-numeric-error exit code.
inline bool is_numeric_error(const Error& err) {
    return dynamic_cast<const SingularityError*>(&err) != nullptr ||
           dynamic_cast<const DomainViolation*>(&err) != nullptr ||
           dynamic_cast<const DomainError*>(&err) != nullptr ||
           dynamic_cast<const ArityError*>(&err) != nullptr;
}

} // namespace warpcheck
