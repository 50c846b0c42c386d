#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace llsk {

// Thrown when inputs are well-formed but outside the supported domain
// (unsupported configuration, failed precondition). CLI exit code 1.
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown on malformed input: bad JSON, schema violation, invariant
// violation. CLI exit code 2.
struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg), code("input") {}
    input_error(std::string code_, const std::string& location, const std::string& msg)
        : std::runtime_error(location.empty() ? msg : location + ": " + msg),
          code(std::move(code_)), where(location) {}
    std::string code;   // "json" | "schema" | "invariant" | "input"
    std::string where;  // JSON-pointer-like location, when known
};

// Result of a validation-style operation: the verdict is the output,
// not an exception.
struct ValidationReport {
    bool ok = true;
    std::string message;

    explicit operator bool() const { return ok; }
    static ValidationReport pass() { return {}; }
    static ValidationReport fail(std::string msg) { return {false, std::move(msg)}; }
};

} // namespace llsk
