#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace slopelab {

// Certified precision cannot support the requested computation.
// estimated_N is the smallest working precision expected to succeed
// (0 when no estimate is available).
class PrecisionExhausted : public std::runtime_error {
public:
    explicit PrecisionExhausted(const std::string& what, long estimate = 0)
        : std::runtime_error(what), estimated_N(estimate) {}
    long estimated_N;
};

// A mathematical precondition failed; retrying at higher precision will
// not help. `kind` is a stable machine-readable tag.
class PreconditionError : public std::runtime_error {
public:
    PreconditionError(std::string kind_, const std::string& what)
        : std::runtime_error(what), kind(std::move(kind_)) {}
    std::string kind;
};

// Malformed input at an external interface (JSON schema, CLI flags).
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline PreconditionError context_mismatch(const std::string& op) {
    return {"ContextMismatch", op + ": operands live in different precision contexts"};
}

} // namespace slopelab
