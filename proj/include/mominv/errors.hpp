#pragma once

#include <stdexcept>
#include <string>

namespace mominv {

// Base for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a rational function is evaluated at a point where its
// denominator vanishes, or when dividing by a zero rational function.
struct DenominatorZero : Error {
    explicit DenominatorZero(const std::string& what) : Error(what) {}
};

// Syntax error with source position (1-based line and column).
struct ParseError : Error {
    int line;
    int col;
    ParseError(int line_, int col_, const std::string& msg)
        : Error("parse error at " + std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
          line(line_), col(col_) {}
};

// Well-formedness violation in an otherwise syntactically valid program.
struct ModelError : Error {
    enum class Kind {
        NonlinearSelf,
        ForwardReference,
        StatefulSelfCoefficient,
        VariableInDistribution,
        ProbabilityOutOfRange,
        DuplicateAssignment,
        DuplicateInit,
        Uninitialized,
    };
    Kind kind;
    ModelError(Kind kind_, const std::string& msg) : Error(msg), kind(kind_) {}
};

// An if-condition that is neither flip(p) nor a 0/1-valued iteration-local
// variable cannot be compiled away.
struct UnsupportedCondition : Error {
    explicit UnsupportedCondition(const std::string& what) : Error(what) {}
};

// Internal invariant failures of the recurrence construction. Either one
// signals a bug, not a property of the input program.
struct BoundExceeded : Error {
    explicit BoundExceeded(const std::string& what) : Error(what) {}
};
struct OrderingViolation : Error {
    explicit OrderingViolation(const std::string& what) : Error(what) {}
};

// Exact enumeration is only defined for programs whose per-step support is
// finite; continuous draws make it infinite.
struct InfiniteSupport : Error {
    explicit InfiniteSupport(const std::string& what) : Error(what) {}
};

// Exact enumeration gave up because the reachable state set grew past the cap.
struct StateExplosion : Error {
    explicit StateExplosion(const std::string& what) : Error(what) {}
};

// A distribution was instantiated or sampled with numerically invalid
// arguments (e.g. Bernoulli probability outside [0,1], negative variance).
struct InvalidSupport : Error {
    explicit InvalidSupport(const std::string& what) : Error(what) {}
};

} // namespace mominv
