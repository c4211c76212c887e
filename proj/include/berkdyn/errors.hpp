#pragma once

#include <stdexcept>
#include <string>

namespace berkdyn {

/**
 * Error taxonomy.
 *
 * Input/usage problems derive from input_error (CLI exit code 1),
 * mathematical hypothesis failures from hypothesis_error (exit code 2),
 * and exhausted iteration/precision budgets from budget_error (exit code 3).
 */

struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct hypothesis_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// series ---------------------------------------------------------------

struct IndeterminateOrder : input_error {
    IndeterminateOrder()
        : input_error("order indeterminate: all known terms vanish and the "
                      "truncation is finite") {}
};

struct RootsOfUnityUnavailable : hypothesis_error {
    explicit RootsOfUnityUnavailable(unsigned long m)
        : hypothesis_error("exact mode supports roots of unity of order 1, 2, 4 "
                           "only; order " + std::to_string(m) + " requested") {}
};

struct SplittingFieldRequired : hypothesis_error {
    explicit SplittingFieldRequired(const std::string& what)
        : hypothesis_error("characteristic equation does not split over the "
                           "coefficient field: " + what) {}
};

struct InsufficientPrecision : budget_error {
    explicit InsufficientPrecision(const std::string& what)
        : budget_error("insufficient series precision: " + what) {}
};

// berk / skew ----------------------------------------------------------

struct NotType2 : input_error {
    NotType2() : input_error("operation requires a type-2 point") {}
};

// cover / markov -------------------------------------------------------

struct InvalidRoot : input_error {
    explicit InvalidRoot(const std::string& what)
        : input_error("invalid root ball: " + what) {}
};

struct NoCover : hypothesis_error {
    explicit NoCover(const std::string& what)
        : hypothesis_error("no ball cover available: " + what) {}
};

struct CriticalInK : hypothesis_error {
    explicit CriticalInK(const std::string& what)
        : hypothesis_error("critical branch certified inside the invariant set: "
                           + what) {}
};

struct BudgetExceeded : budget_error {
    explicit BudgetExceeded(const std::string& what)
        : budget_error("budget exceeded: " + what) {}
};

struct HypothesisFailed : hypothesis_error {
    explicit HypothesisFailed(const std::string& what)
        : hypothesis_error("hypothesis failed: " + what) {}
};

struct DegenerateEigenspace : hypothesis_error {
    explicit DegenerateEigenspace(const std::string& what)
        : hypothesis_error("degenerate eigenspace: " + what) {}
};

struct UnknownVertex : input_error {
    explicit UnknownVertex(const std::string& what)
        : input_error("unknown vertex: " + what) {}
};

struct NoPreimageInBall : hypothesis_error {
    explicit NoPreimageInBall(const std::string& what)
        : hypothesis_error("no rigid preimage in the prescribed ball: " + what) {}
};

struct ParseError : input_error {
    ParseError(const std::string& what, std::size_t pos)
        : input_error("parse error at position " + std::to_string(pos) + ": "
                      + what),
          position(pos) {}
    std::size_t position;
};

} // namespace berkdyn
