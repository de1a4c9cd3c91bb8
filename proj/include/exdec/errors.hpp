#pragma once

#include <stdexcept>
#include <string>

namespace exdec {

/// Argument outside the documented domain (bad distance, length mismatch...).
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A documented precondition on the input state does not hold.
struct PreconditionViolation : std::logic_error {
    using std::logic_error::logic_error;
};

/// No perfect matching exists for the requested graph.
struct Infeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adjacent distributions in a splitting schedule do not overlap.
struct OverlapFailure : std::runtime_error {
    OverlapFailure(const std::string& what, int step_index)
        : std::runtime_error(what), step(step_index) {}
    int step;
};

/// Work requested exceeds what can be enumerated; carries the size estimate.
struct BudgetExceeded : std::runtime_error {
    BudgetExceeded(const std::string& what, double estimated_work)
        : std::runtime_error(what), estimate(estimated_work) {}
    double estimate;
};

}  // namespace exdec
