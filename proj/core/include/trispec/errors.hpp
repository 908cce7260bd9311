#pragma once

#include <stdexcept>
#include <string>

namespace trispec {

// Least-squares recovery of the resolvent constant has no usable signal
// (the weighted normal-equation denominator fell below threshold).
struct IllConditionedError : std::runtime_error {
    double condition;
    explicit IllConditionedError(const std::string& what, double cond)
        : std::runtime_error(what), condition(cond) {}
};

// A pivot quantity of the moment-recovery table vanished; `level` is the
// continued-fraction level that could not be recovered.
struct DegeneracyError : std::runtime_error {
    int level;
    DegeneracyError(const std::string& what, int lvl)
        : std::runtime_error(what), level(lvl) {}
};

// Elimination hit a pivot below threshold while inverting a truncation.
struct SingularTruncationError : std::runtime_error {
    int pivot_index;
    SingularTruncationError(const std::string& what, int idx)
        : std::runtime_error(what), pivot_index(idx) {}
};

}  // namespace trispec
