#pragma once

#include <stdexcept>
#include <string>

namespace riemopt {

// Caller passed arguments that violate a documented precondition
// (dimension mismatch, infeasible point, invalid parameter range).
class UsageError : public std::invalid_argument {
public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

// Input is structurally valid but numerically unusable
// (rank-deficient factorization, non-positive-definite system).
class DegenerateInputError : public std::runtime_error {
public:
    explicit DegenerateInputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace riemopt
