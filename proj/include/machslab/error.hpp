#pragma once

#include <stdexcept>
#include <string>

namespace machslab {

/// Precondition or argument violation.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure during a solve: NaN, CFL violation, non-convergence.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File or format problem.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw InvalidArgument(msg);
}

}  // namespace machslab
