// Error types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace sparsedecomp {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// An operation was called with inputs outside its stated contract.
struct PreconditionViolated : Error {
    using Error::Error;
};

// An exhaustive enumeration would exceed the configured budget.
struct BudgetExceeded : Error {
    using Error::Error;
};

// The decomposition produced more distinct supports than allowed.
struct TermBudgetExceeded : Error {
    using Error::Error;
};

// An iterative kernel failed to converge within its sweep limit.
struct NoConvergence : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

// A violated internal invariant; indicates a bug, not bad input.
struct InternalError : Error {
    using Error::Error;
};

}  // namespace sparsedecomp
