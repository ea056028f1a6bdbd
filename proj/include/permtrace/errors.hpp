#pragma once

#include <stdexcept>
#include <string>

namespace permtrace {

/// Invalid input or violated precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A configured resource bound (expansion size, word length, ball radius,
/// enumeration size) would be exceeded.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative numerical method did not meet its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A structural property that must hold by construction failed.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace permtrace
