#pragma once

#include <stdexcept>
#include <string>

namespace ctqw {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Caller supplied something outside an operation's domain (bad vertex
/// count, malformed edge list, unsupported family, ...).
class InvalidInput : public Error {
  public:
    using Error::Error;
};

/// A closed form was requested for a scenario that has none.
class UnsupportedScenario : public InvalidInput {
  public:
    using InvalidInput::InvalidInput;
};

/// Numerical routine failed to reach its contract (non-convergence,
/// unreliable cancellation, internal consistency check tripped).
class NumericFailure : public Error {
  public:
    using Error::Error;
};

/// Estimation requested at a point where the statistical model is not
/// regular (vanishing Fisher information or parameter-dependent support).
class NonRegularPoint : public NumericFailure {
  public:
    using NumericFailure::NumericFailure;
};

namespace detail {

inline void require(bool condition, const std::string &message) {
    if (!condition) {
        throw InvalidInput(message);
    }
}

} // namespace detail
} // namespace ctqw
