#pragma once

#include <stdexcept>
#include <string>

namespace betti {

/// Base of every error raised by the library. Callers that only need to
/// distinguish "bad input" from "ran out of budget" can catch the subclasses.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The operation is not implemented for this manifold / configuration.
class Unsupported : public Error {
public:
    using Error::Error;
};

/// A parameter lies outside the closed-form validity domain of a formula.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The requested evaluation would lose exactness (e.g. binomial overflow).
class PrecisionError : public Error {
public:
    using Error::Error;
};

/// A configured size budget (simplex count, matrix size) was exceeded.
class ResourceLimit : public Error {
public:
    using Error::Error;
};

} // namespace betti
