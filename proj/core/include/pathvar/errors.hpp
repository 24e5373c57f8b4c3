#pragma once

#include <stdexcept>
#include <string>

namespace pathvar {

/// Invalid input or configuration: bad parameters, malformed files,
/// inconsistent dimensions. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation that cannot be carried out on the given data, e.g. a dyadic
/// level that the sample grid does not resolve. The CLI maps this to exit code 1.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dyadic Lebesgue level finer than the largest sample increment allows.
class ResolutionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace pathvar
