#pragma once

#include <stdexcept>
#include <string>

namespace timesym {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Operand supported outside the basis an operator acts on.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// Argument outside the domain of an operation (non-unit vector,
/// unnormalized ket, out-of-range quantile, ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Invalid network description.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Postselected state is orthogonal to the evolved preselected state.
class InconsistentSelection : public Error {
  public:
    using Error::Error;
};

/// Every ABL numerator vanishes.
class UndefinedConditional : public Error {
  public:
    using Error::Error;
};

/// Projector family does not resolve the identity on the live space.
class CompletenessError : public Error {
  public:
    using Error::Error;
};

/// Trajectory rule table has no entry for the amplitude pattern met at an
/// element.
class UnsupportedMerge : public Error {
  public:
    using Error::Error;
};

} // namespace timesym
