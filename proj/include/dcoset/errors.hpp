#pragma once

#include <stdexcept>
#include <string>

namespace dcoset {

// Base of every error raised by the library. The harness maps these onto
// structured error records; the CLI maps ConfigurationError onto exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An element left the chart domain of its group.
class DomainViolation : public Error {
 public:
  using Error::Error;
};

// Scheme/group mismatch, unknown catalog names, malformed config.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Integrand support escapes the integration box.
class IntegrationDomainError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// section_lift: Q(f) vanishes where the lifted coset function does not.
class CoverageError : public Error {
 public:
  using Error::Error;
};

class CoverIncompleteError : public Error {
 public:
  using Error::Error;
};

class PositivityFailure : public Error {
 public:
  using Error::Error;
};

class DivisionDomainError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

}  // namespace dcoset
