#pragma once

#include <stdexcept>
#include <string>

namespace clab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: overlapping intervals, size mismatches, bad partitions.
class StructuralError : public Error {
public:
  using Error::Error;
};

/// A value outside the admissible domain (negative integrand, bad parameter).
class DomainError : public Error {
public:
  using Error::Error;
};

class DegenerateSetError : public Error {
public:
  using Error::Error;
};

/// Operation requested on a family or preference kind that cannot support it.
class UnsupportedModeError : public Error {
public:
  using Error::Error;
};

class InvalidPriceError : public Error {
public:
  using Error::Error;
};

class InvalidBudgetError : public Error {
public:
  using Error::Error;
};

class InsufficientSamplesError : public Error {
public:
  using Error::Error;
};

class InvalidPreferenceError : public Error {
public:
  using Error::Error;
};

/// Configuration / schema problems detected while reading JSON inputs.
class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace clab
