#pragma once

#include <stdexcept>
#include <string>

namespace stacklaw {

/// Base class for all stacklaw failures.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An operation was given an argument outside its mathematical domain.
class DomainError : public Error {
public:
  using Error::Error;
};

/// A queue was asked about an unstable operating point (utilization >= 1).
class SaturationError : public Error {
public:
  using Error::Error;
};

/// A geometric impossibility, e.g. TSVs needing more than the whole layer.
class GeometryError : public Error {
public:
  using Error::Error;
};

/// Invalid configuration: bad schema, violated invariant, unknown key.
/// Messages carry the offending field path(s).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Input text is not syntactically valid.
class ParseError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

/// Document is valid text but does not match the schema.
class SchemaError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

/// Document matches the schema but violates a domain invariant.
class InvariantError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

} // namespace stacklaw
