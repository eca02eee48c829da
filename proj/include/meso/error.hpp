#pragma once

#include <stdexcept>
#include <string>

namespace meso {

/// Base type for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Structural problems in an input file (bad row length, unparsable cell).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Semantic problems with a dataset (missing class column, single class, ...).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Training produced non-finite parameters.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace meso
