#pragma once

#include <stdexcept>
#include <string>

namespace sci {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor or operator shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A numeric parameter lies outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A request would materialize an object above a configured size cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Unknown tags, invalid combinations, malformed configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failures (missing file, unwritable directory).
class IoError : public Error {
 public:
  using Error::Error;
};

/// A tensor file was readable but its content is malformed.
class FormatError : public IoError {
 public:
  enum class Kind { BadMagic, BadVersion, BadDtype, BadRank, BadDims, Truncated, TrailingData, NonFinite };

  FormatError(Kind kind, const std::string& what) : IoError(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Random generation could not satisfy its constraints.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// A NaN or infinity appeared in an iterate.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace sci
