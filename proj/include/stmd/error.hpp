#pragma once

#include <stdexcept>
#include <string>

namespace stmd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A kernel or model parameter is outside its valid domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Frame or kernel dimensions are incompatible.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A direction was requested from an isotropic (zero) vector.
class UndefinedDirectionError : public Error {
 public:
  using Error::Error;
};

/// Configuration text could not be parsed or names an unknown key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File reading or writing failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace stmd
