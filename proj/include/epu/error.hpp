#pragma once

#include <stdexcept>
#include <string>

namespace epu {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that cannot be opened or read at all.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or arguments detected before any work starts.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A numerical precondition failed (zero variance, zero norm, rank).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace epu
