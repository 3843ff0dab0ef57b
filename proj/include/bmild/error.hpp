#pragma once

#include <stdexcept>
#include <string>

namespace bmild {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters: grid sizes, exponents, config keys.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Field used in the wrong representation or on a different grid.
class FieldMismatch : public Error {
 public:
  using Error::Error;
};

/// Snapshot or report file that cannot be decoded.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Kernel evaluation requested at a time the grid cannot resolve or contain.
class KernelUnresolved : public Error {
 public:
  using Error::Error;
};

}  // namespace bmild
