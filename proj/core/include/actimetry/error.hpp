#pragma once

#include <stdexcept>
#include <string>

namespace actimetry {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: schema violations, unparsable cells, out-of-range codes.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Input that is structurally fine but holds no usable data.
class EmptyDataError : public Error {
 public:
  using Error::Error;
};

/// Target labels that cannot support classification (e.g. a single class).
class DegenerateLabelsError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

}  // namespace actimetry
