#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sert {

using TokenId = std::uint32_t;
using CandidateId = std::uint32_t;

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem / stream failures (missing file, short write, ...).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data (bad JSON line, bad magic bytes, checksum, ...).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Structurally valid file whose declared dimensions are inconsistent.
class ShapeError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Numerical failure (non-finite values, zero variance, ...).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Violated call contract (bad parameter value, unknown id, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Query with no usable terms left after tokenization / OOV dropping.
class EmptyQueryError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

}  // namespace sert
