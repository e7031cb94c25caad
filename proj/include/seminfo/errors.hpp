#pragma once

#include <stdexcept>
#include <string>

namespace seminfo {

// Bad numeric content, dimension mismatches, schema violations.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Truncated or inconsistent coded bitstrings.
class CodecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File system trouble: missing files, unreadable or unwritable paths.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace seminfo
