#pragma once

#include <stdexcept>
#include <string>

namespace scatterkit {

// Arguments violate an operation's preconditions (shape mismatch, empty input, ...).
class InvalidInputError : public std::invalid_argument {
public:
  explicit InvalidInputError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Malformed on-disk data: bad magic numbers, inconsistent counts.
class FormatError : public std::runtime_error {
public:
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Underlying I/O failure: missing file, short read, failed write.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical procedure failed to meet its accuracy contract.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace scatterkit
