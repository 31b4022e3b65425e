#pragma once

#include <stdexcept>
#include <string>

namespace actspace {

// Raised when a caller violates a documented precondition (bad parameter,
// invalid configuration). The CLI maps this to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when input data is malformed or insufficient. The CLI maps this to
// exit code 1.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace actspace
