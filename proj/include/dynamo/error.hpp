#pragma once

#include <stdexcept>
#include <string>

namespace dynamo {

/// Invalid input: bad parameters, malformed config, violated preconditions.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical routine failed to produce a usable answer.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dynamo
