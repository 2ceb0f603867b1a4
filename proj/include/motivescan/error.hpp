#pragma once

#include <stdexcept>
#include <string>

namespace motivescan {

// All recoverable failures in the library surface as MotiveError so callers
// (CLI, tests) can catch one type. The what() string is the user-facing
// message; no error codes.
class MotiveError : public std::runtime_error {
public:
  explicit MotiveError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace motivescan
