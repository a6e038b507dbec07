#pragma once

#include <stdexcept>
#include <string>

namespace acaug {

// Thrown for contract violations on inputs (empty audio, malformed files,
// shape mismatches). Messages are stable so batch reports stay reproducible.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace acaug
