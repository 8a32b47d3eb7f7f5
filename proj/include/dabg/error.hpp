#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dabg {

// Rejected user input: a config field, a flag, a malformed file row, or an
// operation precondition that can be checked before any work starts. The CLI
// maps this to exit code 2; every other exception maps to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace dabg
