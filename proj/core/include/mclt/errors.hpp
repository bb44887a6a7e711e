#pragma once

#include <stdexcept>
#include <string>

namespace mclt {

// Raised when an enumeration or sampling request would exceed a hard
// resource cap (atom count, matrix elements). Callers that own an exit-code
// contract map this to the budget exit status.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what, long step_index = -1)
      : std::runtime_error(what), step_index_(step_index) {}

  // Step at which the budget was exceeded, or -1 when not step-specific.
  long step_index() const noexcept { return step_index_; }

 private:
  long step_index_;
};

// Invalid run configuration (bad field values, unparseable file).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mclt
