#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fracwell {

// Raised for invalid arguments to numerical routines (negative t, NaN input).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A structural hypothesis on G or the parameters does not hold numerically.
class HypothesisViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke a precondition (mismatched grids, empty input).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Invalid configuration; carries every violation found, not just the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computed invariant failed at run time (exit code 4 in the CLI).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fracwell
