#pragma once

#include <stdexcept>
#include <string>

namespace rlab {

/// A named resource budget (atoms, matrix entries, ...) would be exceeded.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::string budget, double requested, double limit)
      : std::runtime_error("budget '" + budget + "' exceeded: requested " + std::to_string(requested) +
                           ", limit " + std::to_string(limit)),
        budget_(std::move(budget)) {}

  const std::string& budget() const { return budget_; }

 private:
  std::string budget_;
};

/// Floating-point round-off exceeded what the computation can absorb.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rlab
