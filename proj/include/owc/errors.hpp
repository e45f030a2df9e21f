#pragma once

#include <stdexcept>
#include <string>

namespace owc {

// Scenario / input constraint violations. Messages name the offending field
// and the constraint so CLI users can fix their config.
class validation_error : public std::runtime_error {
  public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an enumeration request exceeds the configured budget.
class budget_error : public std::runtime_error {
  public:
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace owc
