#pragma once

#include <stdexcept>
#include <string>

namespace hc2 {

// Raised when a computation would exceed a configured resource budget
// (state caps, enumeration budgets, memory caps).
struct resource_cap_error : std::runtime_error {
  explicit resource_cap_error(const std::string& what)
      : std::runtime_error(what) {}
};

// Raised for malformed input files or configuration data.
struct format_error : std::runtime_error {
  explicit format_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hc2
