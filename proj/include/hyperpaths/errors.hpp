#pragma once

#include <stdexcept>
#include <string>

namespace hyperpaths {

/// Raised when a request exceeds a supported size or memory bound
/// (dimension caps, enumeration budgets, node-count guards).
class GuardError : public std::runtime_error {
 public:
  explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hyperpaths
