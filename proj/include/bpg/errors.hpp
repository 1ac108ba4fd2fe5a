#pragma once

#include <stdexcept>
#include <string>

namespace bpg {

struct NoBracket : std::runtime_error {
  explicit NoBracket(const std::string& what) : std::runtime_error(what) {}
};

struct NoConvergence : std::runtime_error {
  explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct NonFinite : std::runtime_error {
  explicit NonFinite(const std::string& what) : std::runtime_error(what) {}
};

struct UnsupportedKernel : std::runtime_error {
  explicit UnsupportedKernel(const std::string& what) : std::runtime_error(what) {}
};

struct DomainViolation : std::runtime_error {
  explicit DomainViolation(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientBudget : std::runtime_error {
  explicit InsufficientBudget(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetExhausted : std::runtime_error {
  explicit BudgetExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct Degenerate : std::runtime_error {
  explicit Degenerate(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct Unsupported : std::runtime_error {
  explicit Unsupported(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bpg
