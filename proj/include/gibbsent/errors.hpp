#pragma once

#include <stdexcept>
#include <string>

namespace gibbsent {

// Enumeration or table size over the configured budget.
class SizeError : public std::runtime_error {
 public:
  explicit SizeError(const std::string& what) : std::runtime_error(what) {}
};

// Weights underflowed or became non-finite.
class ArithmeticError : public std::runtime_error {
 public:
  explicit ArithmeticError(const std::string& what) : std::runtime_error(what) {}
};

// Input violates a documented precondition or invariant.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

constexpr unsigned long long kDefaultBudget = 1ULL << 24;

}  // namespace gibbsent
