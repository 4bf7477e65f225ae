#pragma once

#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>

namespace zetaforge {

// Enumeration budgets are hard limits with explicit errors, never silent
// truncation.
class budget_error : public std::runtime_error {
 public:
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

inline long long default_budget() {
  if (const char* env = std::getenv("ZETAFORGE_BUDGET")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 10'000'000;
}

inline long long resolve_budget(std::optional<long long> explicit_budget) {
  return explicit_budget.value_or(default_budget());
}

inline void check_budget(long long needed, std::optional<long long> budget,
                         const std::string& what) {
  long long limit = resolve_budget(budget);
  if (needed > limit)
    throw budget_error(what + ": enumeration budget exceeded (" +
                       std::to_string(needed) + " > " + std::to_string(limit) +
                       ")");
}

inline bool is_prime(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline void require_prime(long long p) {
  if (!is_prime(p))
    throw std::invalid_argument(std::to_string(p) + " is not a prime");
}

}  // namespace zetaforge
