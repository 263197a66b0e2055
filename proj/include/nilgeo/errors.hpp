#pragma once

#include <stdexcept>
#include <string>

namespace nilgeo {

/** Malformed or inconsistent user input (bad flags, bad files, domain violations). */
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/** A configured resource budget (memory, search cap) was exceeded. */
struct BudgetError : std::runtime_error {
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/** An iterative numeric routine failed to reach its target tolerance. */
struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nilgeo
