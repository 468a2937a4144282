#pragma once

#include <stdexcept>
#include <string>

namespace stickydiff {

// Bad structure or contents of user-supplied inputs (files, configs, data
// matrices). CLI maps this to exit code 2.
struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A model constraint was violated at run time (e.g. an affinity/popularity
// combination that does not yield a probability mass function).
struct constraint_error : std::runtime_error {
  explicit constraint_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace stickydiff
