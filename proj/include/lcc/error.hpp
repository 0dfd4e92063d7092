#pragma once

#include <stdexcept>
#include <string>

namespace lcc {

/// Invalid configuration value; `field()` names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// The memory allocation problem has no meaningful solution (M <= 0 or M >= S).
class AllocationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A cache multiplicity t(j) is not an integer where the scheduler needs one.
class IntegralityError : public std::domain_error {
 public:
  IntegralityError(int state, const std::string& what)
      : std::domain_error(what), state_(state) {}

  int state() const noexcept { return state_; }

 private:
  int state_;
};

/// Brute-force oracle called outside the instance sizes it supports.
class OracleScopeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// No file size satisfies the requested deadline.
class InfeasibleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace lcc
