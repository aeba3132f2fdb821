#pragma once

#include <stdexcept>
#include <string>

namespace hwp {

/// Malformed parameters or inputs that violate an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters lie in a case the constructions do not cover.
class Unsupported : public std::runtime_error {
 public:
  Unsupported(std::string which_case, const std::string& what)
      : std::runtime_error(what), case_(std::move(which_case)) {}
  const std::string& which_case() const noexcept { return case_; }

 private:
  std::string case_;
};

/// A search exhausted its budget.
class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constructed object failed its own postcondition check. Always a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hwp
