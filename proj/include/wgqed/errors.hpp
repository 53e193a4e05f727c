#pragma once

#include <stdexcept>
#include <string>

namespace wgqed {

// Inputs outside an operation's valid domain (m > N, T <= 0, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Caller broke a structural precondition (dimension mismatch, label not in basis).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Non-finite values, failed searches, herald-impossible steps.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wgqed
