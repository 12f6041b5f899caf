#pragma once

#include <stdexcept>
#include <string>

namespace gnsharp {

// Argument outside the domain where a formula is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InvalidDescriptorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition on an input field does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Configuration violates a hypothesis of the underlying theorem (q > p, p <= Q/gamma, a > Q/q, ...).
class HypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivergenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace gnsharp
