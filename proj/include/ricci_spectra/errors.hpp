#pragma once

#include <stdexcept>
#include <string>

namespace ricci {

/// Inverse iteration did not meet its tolerances within the iteration cap,
/// or produced an eigenvector that changes sign.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The conformal factor dropped below the extinction floor.
class Extinction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The stable time step collapsed below the underflow limit.
class StepUnderflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonPositiveEigenfunction : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A formula that only exists for one coupling value was asked for another.
class WrongCoupling : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ricci
