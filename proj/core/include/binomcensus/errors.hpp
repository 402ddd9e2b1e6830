#pragma once

#include <stdexcept>
#include <string>

namespace binomcensus {

// Bad argument from the caller (non-prime-power q, t < 2 for the criterion, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A theorem's standing hypothesis is not met (T <= rad(q-1), s < 2, ...).
class PreconditionFailed : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Estimators are undefined when q-1 has no active primes (q = 2, 3).
class DegenerateCase : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Oracle or field-size ceiling exceeded.
class CeilingExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

class ArithmeticOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

}  // namespace binomcensus
