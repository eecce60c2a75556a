#ifndef GCONV_ERRORS_HPP
#define GCONV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gconv {

// Truncated Fock space too small for the requested state.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& msg, int suggested_cutoff)
      : std::runtime_error(msg), suggested_cutoff(suggested_cutoff) {}
  int suggested_cutoff;
};

// A quadrature failed to converge or produced non-finite values.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Phase-space grid too small: Wigner mass leaks through the boundary.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A Gaussian channel violates the CP constraint.
class ConstraintViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Post-selection bin has vanishing probability.
class DegeneratePostselection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gconv

#endif
