#ifndef DISTILL_ERRORS_H_
#define DISTILL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace distill {

// Parameter outside the domain where a formula or model is defined.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative computation exceeded its hard round cap.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal numerical failure: singular system or a failed cross-check.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace distill

#endif  // DISTILL_ERRORS_H_
