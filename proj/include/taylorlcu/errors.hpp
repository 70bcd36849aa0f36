#ifndef TAYLORLCU_ERRORS_HPP
#define TAYLORLCU_ERRORS_HPP

#include <stdexcept>

namespace taylorlcu {

/// Malformed or out-of-contract input (bad term file, invalid truncation vector, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A dense construction would exceed the configured qubit cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative procedure hit its iteration or cost cap before converging.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace taylorlcu

#endif  // TAYLORLCU_ERRORS_HPP
