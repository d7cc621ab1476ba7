#ifndef CORAL_ERRORS_HPP_
#define CORAL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace coral {

// Base class for all typed errors thrown by this project. Catch this to
// handle anything coral-specific; catch the concrete type to branch on it.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace coral

#endif  // CORAL_ERRORS_HPP_
