#ifndef CORAL_BUFFERS_ERRORS_HPP_
#define CORAL_BUFFERS_ERRORS_HPP_

#include "coral/errors.hpp"

namespace coral::buffers {

struct NonMonotoneTimestamp final : Error {
  using Error::Error;
};
struct InsufficientHistory final : Error {
  using Error::Error;
};
struct DuplicateSequence final : Error {
  using Error::Error;
};
struct NonPositiveInput final : Error {
  using Error::Error;
};
struct BadSettings final : Error {
  using Error::Error;
};

}  // namespace coral::buffers

#endif  // CORAL_BUFFERS_ERRORS_HPP_
