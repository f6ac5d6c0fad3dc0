#pragma once

#include <stdexcept>
#include <string>

namespace sumfree {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied argument violates a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class IterationLimitExceeded : public Error {
 public:
  using Error::Error;
};

// No nonnegative orbit counts reach the requested total; increase n.
class InfeasibleRounding : public Error {
 public:
  using Error::Error;
};

// The instance exceeds an enumeration cap.
class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

class WindowOverflow : public Error {
 public:
  using Error::Error;
};

// Halving is undefined modulo an even number.
class EvenModulus : public Error {
 public:
  using Error::Error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

}  // namespace sumfree
