#pragma once

#include <stdexcept>
#include <string>

namespace locfield {

/// Bad argument to a constructor or operation (odd grid size, negative width, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation received a field in the wrong representation, kernel or basis.
class RepresentationMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The position -> momentum inverse does not exist for this kernel
/// (it vanishes on the whole negative-frequency half line).
class NonInvertibleKernel : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical precondition is not met (step count too small, packet touching
/// the mirror at a horizon end, band limit exceeded, ...).
class PreconditionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace locfield
