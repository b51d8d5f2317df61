#pragma once

#include <stdexcept>
#include <string>

namespace fecp {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands disagree on register size, photon presence or basis family.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A photon operation was requested in the wrong polarization basis.
class BasisError : public Error {
 public:
  using Error::Error;
};

// A state could not be built (empty input, zero norm, non-finite values).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

class NonUnitaryError : public Error {
 public:
  using Error::Error;
};

// Cavity parameters for which the reflection denominator vanishes.
class SingularParameterError : public Error {
 public:
  using Error::Error;
};

// alpha * beta == 0: there is no entanglement left to concentrate.
class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace fecp
