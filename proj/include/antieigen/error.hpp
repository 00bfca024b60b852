#pragma once

#include <stdexcept>
#include <string>

namespace antieigen {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (dimension mismatch, zero operator, n > 128, ...).
class InvalidInput : public Error {
  public:
    using Error::Error;
};

/// Tf is numerically zero, so the ratio functionals are undefined at f.
class DegenerateVector : public Error {
  public:
    using Error::Error;
};

/// Input that must be Hermitian (or Hermitian positive definite) is not.
class NotHermitian : public Error {
  public:
    using Error::Error;
};

/// Every optimizer start landed in the numerical kernel of T.
class NoAdmissibleVector : public Error {
  public:
    using Error::Error;
};

} // namespace antieigen
