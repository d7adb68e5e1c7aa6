#pragma once

#include <stdexcept>
#include <string>

namespace thinfilm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a formula (negative height, L <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A structural modelling assumption does not hold (G1, S1, S2).
class AssumptionViolation : public Error {
 public:
  using Error::Error;
};

class GridTooSmall : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// The 2x2 capillary block is not invertible.
class DegenerateSymbol : public Error {
 public:
  using Error::Error;
};

/// No usable window of strictly positive samples for a decay fit.
class FitWindowError : public Error {
 public:
  using Error::Error;
};

}  // namespace thinfilm
