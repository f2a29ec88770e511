#pragma once

#include <stdexcept>
#include <string>

namespace sheetlab {

// Base for every error the library raises.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Invalid user input (parameters out of range, malformed files).
class InvalidArgument : public Error
{
public:
  using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error
{
public:
  using Error::Error;
};

// A computation that cannot produce a finite answer.
class NumericalError : public Error
{
public:
  using Error::Error;
};

/// Raised when t + r or b vanishes, so every phase decouples the two states.
class DegenerateDecoupling : public NumericalError
{
public:
  using NumericalError::NumericalError;
};

class SingularStack : public NumericalError
{
public:
  using NumericalError::NumericalError;
};

class LedgerMismatch : public InvalidArgument
{
public:
  using InvalidArgument::InvalidArgument;
};

class ContinuityViolation : public InvalidArgument
{
public:
  using InvalidArgument::InvalidArgument;
};

class AsymmetricGrid : public InvalidArgument
{
public:
  using InvalidArgument::InvalidArgument;
};

}  // namespace sheetlab
