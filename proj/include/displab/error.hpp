#pragma once

#include <stdexcept>
#include <string>

namespace displab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Input is singular, has a zero row, or is otherwise outside the region
// where the requested quantity is defined.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

// Raised by rejection sampling when the attempt cap is exhausted; callers are
// expected to fall back to hit-and-run.
class RejectionCapExceeded : public Error {
 public:
  using Error::Error;
};

class CatalogError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace displab
