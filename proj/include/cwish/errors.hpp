#pragma once

#include <stdexcept>
#include <string>

namespace cwish {

/// Base for every error raised by the library. The CLI maps subclasses to
/// exit codes: ResourceError derivatives become 3, everything else 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefiniteError : public Error {
 public:
  NotPositiveDefiniteError(const std::string& what, double eigenvalue)
      : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

class ShapeParityError : public Error {
 public:
  using Error::Error;
};

class AssumptionViolationError : public Error {
 public:
  using Error::Error;
};

class DivisionByZeroError : public Error {
 public:
  using Error::Error;
};

class InvalidNetError : public Error {
 public:
  using Error::Error;
};

/// Work would exceed a documented size cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class EnumerationCapError : public ResourceError {
 public:
  EnumerationCapError(const std::string& what, double would_produce)
      : ResourceError(what), would_produce_(would_produce) {}
  /// Number of vectors the request would have enumerated.
  double would_produce() const noexcept { return would_produce_; }

 private:
  double would_produce_;
};

class NotAchievableError : public ResourceError {
 public:
  NotAchievableError(const std::string& what, double bound_at_cap)
      : ResourceError(what), bound_at_cap_(bound_at_cap) {}
  double bound_at_cap() const noexcept { return bound_at_cap_; }

 private:
  double bound_at_cap_;
};

}  // namespace cwish
