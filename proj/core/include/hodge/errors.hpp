#pragma once

#include <stdexcept>
#include <string>

namespace hodge {

/// Root of every exception thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of a numerical routine was not met (shape, symmetry, finiteness).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  SingularSystem(const std::string& what, double sigma_ratio)
      : Error(what), sigma_ratio_(sigma_ratio) {}
  /// smallest / largest singular value of the rejected matrix
  double sigma_ratio() const noexcept { return sigma_ratio_; }

 private:
  double sigma_ratio_;
};

class ContextMismatch : public Error {
 public:
  using Error::Error;
};

class BidegreeError : public Error {
 public:
  using Error::Error;
};

class NotStrictlyPositive : public Error {
 public:
  using Error::Error;
};

/// Requested bidegree lies in the band n-r < p+q < n+r where the metric is undefined.
class DegreeOutOfRange : public Error {
 public:
  using Error::Error;
};

class UnverifiedPair : public Error {
 public:
  using Error::Error;
};

/// An operation refused its input because a structural precondition cannot be certified.
class RefusedPrecondition : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace hodge
