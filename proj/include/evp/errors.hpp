#pragma once

#include <stdexcept>
#include <string>

namespace evp {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched dimensions, out-of-range indices, invalid metric data.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

/// Operation not defined for the given space kind (e.g. dual norm on a
/// finite space) or missing analytic derivatives.
class UnsupportedOperation : public Error {
 public:
  explicit UnsupportedOperation(const std::string& what) : Error(what) {}
};

/// A functional produced NaN or violated its stated lower bound.
class EvaluationError : public Error {
 public:
  explicit EvaluationError(const std::string& what) : Error(what) {}
};

/// A finite-difference probe hit a point with infinite value.
class DerivativeUndefined : public Error {
 public:
  explicit DerivativeUndefined(const std::string& what) : Error(what) {}
};

/// The approximate-minimizer hypothesis fails at the start point.
class RejectedStart : public Error {
 public:
  explicit RejectedStart(const std::string& what) : Error(what) {}
};

/// Every value of a table functional is +inf.
class NoFiniteValue : public Error {
 public:
  explicit NoFiniteValue(const std::string& what) : Error(what) {}
};

/// Malformed or inconsistent problem file.
class SpecError : public Error {
 public:
  explicit SpecError(const std::string& what) : Error(what) {}
};

}  // namespace evp
