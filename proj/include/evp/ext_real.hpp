#pragma once

#include <cmath>
#include <limits>

#include "evp/errors.hpp"

namespace evp {

/// Extended real value: an ordinary finite double or +infinity.
/// NaN is rejected at construction; -infinity is not representable
/// (functionals are bounded below). Ordering is inherited from the
/// underlying double, so every finite value compares below infinity().
class ExtReal {
 public:
  ExtReal() : v_(0.0) {}

  ExtReal(double v) : v_(v) {  // NOLINT: implicit by design
    if (std::isnan(v)) {
      throw EvaluationError("ExtReal: NaN is not a valid extended real");
    }
    if (v == -std::numeric_limits<double>::infinity()) {
      throw EvaluationError("ExtReal: -inf is not a valid extended real");
    }
  }

  static ExtReal infinity() {
    ExtReal r;
    r.v_ = std::numeric_limits<double>::infinity();
    return r;
  }

  bool is_finite() const { return std::isfinite(v_); }
  bool is_infinite() const { return !std::isfinite(v_); }

  /// Underlying double; +inf when infinite.
  double raw() const { return v_; }

  /// Finite value; throws if infinite.
  double finite_value() const {
    if (!is_finite()) {
      throw EvaluationError("ExtReal: finite value requested from +inf");
    }
    return v_;
  }

  friend bool operator==(const ExtReal& a, const ExtReal& b) { return a.v_ == b.v_; }
  friend bool operator<(const ExtReal& a, const ExtReal& b) { return a.v_ < b.v_; }
  friend bool operator<=(const ExtReal& a, const ExtReal& b) { return a.v_ <= b.v_; }
  friend bool operator>(const ExtReal& a, const ExtReal& b) { return a.v_ > b.v_; }
  friend bool operator>=(const ExtReal& a, const ExtReal& b) { return a.v_ >= b.v_; }

 private:
  double v_;
};

}  // namespace evp
