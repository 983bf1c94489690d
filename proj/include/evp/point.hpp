#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "evp/errors.hpp"

namespace evp {

/// A point of a metric space: either an index into a finite point set or a
/// coordinate vector in a normed space. Tagged by space kind.
class Point {
 public:
  static Point finite(int index) {
    if (index < 0) {
      throw DomainError("Point: finite index must be nonnegative");
    }
    Point p;
    p.is_index_ = true;
    p.index_ = index;
    return p;
  }

  static Point normed(std::vector<double> coords) {
    for (double c : coords) {
      if (!std::isfinite(c)) {
        throw DomainError("Point: coordinates must be finite");
      }
    }
    Point p;
    p.is_index_ = false;
    p.coords_ = std::move(coords);
    return p;
  }

  bool is_index() const { return is_index_; }
  int index() const {
    if (!is_index_) throw DomainError("Point: not a finite-space point");
    return index_;
  }
  const std::vector<double>& coords() const {
    if (is_index_) throw DomainError("Point: not a normed-space point");
    return coords_;
  }
  std::size_t dim() const { return coords_.size(); }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.is_index_ != b.is_index_) return false;
    if (a.is_index_) return a.index_ == b.index_;
    return a.coords_ == b.coords_;
  }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }

 private:
  Point() = default;
  bool is_index_ = true;
  int index_ = 0;
  std::vector<double> coords_;
};

}  // namespace evp
