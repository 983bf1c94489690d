#include "evp/space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "evp/errors.hpp"
#include "evp/rng.hpp"

namespace evp {

namespace {

constexpr int kMaxFinitePoints = 500;

// Exhaustive O(n^3) triangle check. A small additive slack absorbs rounding
// in matrices produced by shortest-path completion; anything beyond it means
// the input is not a metric and every downstream result would be meaningless.
void validate_triangle(const std::vector<std::vector<double>>& d) {
  const int n = static_cast<int>(d.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double lhs = d[i][k];
        const double rhs = d[i][j] + d[j][k];
        if (lhs > rhs + 1e-12 * (1.0 + rhs)) {
          std::ostringstream os;
          os << "finite space: triangle inequality violated at (" << i << "," << j << "," << k
             << "): " << lhs << " > " << rhs;
          throw DomainError(os.str());
        }
      }
    }
  }
}

}  // namespace

MetricSpace MetricSpace::finite(std::vector<std::string> labels,
                                std::vector<std::vector<double>> dist,
                                double metric_scale) {
  const int n = static_cast<int>(dist.size());
  if (n == 0) throw DomainError("finite space: needs at least one point");
  if (n > kMaxFinitePoints) {
    throw DomainError("finite space: at most 500 points are supported");
  }
  if (labels.empty()) {
    labels.reserve(n);
    for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  }
  if (static_cast<int>(labels.size()) != n) {
    throw DomainError("finite space: labels and distance matrix sizes differ");
  }
  if (!(metric_scale > 0.0) || !std::isfinite(metric_scale)) {
    throw DomainError("finite space: metric_scale must be positive");
  }
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(dist[i].size()) != n) {
      throw DomainError("finite space: distance matrix must be square");
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = dist[i][j];
      if (!std::isfinite(v) || v < 0.0) {
        throw DomainError("finite space: distances must be finite and nonnegative");
      }
      if (dist[j][i] != v) {
        throw DomainError("finite space: distance matrix must be symmetric");
      }
    }
    if (dist[i][i] != 0.0) {
      throw DomainError("finite space: diagonal distances must be zero");
    }
    for (int j = 0; j < n; ++j) {
      if (i != j && dist[i][j] == 0.0) {
        throw DomainError("finite space: distinct points must have positive distance");
      }
    }
  }
  validate_triangle(dist);

  MetricSpace s;
  s.kind_ = SpaceKind::Finite;
  s.labels_ = std::move(labels);
  s.dist_ = std::move(dist);
  s.metric_scale_ = metric_scale;
  return s;
}

MetricSpace MetricSpace::normed(int dim, NormKind norm, double metric_scale) {
  if (dim < 1) throw DomainError("normed space: dim must be >= 1");
  if (!(metric_scale > 0.0) || !std::isfinite(metric_scale)) {
    throw DomainError("normed space: metric_scale must be positive");
  }
  MetricSpace s;
  s.kind_ = SpaceKind::Normed;
  s.dim_ = dim;
  s.norm_ = norm;
  s.metric_scale_ = metric_scale;
  return s;
}

int MetricSpace::point_count() const {
  if (kind_ != SpaceKind::Finite) {
    throw UnsupportedOperation("point_count: not a finite space");
  }
  return static_cast<int>(dist_.size());
}

int MetricSpace::dim() const {
  if (kind_ != SpaceKind::Normed) {
    throw UnsupportedOperation("dim: not a normed space");
  }
  return dim_;
}

NormKind MetricSpace::norm_kind() const {
  if (kind_ != SpaceKind::Normed) {
    throw UnsupportedOperation("norm_kind: not a normed space");
  }
  return norm_;
}

MetricSpace MetricSpace::with_metric_scale(double scale) const {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw DomainError("with_metric_scale: scale must be positive");
  }
  MetricSpace s = *this;
  s.metric_scale_ = scale;
  return s;
}

bool MetricSpace::contains(const Point& p) const {
  if (kind_ == SpaceKind::Finite) {
    return p.is_index() && p.index() < static_cast<int>(dist_.size());
  }
  return !p.is_index() && static_cast<int>(p.dim()) == dim_;
}

void MetricSpace::require_member(const Point& p) const {
  if (!contains(p)) {
    throw DomainError("point does not belong to this space (kind, index or dimension mismatch)");
  }
}

double MetricSpace::base_distance(const Point& a, const Point& b) const {
  require_member(a);
  require_member(b);
  if (kind_ == SpaceKind::Finite) {
    return dist_[a.index()][b.index()];
  }
  const auto& x = a.coords();
  const auto& y = b.coords();
  switch (norm_) {
    case NormKind::L1: {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) s += std::abs(x[i] - y[i]);
      return s;
    }
    case NormKind::L2: {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) {
        const double d = x[i] - y[i];
        s += d * d;
      }
      return std::sqrt(s);
    }
    case NormKind::Linf: {
      double m = 0.0;
      for (int i = 0; i < dim_; ++i) m = std::max(m, std::abs(x[i] - y[i]));
      return m;
    }
  }
  return 0.0;
}

double MetricSpace::distance(const Point& a, const Point& b) const {
  return metric_scale_ * base_distance(a, b);
}

double MetricSpace::norm(std::span<const double> v) const {
  if (kind_ != SpaceKind::Normed) {
    throw UnsupportedOperation("norm: not a normed space");
  }
  if (static_cast<int>(v.size()) != dim_) {
    throw DomainError("norm: vector length does not match space dimension");
  }
  switch (norm_) {
    case NormKind::L1: {
      double s = 0.0;
      for (double c : v) s += std::abs(c);
      return s;
    }
    case NormKind::L2: {
      double s = 0.0;
      for (double c : v) s += c * c;
      return std::sqrt(s);
    }
    case NormKind::Linf: {
      double m = 0.0;
      for (double c : v) m = std::max(m, std::abs(c));
      return m;
    }
  }
  return 0.0;
}

double MetricSpace::dual_norm(std::span<const double> g) const {
  if (kind_ != SpaceKind::Normed) {
    throw UnsupportedOperation("dual_norm: not defined on finite spaces");
  }
  if (static_cast<int>(g.size()) != dim_) {
    throw DomainError("dual_norm: vector length does not match space dimension");
  }
  switch (norm_) {
    case NormKind::L1: {  // dual of L1 is Linf
      double m = 0.0;
      for (double c : g) m = std::max(m, std::abs(c));
      return m;
    }
    case NormKind::L2: {  // self-dual
      double s = 0.0;
      for (double c : g) s += c * c;
      return std::sqrt(s);
    }
    case NormKind::Linf: {  // dual of Linf is L1
      double s = 0.0;
      for (double c : g) s += std::abs(c);
      return s;
    }
  }
  return 0.0;
}

std::vector<std::vector<double>> MetricSpace::sample_directions(int count,
                                                                std::uint64_t seed) const {
  if (kind_ != SpaceKind::Normed) {
    throw UnsupportedOperation("sample_directions: not defined on finite spaces");
  }
  if (count < 1) throw DomainError("sample_directions: count must be >= 1");

  std::vector<std::vector<double>> dirs;
  dirs.reserve(count);
  // Signed coordinate axes first; unit in all three norms.
  for (int i = 0; i < dim_ && static_cast<int>(dirs.size()) < count; ++i) {
    for (double sign : {1.0, -1.0}) {
      if (static_cast<int>(dirs.size()) >= count) break;
      std::vector<double> e(dim_, 0.0);
      e[i] = sign;
      dirs.push_back(std::move(e));
    }
  }
  SplitMix64 rng(SplitMix64::mix(seed, 0x6469726563ULL));
  while (static_cast<int>(dirs.size()) < count) {
    std::vector<double> v(dim_);
    for (int i = 0; i < dim_; ++i) v[i] = rng.next_gaussian();
    const double n = norm(v);
    if (n < 1e-12) continue;
    for (int i = 0; i < dim_; ++i) v[i] /= n;
    dirs.push_back(std::move(v));
  }
  return dirs;
}

std::string to_string(NormKind k) {
  switch (k) {
    case NormKind::L1: return "l1";
    case NormKind::L2: return "l2";
    case NormKind::Linf: return "linf";
  }
  return "l2";
}

NormKind norm_kind_from_string(const std::string& s) {
  if (s == "l1") return NormKind::L1;
  if (s == "l2") return NormKind::L2;
  if (s == "linf") return NormKind::Linf;
  throw SpecError("unknown norm '" + s + "' (expected l1, l2 or linf)");
}

}  // namespace evp
