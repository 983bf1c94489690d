#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "evp/point.hpp"

namespace evp {

enum class SpaceKind { Finite, Normed };
enum class NormKind { L1, L2, Linf };

/// A complete metric space, presented either as a finite point set with an
/// explicit distance matrix or as a finite-dimensional normed vector space
/// (L1, L2 or Linf norm). Immutable after construction; every distance is
/// metric_scale * base_distance, which is how the rescaled-metric mode is
/// realized without touching stored data.
class MetricSpace {
 public:
  /// Finite space. Validates symmetry, zero diagonal, positive off-diagonal
  /// entries and the triangle inequality over all triples (n <= 500).
  static MetricSpace finite(std::vector<std::string> labels,
                            std::vector<std::vector<double>> dist,
                            double metric_scale = 1.0);

  static MetricSpace normed(int dim, NormKind norm, double metric_scale = 1.0);

  SpaceKind kind() const { return kind_; }
  bool is_finite() const { return kind_ == SpaceKind::Finite; }
  int point_count() const;
  int dim() const;
  NormKind norm_kind() const;
  double metric_scale() const { return metric_scale_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::vector<double>>& dist_matrix() const { return dist_; }

  /// Same space under a different metric scale.
  MetricSpace with_metric_scale(double scale) const;

  /// True if the point is a member of this space (kind, index range, dim).
  bool contains(const Point& p) const;
  void require_member(const Point& p) const;

  /// metric_scale * base_distance(a, b).
  double distance(const Point& a, const Point& b) const;

  /// Distance with metric_scale factored out (matrix entry or plain norm).
  double base_distance(const Point& a, const Point& b) const;

  /// Norm of a coordinate vector in this space's norm (normed spaces only).
  double norm(std::span<const double> v) const;

  /// Norm dual to norm_kind: dual(L2)=L2, dual(L1)=Linf, dual(Linf)=L1.
  /// Does not include metric_scale.
  double dual_norm(std::span<const double> g) const;

  /// Deterministic unit directions (norm_kind norm). The first
  /// min(count, 2*dim) entries are the signed coordinate axes, so all axes
  /// are present whenever count >= 2*dim; the rest are seeded random
  /// directions. Normed spaces only.
  std::vector<std::vector<double>> sample_directions(int count, std::uint64_t seed) const;

 private:
  MetricSpace() = default;

  SpaceKind kind_ = SpaceKind::Finite;
  double metric_scale_ = 1.0;
  // finite
  std::vector<std::string> labels_;
  std::vector<std::vector<double>> dist_;
  // normed
  int dim_ = 0;
  NormKind norm_ = NormKind::L2;
};

std::string to_string(NormKind k);
NormKind norm_kind_from_string(const std::string& s);

}  // namespace evp
