#include "doctest.h"

#include <cmath>

#include "evp/errors.hpp"
#include "evp/rng.hpp"
#include "evp/space.hpp"

using namespace evp;

namespace {

MetricSpace two_points(double d01) {
  return MetricSpace::finite({"a", "b"}, {{0.0, d01}, {d01, 0.0}});
}

}  // namespace

TEST_CASE("finite distance basics") {
  MetricSpace s = two_points(1.5);
  CHECK(s.distance(Point::finite(0), Point::finite(0)) == 0.0);
  CHECK(s.distance(Point::finite(0), Point::finite(1)) == 1.5);
  CHECK(s.distance(Point::finite(1), Point::finite(0)) == 1.5);
  CHECK_THROWS_AS(s.distance(Point::finite(0), Point::finite(2)), DomainError);
  CHECK_THROWS_AS(s.distance(Point::finite(0), Point::normed({0.0})), DomainError);
}

TEST_CASE("normed distance and metric_scale") {
  MetricSpace s = MetricSpace::normed(2, NormKind::L2);
  const Point a = Point::normed({0.0, 0.0});
  const Point b = Point::normed({3.0, 4.0});
  CHECK(s.distance(a, b) == 5.0);
  CHECK(s.distance(b, a) == 5.0);
  CHECK(s.distance(a, a) == 0.0);

  // scale = eps^(1/2) with eps = 0.25
  MetricSpace half = s.with_metric_scale(0.5);
  CHECK(half.distance(a, b) == 2.5);
  CHECK(half.base_distance(a, b) == 5.0);

  // scale multiplies every distance bitwise
  MetricSpace scaled = s.with_metric_scale(1.7);
  CHECK(scaled.distance(a, b) == 1.7 * 5.0);
}

TEST_CASE("finite space validation") {
  CHECK_THROWS_AS(MetricSpace::finite({}, {{0.0, 1.0}, {2.0, 0.0}}), DomainError);  // asymmetric
  CHECK_THROWS_AS(MetricSpace::finite({}, {{0.5, 1.0}, {1.0, 0.0}}), DomainError);  // diagonal
  CHECK_THROWS_AS(MetricSpace::finite({}, {{0.0, -1.0}, {-1.0, 0.0}}), DomainError);
  CHECK_THROWS_AS(MetricSpace::finite({}, {{0.0, 0.0}, {0.0, 0.0}}), DomainError);  // identity axiom
  // triangle violation: d(0,2) = 10 > d(0,1) + d(1,2) = 2
  CHECK_THROWS_AS(MetricSpace::finite({}, {{0.0, 1.0, 10.0}, {1.0, 0.0, 1.0}, {10.0, 1.0, 0.0}}),
                  DomainError);
  // ragged matrices (any short row) are rejected before any cross-row read
  CHECK_THROWS_AS(MetricSpace::finite({}, {{0.0, 1.0, 1.5}, {}, {1.5, 0.5, 0.0}}), DomainError);
  CHECK_THROWS_AS(MetricSpace::finite({}, {{0.0, 1.0}, {1.0, 0.0, 2.0}}), DomainError);
  // 501 points rejected
  std::vector<std::vector<double>> big(501, std::vector<double>(501, 1.0));
  for (int i = 0; i < 501; ++i) big[i][i] = 0.0;
  CHECK_THROWS_AS(MetricSpace::finite({}, big), DomainError);
}

TEST_CASE("dual norms") {
  MetricSpace l2 = MetricSpace::normed(2, NormKind::L2);
  MetricSpace l1 = MetricSpace::normed(2, NormKind::L1);
  MetricSpace li = MetricSpace::normed(2, NormKind::Linf);
  const std::vector<double> g{3.0, -4.0};
  CHECK(l2.dual_norm(std::vector<double>{3.0, 4.0}) == 5.0);
  CHECK(l1.dual_norm(g) == 4.0);
  CHECK(li.dual_norm(g) == 7.0);
  CHECK_THROWS_AS(two_points(1.0).dual_norm(g), UnsupportedOperation);
  CHECK_THROWS_AS(l2.dual_norm(std::vector<double>{1.0}), DomainError);
}

TEST_CASE("sample_directions axes, normalization, determinism") {
  MetricSpace s2 = MetricSpace::normed(2, NormKind::L2);
  auto dirs = s2.sample_directions(4, 123);
  REQUIRE(dirs.size() == 4);
  CHECK(dirs[0] == std::vector<double>{1.0, 0.0});
  CHECK(dirs[1] == std::vector<double>{-1.0, 0.0});
  CHECK(dirs[2] == std::vector<double>{0.0, 1.0});
  CHECK(dirs[3] == std::vector<double>{0.0, -1.0});

  MetricSpace s3 = MetricSpace::normed(3, NormKind::L2);
  auto d3 = s3.sample_directions(10, 7);
  REQUIRE(d3.size() == 10);
  for (const auto& phi : d3) CHECK(std::abs(s3.norm(phi) - 1.0) <= 1e-12);
  CHECK(d3 == s3.sample_directions(10, 7));
  CHECK(d3 != s3.sample_directions(10, 8));

  for (NormKind k : {NormKind::L1, NormKind::Linf}) {
    MetricSpace s = MetricSpace::normed(3, k);
    for (const auto& phi : s.sample_directions(12, 5)) {
      CHECK(std::abs(s.norm(phi) - 1.0) <= 1e-12);
    }
  }

  CHECK_THROWS_AS(two_points(1.0).sample_directions(4, 1), UnsupportedOperation);
  CHECK_THROWS_AS(s2.sample_directions(0, 1), DomainError);
}

TEST_CASE("Hoelder pairing bound for all norm kinds") {
  for (NormKind k : {NormKind::L1, NormKind::L2, NormKind::Linf}) {
    MetricSpace s = MetricSpace::normed(4, k);
    SplitMix64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> g(4);
      for (double& c : g) c = rng.next_uniform(-3.0, 3.0);
      for (const auto& phi : s.sample_directions(16, trial)) {
        double pairing = 0.0;
        for (int i = 0; i < 4; ++i) pairing += g[i] * phi[i];
        const double bound = s.dual_norm(g) * s.norm(phi);
        CHECK(std::abs(pairing) <= bound * (1.0 + 1e-12) + 1e-300);
      }
    }
  }
}

TEST_CASE("distance symmetry on random samples") {
  MetricSpace s = MetricSpace::normed(3, NormKind::L1);
  SplitMix64 rng(5);
  for (int i = 0; i < 40; ++i) {
    std::vector<double> a(3), b(3);
    for (int j = 0; j < 3; ++j) {
      a[j] = rng.next_uniform(-2.0, 2.0);
      b[j] = rng.next_uniform(-2.0, 2.0);
    }
    Point pa = Point::normed(a), pb = Point::normed(b);
    CHECK(s.distance(pa, pb) == s.distance(pb, pa));
    CHECK(s.distance(pa, pa) == 0.0);
  }
}

TEST_CASE("point validation") {
  CHECK_THROWS_AS(Point::finite(-1), DomainError);
  CHECK_THROWS_AS(Point::normed({1.0, std::nan("")}), DomainError);
  CHECK_THROWS_AS(Point::normed({std::numeric_limits<double>::infinity()}), DomainError);
}
