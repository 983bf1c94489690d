#pragma once

#include <utility>
#include <vector>

#include "evp/functional.hpp"
#include "evp/point.hpp"
#include "evp/space.hpp"

namespace evp {

/// Brute-force ground truth on finite spaces. Single-threaded exact scans;
/// ties always break to the lowest index.
namespace oracle {

/// Margin of the perturbed inequality F(v) <= F(w) + eps*d(v,w) for one
/// witness: (F(w) + eps*d) - F(v), +inf when F(w) is +inf (vacuous). The
/// certificate module evaluates the same expression, so exhaustive
/// certificates and the oracle agree bit-for-bit.
double perturbation_margin(double f_v, ExtReal f_w, double eps_times_d);

/// Exact minimum of F over all points; skips +inf entries.
/// Throws NoFiniteValue when every value is +inf.
std::pair<double, Point> exact_inf(const Functional& f, const MetricSpace& s);

/// Exact set { v : F(v) finite and F(v) <= F(w) + eps*d(v,w) for all w },
/// as a sorted index list. O(n^2) double loop.
std::vector<int> ekeland_set(const Functional& f, const MetricSpace& s, double eps);

/// All three first-order-free conclusions, exact: v in ekeland_set(eps),
/// F(v) <= F(u), and d(u,v) <= 1.
bool verify_against_oracle(const Functional& f, const MetricSpace& s, const Point& u, double eps,
                           const Point& v);

}  // namespace oracle

}  // namespace evp
