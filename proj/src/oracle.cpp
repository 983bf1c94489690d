#include "evp/oracle.hpp"

#include <limits>

#include "evp/errors.hpp"

namespace evp {
namespace oracle {

double perturbation_margin(double f_v, ExtReal f_w, double eps_times_d) {
  if (!f_w.is_finite()) return std::numeric_limits<double>::infinity();
  return (f_w.raw() + eps_times_d) - f_v;
}

namespace {

void require_finite_space(const MetricSpace& s, const char* op) {
  if (!s.is_finite()) {
    throw UnsupportedOperation(std::string(op) + ": oracle only covers finite spaces");
  }
}

}  // namespace

std::pair<double, Point> exact_inf(const Functional& f, const MetricSpace& s) {
  require_finite_space(s, "exact_inf");
  const int n = s.point_count();
  double best = std::numeric_limits<double>::infinity();
  int best_i = -1;
  for (int i = 0; i < n; ++i) {
    const ExtReal v = f.evaluate(Point::finite(i));
    if (!v.is_finite()) continue;
    if (v.raw() < best) {
      best = v.raw();
      best_i = i;
    }
  }
  if (best_i < 0) throw NoFiniteValue("exact_inf: every value is +inf");
  return {best, Point::finite(best_i)};
}

std::vector<int> ekeland_set(const Functional& f, const MetricSpace& s, double eps) {
  require_finite_space(s, "ekeland_set");
  const int n = s.point_count();
  std::vector<ExtReal> values;
  values.reserve(n);
  for (int i = 0; i < n; ++i) values.push_back(f.evaluate(Point::finite(i)));

  std::vector<int> out;
  for (int v = 0; v < n; ++v) {
    if (!values[v].is_finite()) continue;
    const double fv = values[v].raw();
    bool ok = true;
    for (int w = 0; w < n; ++w) {
      const double d = s.distance(Point::finite(v), Point::finite(w));
      if (perturbation_margin(fv, values[w], eps * d) < 0.0) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(v);
  }
  return out;
}

bool verify_against_oracle(const Functional& f, const MetricSpace& s, const Point& u, double eps,
                           const Point& v) {
  require_finite_space(s, "verify_against_oracle");
  s.require_member(u);
  s.require_member(v);
  const ExtReal fv = f.evaluate(v);
  const ExtReal fu = f.evaluate(u);
  if (!fv.is_finite() || !fu.is_finite()) return false;
  if (fv.raw() > fu.raw()) return false;
  if (s.distance(u, v) > 1.0) return false;
  const std::vector<int> set = ekeland_set(f, s, eps);
  for (int i : set) {
    if (i == v.index()) return true;
  }
  return false;
}

}  // namespace oracle
}  // namespace evp
