#include "evp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "evp/errors.hpp"
#include "evp/rng.hpp"

namespace evp {

bool membership_S(const Functional& f, const MetricSpace& s, double eps, const Point& u_n,
                  const Point& w) {
  const ExtReal fw = f.evaluate(w);
  if (!fw.is_finite()) return false;
  const double fn = f.evaluate(u_n).finite_value();
  return fw.raw() <= fn - eps * s.distance(u_n, w);
}

namespace {

std::pair<Point, double> select_exhaustive(const Functional& f, const MetricSpace& s, double eps,
                                           const Point& u_n) {
  const double fn = f.evaluate(u_n).finite_value();
  const int n = s.point_count();
  Point best = u_n;
  double best_f = fn;
  for (int i = 0; i < n; ++i) {
    if (i == u_n.index()) continue;
    const Point w = Point::finite(i);
    const ExtReal fw = f.evaluate(w);
    if (!fw.is_finite()) continue;
    if (fw.raw() > fn - eps * s.distance(u_n, w)) continue;  // not in S_n
    if (fw.raw() < best_f) {  // strict: ties keep the lowest index
      best_f = fw.raw();
      best = w;
    }
  }
  return {best, best_f};
}

// Unit direction of steepest descent for the space's norm: it realizes the
// dual norm, <g, phi> = -||g||_*. With it in the candidate batch, some rung
// of the radius ladder qualifies for S_n whenever ||dF||_* exceeds eps by
// more than the finest rung, so a stationary stop certifies the dual-norm
// bound up to that resolution.
std::vector<double> dual_steepest_direction(const MetricSpace& s, const std::vector<double>& g) {
  const int dim = static_cast<int>(g.size());
  if (std::all_of(g.begin(), g.end(), [](double c) { return c == 0.0; })) return {};
  std::vector<double> phi(dim, 0.0);
  switch (s.norm_kind()) {
    case NormKind::L1: {  // extreme point of the L1 ball: best signed axis
      int best = 0;
      for (int i = 1; i < dim; ++i) {
        if (std::abs(g[i]) > std::abs(g[best])) best = i;
      }
      phi[best] = g[best] > 0 ? -1.0 : 1.0;
      return phi;
    }
    case NormKind::L2: {
      double n2 = 0.0;
      for (double c : g) n2 += c * c;
      const double n = std::sqrt(n2);
      if (n == 0.0) return {};
      for (int i = 0; i < dim; ++i) phi[i] = -g[i] / n;
      return phi;
    }
    case NormKind::Linf: {  // corner of the Linf ball
      for (int i = 0; i < dim; ++i) phi[i] = g[i] > 0 ? -1.0 : (g[i] < 0 ? 1.0 : 0.0);
      return phi;
    }
  }
  return {};
}

std::pair<Point, double> select_local_ball(const Functional& f, const MetricSpace& s, double eps,
                                           const Point& u_n, const LocalBallParams& ball,
                                           int iter_index) {
  const double fn = f.evaluate(u_n).finite_value();
  const double gap = fn - f.lower_bound();
  Point best = u_n;
  double best_f = fn;
  // Every member of S_n lies within (F(u_n) - lb) / eps of u_n, so this
  // radius covers the whole eligible set (in coordinate units).
  const double r_max = ball.radius_factor * gap / (eps * s.metric_scale());
  if (!(r_max > 0.0)) return {best, best_f};

  constexpr int kRadii = 44;  // geometric ladder down to ~1e-13 * r_max
  const int n_dirs = std::max(2 * s.dim(), ball.samples_per_iter / kRadii);
  const std::uint64_t iter_seed =
      SplitMix64::mix(ball.seed, static_cast<std::uint64_t>(iter_index) + 1);
  auto dirs = s.sample_directions(n_dirs, iter_seed);
  if (f.has_grad()) {
    const std::vector<double> g = f.grad(u_n);
    auto phi = dual_steepest_direction(s, g);
    if (!phi.empty()) dirs.insert(dirs.begin(), std::move(phi));
  }

  const auto& x = u_n.coords();
  std::vector<double> y(x.size());
  for (const auto& phi : dirs) {
    double r = r_max;
    for (int k = 0; k < kRadii; ++k, r *= 0.5) {
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + r * phi[i];
      const Point w = Point::normed(y);
      const ExtReal fw = f.evaluate(w);
      if (!fw.is_finite()) continue;
      if (fw.raw() > fn - eps * s.distance(u_n, w)) continue;
      if (fw.raw() < best_f) {
        best_f = fw.raw();
        best = w;
      }
    }
  }
  return {best, best_f};
}

}  // namespace

std::pair<Point, double> select_next(const Functional& f, const MetricSpace& s, double eps,
                                     const Point& u_n, SamplerKind sampler,
                                     const LocalBallParams& ball, int iter_index) {
  s.require_member(u_n);
  if (sampler == SamplerKind::Exhaustive) {
    if (!s.is_finite()) {
      throw DomainError("select_next: exhaustive sampler requires a finite space");
    }
    return select_exhaustive(f, s, eps, u_n);
  }
  if (s.is_finite()) {
    throw DomainError("select_next: local-ball sampler requires a normed space");
  }
  return select_local_ball(f, s, eps, u_n, ball, iter_index);
}

SolveResult run(const Functional& f, const MetricSpace& s, const Point& u,
                const SolverConfig& cfg) {
  if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon)) {
    throw DomainError("run: epsilon must be positive and finite");
  }
  if (cfg.max_iters < 1) throw DomainError("run: max_iters must be >= 1");
  s.require_member(u);

  const double eps = cfg.second_order_mode ? cfg.epsilon * cfg.epsilon : cfg.epsilon;
  const SamplerKind sampler =
      cfg.sampler.value_or(s.is_finite() ? SamplerKind::Exhaustive : SamplerKind::LocalBall);
  if (sampler == SamplerKind::Exhaustive && !s.is_finite()) {
    throw DomainError("run: exhaustive sampler requires a finite space");
  }
  const double step_tol = cfg.step_tolerance.value_or(s.is_finite() ? 0.0 : 1e-10 * eps);
  if (step_tol < 0.0) throw DomainError("run: step_tolerance must be nonnegative");

  const ExtReal fu = f.evaluate(u);
  if (!fu.is_finite()) {
    throw RejectedStart("run: start point has infinite value");
  }
  if (!cfg.skip_hypothesis_check && fu.raw() > f.lower_bound() + eps) {
    std::ostringstream os;
    os << "run: hypothesis F(u) <= lower_bound + eps fails: " << fu.raw() << " > "
       << f.lower_bound() << " + " << eps;
    throw RejectedStart(os.str());
  }

  IterationTrace trace;
  trace.effective_epsilon = eps;
  trace.points.push_back(u);
  trace.values.push_back(fu.raw());

  Point current = u;
  trace.terminated_by = Termination::MaxIters;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    auto [next, inf_est] = select_next(f, s, eps, current, sampler, cfg.ball, iter);
    trace.inf_estimates.push_back(inf_est);
    if (next == current) {
      trace.terminated_by = Termination::Stationary;
      break;
    }
    const double d = s.distance(current, next);
    trace.points.push_back(next);
    trace.values.push_back(f.evaluate(next).finite_value());
    trace.step_dists.push_back(d);
    current = next;
    if (d <= step_tol) {
      trace.terminated_by = Termination::StepTolerance;
      break;
    }
  }
  return {current, std::move(trace)};
}

SolveResult run_second_order(const Functional& f, const MetricSpace& s, const Point& u,
                             const SolverConfig& cfg) {
  SolverConfig c = cfg;
  c.second_order_mode = true;
  return run(f, s, u, c);
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Stationary: return "stationary";
    case Termination::StepTolerance: return "step_tolerance";
    case Termination::MaxIters: return "max_iters";
  }
  return "stationary";
}

Termination termination_from_string(const std::string& s) {
  if (s == "stationary") return Termination::Stationary;
  if (s == "step_tolerance") return Termination::StepTolerance;
  if (s == "max_iters") return Termination::MaxIters;
  throw SpecError("unknown termination '" + s + "'");
}

}  // namespace evp
