#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evp/functional.hpp"
#include "evp/point.hpp"
#include "evp/space.hpp"

namespace evp {

enum class SamplerKind { Exhaustive, LocalBall };
enum class Termination { Stationary, StepTolerance, MaxIters };

struct LocalBallParams {
  double radius_factor = 1.0;   // ball radius = factor * (F(u_n) - lower_bound) / eps
  int samples_per_iter = 2048;  // approximate candidate evaluations per iteration
  std::uint64_t seed = 0;
};

struct SolverConfig {
  double epsilon = 0.1;
  int max_iters = 10000;
  // Default when unset: 0 on finite spaces, 1e-10 * effective epsilon on
  // normed spaces. Below that, floating-point descent is noise.
  std::optional<double> step_tolerance;
  std::optional<SamplerKind> sampler;  // default: Exhaustive on finite, LocalBall on normed
  LocalBallParams ball;
  // Run with effective tolerance epsilon^2; certificates then check the
  // first-order bound at epsilon^2 and the second-variation bound at epsilon.
  bool second_order_mode = false;
  // The driver may validate a stricter hypothesis itself (rescaled-metric
  // mode checks F(u) < lb + eps^2 before rescaling the metric).
  bool skip_hypothesis_check = false;
};

/// Record of the descent sequence u_1 = u, u_2, ... with the per-step data
/// the descent inequalities are audited against.
struct IterationTrace {
  std::vector<Point> points;
  std::vector<double> values;         // F(u_n), nonincreasing
  std::vector<double> step_dists;     // d(u_n, u_{n+1})
  std::vector<double> inf_estimates;  // per-selection estimate of inf over S_n
  Termination terminated_by = Termination::Stationary;
  double effective_epsilon = 0.0;     // epsilon (or epsilon^2 in second-order mode)
};

struct SolveResult {
  Point v;
  IterationTrace trace;
};

/// Membership in S_n = { w : F(w) <= F(u_n) - eps * d(u_n, w) }.
/// Points with infinite value are never members.
bool membership_S(const Functional& f, const MetricSpace& s, double eps, const Point& u_n,
                  const Point& w);

/// One selection step. On finite spaces scans every point and returns the
/// exact argmin of F over S_n (ties to the lowest index), along with the
/// exact minimum as the inf estimate. On normed spaces samples the ball of
/// reachable points with a seeded ladder of radii and directions; only S_n
/// members are eligible, u_n is the fallback, and the inf estimate is the
/// sampled minimum. iter_index varies the direction sample per iteration.
std::pair<Point, double> select_next(const Functional& f, const MetricSpace& s, double eps,
                                     const Point& u_n, SamplerKind sampler,
                                     const LocalBallParams& ball, int iter_index = 0);

/// Execute the descent construction from start point u. Requires the
/// approximate-minimizer hypothesis F(u) <= lower_bound + epsilon (checked
/// against the supplied lower bound, which may understate the true infimum;
/// passing is then conservative). Returns the final iterate and the trace.
SolveResult run(const Functional& f, const MetricSpace& s, const Point& u,
                const SolverConfig& cfg);

/// run with effective tolerance epsilon^2 (hypothesis checked against
/// epsilon^2). Identical to run with cfg.epsilon squared.
SolveResult run_second_order(const Functional& f, const MetricSpace& s, const Point& u,
                             const SolverConfig& cfg);

std::string to_string(Termination t);
Termination termination_from_string(const std::string& s);

}  // namespace evp
