#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evp/functional.hpp"
#include "evp/point.hpp"
#include "evp/solver.hpp"
#include "evp/space.hpp"

namespace evp {

enum class CertMode { Standard, SecondOrder, RemarkRescaled };
enum class CertStatus { Pass, Fail, NotApplicable };
enum class CertOverall { Pass, Fail, Partial };

struct CertOptions {
  int c3_samples = 2000;     // sampled perturbation witnesses on normed spaces
  int directions = 32;       // directions for first/second-order checks
  std::uint64_t seed = 0;
  double fd_step = 1e-5;     // step for first-order difference quotients
  double fd_step2 = 1e-4;    // step for curvature estimates
};

struct CertWitness {
  std::optional<Point> point;                   // worst perturbation witness
  std::optional<std::vector<double>> direction; // worst direction
  double value = 0.0;                           // its margin contribution
};

/// One verified conclusion. margin is the signed slack of the inequality
/// (negative = violated). Pass means margin >= -tol with
/// tol = 1e-9 * (1 + |F(v)|); exhaustive perturbation checks on finite
/// spaces are exact and use tol = 0 so that they agree with the oracle
/// scan bit-for-bit.
struct CertItem {
  std::string id;  // C1..C5 or R1, R3, R4, R5
  CertStatus status = CertStatus::NotApplicable;
  double margin = 0.0;
  std::vector<CertWitness> witnesses;
  int samples = 0;
  std::string note;
  std::vector<std::pair<std::string, double>> metrics;
};

struct Certificate {
  CertMode mode = CertMode::Standard;
  double epsilon = 0.0;
  std::vector<CertItem> items;
  CertOverall overall = CertOverall::Fail;

  const CertItem* find(const std::string& id) const;
};

double cert_tolerance(double f_v);

/// d(u,v) <= 1 (standard / second-order) or d(u,v) <= sqrt(eps)
/// (rescaled mode, against the original metric).
CertItem check_C1(const MetricSpace& s, const Point& u, const Point& v, double eps,
                  CertMode mode);

/// F(v) <= F(u).
CertItem check_C2(const Functional& f, const Point& u, const Point& v);

/// F(v) <= F(w) + coeff * d(v,w) over witnesses w. Exhaustive (exact) on
/// finite spaces; on normed spaces a seeded ball sample around v plus the
/// supplied extra witnesses (solver trace points and the first-order probe
/// points). coeff is eps, eps^2 or eps^(3/2) depending on mode.
CertItem check_C3(const Functional& f, const MetricSpace& s, const Point& v, double coeff,
                  const std::vector<Point>& extra_witnesses, const CertOptions& opts,
                  const std::string& id = "C3");

/// ||dF(v)||_* <= level, plus one-sided difference-quotient cross-checks
/// (F(v) - F(v + t*phi)) / t <= level * ||phi|| over sampled directions,
/// which is what the perturbation inequality implies on the same probes.
CertItem check_C4(const Functional& f, const MetricSpace& s, const Point& v, double level,
                  const CertOptions& opts, const std::string& id = "C4");

/// d2F(v,phi,phi) >= -coeff*||phi|| - 2*R/eps^2 with R the exact Taylor
/// remainder at step eps; coeff is 4*eps (second-order mode) or
/// 4*sqrt(eps) (rescaled mode). Also verifies |R|/eps^2 is nonincreasing
/// along eps, eps/10, eps/100.
CertItem check_C5(const Functional& f, const MetricSpace& s, const Point& v, double eps,
                  CertMode mode, const CertOptions& opts, const std::string& id = "C5");

/// Rescaled-metric items R1, R3, R4, R5 at the original metric.
std::vector<CertItem> check_remark(const Functional& f, const MetricSpace& s, const Point& u,
                                   const Point& v, double eps,
                                   const std::vector<Point>& extra_witnesses,
                                   const CertOptions& opts);

/// Assemble the full certificate for a solver result. The space is the
/// problem's own space (for rescaled runs: the metric before rescaling).
Certificate make_certificate(const Functional& f, const MetricSpace& s, const Point& u,
                             const Point& v, double eps, CertMode mode,
                             const IterationTrace* trace, const CertOptions& opts);

std::string to_string(CertMode m);
std::string to_string(CertStatus s);
std::string to_string(CertOverall o);
CertMode cert_mode_from_string(const std::string& s);
CertStatus cert_status_from_string(const std::string& s);
CertOverall cert_overall_from_string(const std::string& s);

}  // namespace evp
