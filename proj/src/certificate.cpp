#include "evp/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "evp/errors.hpp"
#include "evp/oracle.hpp"
#include "evp/rng.hpp"

namespace evp {

namespace {

constexpr std::uint64_t kStreamBall = 101;
constexpr std::uint64_t kStreamFirstOrder = 202;
constexpr std::uint64_t kStreamSecondOrder = 303;

}  // namespace

double cert_tolerance(double f_v) { return 1e-9 * (1.0 + std::abs(f_v)); }

const CertItem* Certificate::find(const std::string& id) const {
  for (const auto& it : items) {
    if (it.id == id) return &it;
  }
  return nullptr;
}

CertItem check_C1(const MetricSpace& s, const Point& u, const Point& v, double eps,
                  CertMode mode) {
  CertItem item;
  const double d = s.distance(u, v);
  if (mode == CertMode::RemarkRescaled) {
    item.id = "R1";
    item.margin = std::sqrt(eps) - d;
  } else {
    item.id = "C1";
    item.margin = 1.0 - d;
  }
  item.metrics.emplace_back("distance", d);
  item.status = item.margin >= -1e-9 ? CertStatus::Pass : CertStatus::Fail;
  return item;
}

CertItem check_C2(const Functional& f, const Point& u, const Point& v) {
  CertItem item;
  item.id = "C2";
  const double fu = f.evaluate(u).finite_value();
  const double fv = f.evaluate(v).finite_value();
  item.margin = fu - fv;
  item.status = item.margin >= -cert_tolerance(fv) ? CertStatus::Pass : CertStatus::Fail;
  return item;
}

CertItem check_C3(const Functional& f, const MetricSpace& s, const Point& v, double coeff,
                  const std::vector<Point>& extra_witnesses, const CertOptions& opts,
                  const std::string& id) {
  CertItem item;
  item.id = id;
  const double fv = f.evaluate(v).finite_value();

  double worst = std::numeric_limits<double>::infinity();
  CertWitness worst_w;
  int tested = 0;
  auto consider = [&](const Point& w) {
    const ExtReal fw = f.evaluate(w);
    const double m = oracle::perturbation_margin(fv, fw, coeff * s.distance(v, w));
    ++tested;
    if (m < worst) {
      worst = m;
      worst_w.point = w;
      worst_w.value = m;
    }
  };

  if (s.is_finite()) {
    // Exhaustive and exact: same margin expression the oracle scans.
    const int n = s.point_count();
    for (int i = 0; i < n; ++i) consider(Point::finite(i));
    item.margin = worst;
    item.samples = tested;
    if (worst_w.point) item.witnesses.push_back(worst_w);
    item.status = item.margin >= 0.0 ? CertStatus::Pass : CertStatus::Fail;
    return item;
  }

  consider(v);  // contributes exactly 0
  for (const Point& w : extra_witnesses) {
    if (s.contains(w)) consider(w);
  }

  // Any violating w has F(w) < F(v) - coeff*d(v,w) >= lower_bound, so all
  // violations live inside d(v,w) <= (F(v) - lb) / coeff. Sample that ball
  // with log-uniform and uniform radii around v.
  const double reach = (fv - f.lower_bound()) / coeff;
  const double r_cap = std::max(reach / s.metric_scale(), 1e-6);
  const double r_lo = std::max(1e-8 * r_cap, 1e-12);
  SplitMix64 rng(SplitMix64::mix(opts.seed, kStreamBall));
  const auto& x = v.coords();
  std::vector<double> y(x.size());
  const int dim = s.dim();
  for (int k = 0; k < opts.c3_samples; ++k) {
    std::vector<double> dir(dim);
    double n2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      dir[i] = rng.next_gaussian();
      n2 += dir[i] * dir[i];
    }
    const double nn = std::sqrt(n2);
    if (nn < 1e-12) continue;
    double r;
    if (k % 2 == 0) {
      r = r_lo * std::exp(rng.next_double() * std::log(r_cap / r_lo));
    } else {
      r = rng.next_double() * r_cap;
    }
    for (int i = 0; i < dim; ++i) y[i] = x[i] + r * dir[i] / nn;
    consider(Point::normed(y));
  }

  item.margin = worst;
  item.samples = tested;
  if (worst_w.point) item.witnesses.push_back(worst_w);
  item.status = item.margin >= -cert_tolerance(fv) ? CertStatus::Pass : CertStatus::Fail;
  return item;
}

CertItem check_C4(const Functional& f, const MetricSpace& s, const Point& v, double level,
                  const CertOptions& opts, const std::string& id) {
  CertItem item;
  item.id = id;
  if (s.is_finite()) {
    item.note = "finite space: no dual-norm structure";
    return item;
  }
  if (!f.has_grad()) {
    item.note = "no analytic gradient";
    return item;
  }
  const double fv = f.evaluate(v).finite_value();
  const double tol = cert_tolerance(fv);
  const std::vector<double> g = f.grad(v);
  const double dn = s.dual_norm(g);
  item.margin = level - dn;
  item.metrics.emplace_back("dual_norm_grad", dn);

  // One-sided descent quotients (F(v) - F(v + t*phi)) / t <= level*||phi||:
  // exactly what the perturbation inequality gives on the probe points.
  // Slack tol/t carries the perturbation tolerance through the division.
  // The central difference |gateaux_fd| <= level*||phi|| is checked as
  // well, with an extra curvature allowance 0.5*t*|d2F| since it mixes the
  // two one-sided quotients.
  const double t = opts.fd_step;
  const auto dirs = s.sample_directions(opts.directions, SplitMix64::mix(opts.seed, kStreamFirstOrder));
  double worst_excess = -std::numeric_limits<double>::infinity();
  CertWitness worst_dir;
  int probed = 0;
  for (const auto& phi : dirs) {
    const double bound = level * s.norm(phi) * s.metric_scale() + tol / t;
    const auto& x = v.coords();
    double q_plus = std::numeric_limits<double>::quiet_NaN();
    double q_minus = std::numeric_limits<double>::quiet_NaN();
    for (double sign : {1.0, -1.0}) {
      std::vector<double> w(phi.size());
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = x[i] + sign * t * phi[i];
      const ExtReal fw = f.evaluate(Point::normed(w));
      if (!fw.is_finite()) continue;  // quotient undefined, vacuous
      ++probed;
      const double quotient = (fv - fw.raw()) / t;
      (sign > 0 ? q_plus : q_minus) = quotient;
      const double excess = quotient - bound;
      if (excess > worst_excess) {
        worst_excess = excess;
        worst_dir.direction = phi;
        if (sign < 0) {
          for (double& c : *worst_dir.direction) c = -c;
        }
        worst_dir.value = excess;
      }
    }
    if (std::isnan(q_plus) || std::isnan(q_minus)) continue;
    const double central = 0.5 * (q_minus - q_plus);  // = gateaux_fd(f, v, phi, t)
    double curvature = 0.0;
    try {
      curvature = std::abs(second_variation_fd(f, v, phi, opts.fd_step2));
    } catch (const DerivativeUndefined&) {
    }
    const double central_bound =
        level * s.norm(phi) * s.metric_scale() + tol / t + 0.5 * t * curvature + tol;
    const double excess = std::abs(central) - central_bound;
    if (excess > worst_excess) {
      worst_excess = excess;
      worst_dir.direction = phi;
      worst_dir.value = excess;
    }
  }
  item.samples = probed;
  if (worst_dir.direction) {
    item.witnesses.push_back(worst_dir);
    item.metrics.emplace_back("worst_quotient_excess", worst_excess);
  }
  const bool quotients_ok = probed == 0 || worst_excess <= 0.0;
  item.status =
      (item.margin >= -tol && quotients_ok) ? CertStatus::Pass : CertStatus::Fail;
  return item;
}

CertItem check_C5(const Functional& f, const MetricSpace& s, const Point& v, double eps,
                  CertMode mode, const CertOptions& opts, const std::string& id) {
  CertItem item;
  item.id = id;
  if (s.is_finite()) {
    item.note = "finite space: no second variation";
    return item;
  }
  if (!f.has_grad() || !f.has_hess()) {
    item.note = "no analytic second variation";
    return item;
  }
  const double fv = f.evaluate(v).finite_value();
  const double tol = cert_tolerance(fv);
  const double coeff = (mode == CertMode::RemarkRescaled) ? 4.0 * std::sqrt(eps) : 4.0 * eps;
  const double decay_slack = 1e-12 * (1.0 + std::abs(fv));

  const auto dirs =
      s.sample_directions(opts.directions, SplitMix64::mix(opts.seed, kStreamSecondOrder));
  double worst = std::numeric_limits<double>::infinity();
  CertWitness worst_dir;
  // Decay of the measured remainder is judged on the worst ratio per level:
  // at a single direction the cubic and quartic Taylor terms can cancel at
  // one step size, which makes the per-direction sequence nonmonotone even
  // for polynomials.
  double q0_max = 0.0, q1_max = 0.0, q2_max = 0.0;
  int used = 0;
  for (const auto& phi : dirs) {
    double r0, r1, r2;
    try {
      r0 = taylor_remainder(f, v, phi, eps);
      r1 = taylor_remainder(f, v, phi, eps / 10.0);
      r2 = taylor_remainder(f, v, phi, eps / 100.0);
    } catch (const DerivativeUndefined&) {
      continue;  // probe left the effective domain
    }
    ++used;
    const double h = f.hess_form(v, phi, phi);
    const double m = h + coeff * s.norm(phi) + 2.0 * r0 / (eps * eps);
    q0_max = std::max(q0_max, std::abs(r0) / (eps * eps));
    q1_max = std::max(q1_max, std::abs(r1) / ((eps / 10.0) * (eps / 10.0)));
    q2_max = std::max(q2_max, std::abs(r2) / ((eps / 100.0) * (eps / 100.0)));
    if (m < worst) {
      worst = m;
      worst_dir.direction = phi;
      worst_dir.value = m;
    }
  }
  if (used == 0) {
    item.note = "no admissible probe directions";
    return item;
  }
  const bool decay_ok = q1_max <= q0_max + decay_slack && q2_max <= q1_max + decay_slack;
  item.margin = worst;
  item.samples = used;
  item.witnesses.push_back(worst_dir);
  item.metrics.emplace_back("remainder_over_eps2", q0_max);
  item.metrics.emplace_back("remainder_over_eps2_decade1", q1_max);
  item.metrics.emplace_back("remainder_over_eps2_decade2", q2_max);
  item.status = (worst >= -tol && decay_ok) ? CertStatus::Pass : CertStatus::Fail;
  if (!decay_ok) item.note = "remainder ratio |R|/eps^2 failed to decrease";
  return item;
}

std::vector<CertItem> check_remark(const Functional& f, const MetricSpace& s, const Point& u,
                                   const Point& v, double eps,
                                   const std::vector<Point>& extra_witnesses,
                                   const CertOptions& opts) {
  std::vector<CertItem> items;
  items.push_back(check_C1(s, u, v, eps, CertMode::RemarkRescaled));
  const double three_half = std::pow(eps, 1.5);
  items.push_back(check_C3(f, s, v, three_half, extra_witnesses, opts, "R3"));
  items.push_back(check_C4(f, s, v, three_half, opts, "R4"));
  items.push_back(check_C5(f, s, v, eps, CertMode::RemarkRescaled, opts, "R5"));
  return items;
}

Certificate make_certificate(const Functional& f, const MetricSpace& s, const Point& u,
                             const Point& v, double eps, CertMode mode,
                             const IterationTrace* trace, const CertOptions& opts) {
  Certificate cert;
  cert.mode = mode;
  cert.epsilon = eps;

  std::vector<Point> extra;
  extra.push_back(u);
  if (trace != nullptr) {
    extra.insert(extra.end(), trace->points.begin(), trace->points.end());
  }
  if (!s.is_finite() && f.has_grad()) {
    // First-order probe points double as perturbation witnesses so the
    // difference-quotient cross-check is implied by the same data.
    const auto dirs =
        s.sample_directions(opts.directions, SplitMix64::mix(opts.seed, kStreamFirstOrder));
    const auto& x = v.coords();
    for (const auto& phi : dirs) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> w(x.size());
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = x[i] + sign * opts.fd_step * phi[i];
        extra.push_back(Point::normed(std::move(w)));
      }
    }
  }

  // The first-order and second-order conclusions presuppose a normed space;
  // on finite spaces the certificate carries only the metric conclusions.
  if (mode == CertMode::RemarkRescaled) {
    auto items = check_remark(f, s, u, v, eps, extra, opts);
    cert.items.push_back(items[0]);  // R1
    cert.items.push_back(check_C2(f, u, v));
    cert.items.push_back(items[1]);  // R3
    if (!s.is_finite()) {
      cert.items.push_back(items[2]);  // R4
      cert.items.push_back(items[3]);  // R5
    }
  } else {
    const double level = (mode == CertMode::SecondOrder) ? eps * eps : eps;
    cert.items.push_back(check_C1(s, u, v, eps, mode));
    cert.items.push_back(check_C2(f, u, v));
    cert.items.push_back(check_C3(f, s, v, level, extra, opts));
    if (!s.is_finite()) {
      cert.items.push_back(check_C4(f, s, v, level, opts));
      if (mode == CertMode::SecondOrder) {
        cert.items.push_back(check_C5(f, s, v, eps, mode, opts));
      } else {
        CertItem c5;
        c5.id = "C5";
        c5.note = "second-variation bound applies to second-order runs";
        cert.items.push_back(c5);
      }
    }
  }

  bool any_na = false;
  bool all_pass = true;
  for (const auto& it : cert.items) {
    if (it.status == CertStatus::NotApplicable) {
      any_na = true;
    } else if (it.status != CertStatus::Pass) {
      all_pass = false;
    }
  }
  cert.overall = !all_pass ? CertOverall::Fail
                           : (any_na ? CertOverall::Partial : CertOverall::Pass);
  return cert;
}

std::string to_string(CertMode m) {
  switch (m) {
    case CertMode::Standard: return "standard";
    case CertMode::SecondOrder: return "second_order";
    case CertMode::RemarkRescaled: return "remark_rescaled";
  }
  return "standard";
}

std::string to_string(CertStatus s) {
  switch (s) {
    case CertStatus::Pass: return "pass";
    case CertStatus::Fail: return "fail";
    case CertStatus::NotApplicable: return "not_applicable";
  }
  return "fail";
}

std::string to_string(CertOverall o) {
  switch (o) {
    case CertOverall::Pass: return "pass";
    case CertOverall::Fail: return "fail";
    case CertOverall::Partial: return "partial";
  }
  return "fail";
}

CertMode cert_mode_from_string(const std::string& s) {
  if (s == "standard") return CertMode::Standard;
  if (s == "second_order" || s == "second-order") return CertMode::SecondOrder;
  if (s == "remark_rescaled" || s == "remark") return CertMode::RemarkRescaled;
  throw SpecError("unknown certificate mode '" + s + "'");
}

CertStatus cert_status_from_string(const std::string& s) {
  if (s == "pass") return CertStatus::Pass;
  if (s == "fail") return CertStatus::Fail;
  if (s == "not_applicable") return CertStatus::NotApplicable;
  throw SpecError("unknown certificate status '" + s + "'");
}

CertOverall cert_overall_from_string(const std::string& s) {
  if (s == "pass") return CertOverall::Pass;
  if (s == "fail") return CertOverall::Fail;
  if (s == "partial") return CertOverall::Partial;
  throw SpecError("unknown overall status '" + s + "'");
}

}  // namespace evp
