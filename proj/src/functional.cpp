#include "evp/functional.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "evp/errors.hpp"

namespace evp {

Functional::Functional(std::string name, double lower_bound, EvalFn eval, GradFn grad,
                       HessFn hess)
    : name_(std::move(name)),
      lower_bound_(lower_bound),
      eval_(std::move(eval)),
      grad_(std::move(grad)),
      hess_(std::move(hess)) {
  if (!std::isfinite(lower_bound_)) {
    throw DomainError("Functional: lower_bound must be finite");
  }
  if (!eval_) throw DomainError("Functional: eval callback required");
}

ExtReal Functional::evaluate(const Point& p) const {
  const ExtReal v = eval_(p);  // ExtReal construction rejects NaN
  if (v.is_finite() && v.raw() < lower_bound_) {
    std::ostringstream os;
    os << "Functional '" << name_ << "': value " << v.raw() << " below stated lower bound "
       << lower_bound_;
    throw EvaluationError(os.str());
  }
  return v;
}

std::vector<double> Functional::grad(const Point& p) const {
  if (!grad_) throw UnsupportedOperation("Functional '" + name_ + "': no analytic gradient");
  return grad_(p);
}

double Functional::hess_form(const Point& p, std::span<const double> phi,
                             std::span<const double> psi) const {
  if (!hess_) throw UnsupportedOperation("Functional '" + name_ + "': no analytic hessian form");
  return hess_(p, phi, psi);
}

ExtReal evaluate(const Functional& f, const Point& p) { return f.evaluate(p); }

namespace {

Point shifted(const Point& p, std::span<const double> phi, double step) {
  if (p.is_index()) {
    throw UnsupportedOperation("finite-difference probes need a normed-space point");
  }
  const auto& x = p.coords();
  if (x.size() != phi.size()) {
    throw DomainError("direction length does not match point dimension");
  }
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + step * phi[i];
  return Point::normed(std::move(y));
}

double finite_probe(const Functional& f, const Point& p) {
  const ExtReal v = f.evaluate(p);
  if (!v.is_finite()) {
    throw DerivativeUndefined("Functional '" + f.name() + "': probe point has infinite value");
  }
  return v.raw();
}

}  // namespace

double gateaux_fd(const Functional& f, const Point& p, std::span<const double> phi, double t) {
  if (!(t > 0.0)) throw DomainError("gateaux_fd: step t must be positive");
  finite_probe(f, p);
  const double fp = finite_probe(f, shifted(p, phi, t));
  const double fm = finite_probe(f, shifted(p, phi, -t));
  return (fp - fm) / (2.0 * t);
}

double second_variation_fd(const Functional& f, const Point& p, std::span<const double> phi,
                           double t) {
  if (!(t > 0.0)) throw DomainError("second_variation_fd: step t must be positive");
  const double f0 = finite_probe(f, p);
  const double fp = finite_probe(f, shifted(p, phi, t));
  const double fm = finite_probe(f, shifted(p, phi, -t));
  return (fp - 2.0 * f0 + fm) / (t * t);
}

double taylor_remainder(const Functional& f, const Point& p, std::span<const double> phi,
                        double eps) {
  if (!(eps > 0.0)) throw DomainError("taylor_remainder: eps must be positive");
  if (!f.has_grad() || !f.has_hess()) {
    throw UnsupportedOperation("taylor_remainder: analytic grad and hess_form required");
  }
  const double f0 = finite_probe(f, p);
  const double f1 = finite_probe(f, shifted(p, phi, eps));
  const std::vector<double> g = f.grad(p);
  double g_dot_phi = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) g_dot_phi += g[i] * phi[i];
  const double h = f.hess_form(p, phi, phi);
  return f1 - f0 - eps * g_dot_phi - 0.5 * eps * eps * h;
}

namespace zoo {

namespace {

const std::vector<double>& coords_of(const Point& p, std::size_t expect_dim,
                                     const char* name) {
  if (p.is_index()) {
    throw DomainError(std::string(name) + ": expects a normed-space point");
  }
  const auto& x = p.coords();
  if (x.size() != expect_dim) {
    throw DomainError(std::string(name) + ": point dimension mismatch");
  }
  return x;
}

}  // namespace

Functional constant(double value) {
  return Functional("constant", value, [value](const Point&) { return ExtReal(value); });
}

Functional quadratic(std::vector<double> center) {
  const std::size_t d = center.size();
  auto eval = [center, d](const Point& p) {
    const auto& x = coords_of(p, d, "quadratic");
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double r = x[i] - center[i];
      s += r * r;
    }
    return ExtReal(s);
  };
  auto grad = [center, d](const Point& p) {
    const auto& x = coords_of(p, d, "quadratic");
    std::vector<double> g(d);
    for (std::size_t i = 0; i < d; ++i) g[i] = 2.0 * (x[i] - center[i]);
    return g;
  };
  auto hess = [d](const Point&, std::span<const double> phi, std::span<const double> psi) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += phi[i] * psi[i];
    return 2.0 * s;
  };
  return Functional("quadratic", 0.0, std::move(eval), std::move(grad), std::move(hess));
}

Functional quartic(std::vector<double> center) {
  const std::size_t d = center.size();
  auto eval = [center, d](const Point& p) {
    const auto& x = coords_of(p, d, "quartic");
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double r = x[i] - center[i];
      s += r * r * r * r;
    }
    return ExtReal(s);
  };
  auto grad = [center, d](const Point& p) {
    const auto& x = coords_of(p, d, "quartic");
    std::vector<double> g(d);
    for (std::size_t i = 0; i < d; ++i) {
      const double r = x[i] - center[i];
      g[i] = 4.0 * r * r * r;
    }
    return g;
  };
  auto hess = [center, d](const Point& p, std::span<const double> phi,
                          std::span<const double> psi) {
    const auto& x = coords_of(p, d, "quartic");
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double r = x[i] - center[i];
      s += 12.0 * r * r * phi[i] * psi[i];
    }
    return s;
  };
  return Functional("quartic", 0.0, std::move(eval), std::move(grad), std::move(hess));
}

Functional rosenbrock(int dim) {
  if (dim < 2) throw DomainError("rosenbrock: dim must be >= 2");
  const std::size_t d = static_cast<std::size_t>(dim);
  auto eval = [d](const Point& p) {
    const auto& x = coords_of(p, d, "rosenbrock");
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < d; ++i) {
      const double a = x[i + 1] - x[i] * x[i];
      const double b = 1.0 - x[i];
      s += 100.0 * a * a + b * b;
    }
    return ExtReal(s);
  };
  auto grad = [d](const Point& p) {
    const auto& x = coords_of(p, d, "rosenbrock");
    std::vector<double> g(d, 0.0);
    for (std::size_t i = 0; i + 1 < d; ++i) {
      const double a = x[i + 1] - x[i] * x[i];
      g[i] += -400.0 * x[i] * a - 2.0 * (1.0 - x[i]);
      g[i + 1] += 200.0 * a;
    }
    return g;
  };
  auto hess = [d](const Point& p, std::span<const double> phi, std::span<const double> psi) {
    const auto& x = coords_of(p, d, "rosenbrock");
    // Tridiagonal Hessian applied as a bilinear form.
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < d; ++i) {
      const double a = x[i + 1] - x[i] * x[i];
      const double hii = -400.0 * a + 800.0 * x[i] * x[i] + 2.0;
      const double hij = -400.0 * x[i];
      s += hii * phi[i] * psi[i];
      s += hij * (phi[i] * psi[i + 1] + phi[i + 1] * psi[i]);
      s += 200.0 * phi[i + 1] * psi[i + 1];
    }
    return s;
  };
  return Functional("rosenbrock", 0.0, std::move(eval), std::move(grad), std::move(hess));
}

Functional abs_sum(std::vector<double> center) {
  const std::size_t d = center.size();
  auto eval = [center, d](const Point& p) {
    const auto& x = coords_of(p, d, "abs_sum");
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += std::abs(x[i] - center[i]);
    return ExtReal(s);
  };
  return Functional("abs_sum", 0.0, std::move(eval));
}

Functional boxed_quadratic(double coeff, std::vector<double> center, std::vector<double> lo,
                           std::vector<double> hi) {
  const std::size_t d = center.size();
  if (lo.size() != d || hi.size() != d) {
    throw DomainError("boxed_quadratic: center/lo/hi must have equal lengths");
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (!(lo[i] <= hi[i])) throw DomainError("boxed_quadratic: needs lo <= hi");
  }
  // Exact minimum over the box, separable per coordinate.
  double lb = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double rl = lo[i] - center[i];
    const double rh = hi[i] - center[i];
    if (coeff >= 0.0) {
      double r = 0.0;
      if (center[i] < lo[i]) r = rl;
      if (center[i] > hi[i]) r = rh;
      lb += coeff * r * r;
    } else {
      lb += coeff * std::max(rl * rl, rh * rh);
    }
  }
  auto eval = [coeff, center, lo, hi, d](const Point& p) {
    const auto& x = coords_of(p, d, "boxed_quadratic");
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      if (x[i] < lo[i] || x[i] > hi[i]) return ExtReal::infinity();
      const double r = x[i] - center[i];
      s += coeff * r * r;
    }
    return ExtReal(s);
  };
  auto grad = [coeff, center, d](const Point& p) {
    const auto& x = coords_of(p, d, "boxed_quadratic");
    std::vector<double> g(d);
    for (std::size_t i = 0; i < d; ++i) g[i] = 2.0 * coeff * (x[i] - center[i]);
    return g;
  };
  auto hess = [coeff, d](const Point&, std::span<const double> phi, std::span<const double> psi) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += phi[i] * psi[i];
    return 2.0 * coeff * s;
  };
  return Functional("boxed_quadratic", lb, std::move(eval), std::move(grad), std::move(hess));
}

Functional table(std::vector<ExtReal> values, double lower_bound) {
  const int n = static_cast<int>(values.size());
  if (n == 0) throw DomainError("table: needs at least one value");
  bool any_finite = false;
  for (const ExtReal& v : values) {
    if (v.is_finite()) {
      any_finite = true;
      if (v.raw() < lower_bound) {
        throw DomainError("table: contains a value below the stated lower bound");
      }
    }
  }
  if (!any_finite) throw NoFiniteValue("table: every value is +inf");
  auto eval = [values, n](const Point& p) {
    if (!p.is_index()) throw DomainError("table: expects a finite-space point");
    if (p.index() >= n) throw DomainError("table: point index out of range");
    return values[p.index()];
  };
  return Functional("table", lower_bound, std::move(eval));
}

}  // namespace zoo

}  // namespace evp
