#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "evp/ext_real.hpp"
#include "evp/point.hpp"

namespace evp {

/// Extended-real-valued functional with an explicit finite lower bound and
/// optional analytic first derivative and second-variation bilinear form.
/// When the derivative callbacks are absent the functional is treated as
/// nonsmooth: first/second-order certificates report "not applicable"
/// instead of falling back to finite differences.
class Functional {
 public:
  using EvalFn = std::function<ExtReal(const Point&)>;
  using GradFn = std::function<std::vector<double>(const Point&)>;
  using HessFn =
      std::function<double(const Point&, std::span<const double>, std::span<const double>)>;

  Functional(std::string name, double lower_bound, EvalFn eval, GradFn grad = nullptr,
             HessFn hess = nullptr);

  const std::string& name() const { return name_; }
  double lower_bound() const { return lower_bound_; }
  bool has_grad() const { return static_cast<bool>(grad_); }
  bool has_hess() const { return static_cast<bool>(hess_); }

  /// Deterministic evaluation. Throws EvaluationError on NaN or on a value
  /// below the stated lower bound.
  ExtReal evaluate(const Point& p) const;

  std::vector<double> grad(const Point& p) const;
  double hess_form(const Point& p, std::span<const double> phi, std::span<const double> psi) const;

 private:
  std::string name_;
  double lower_bound_;
  EvalFn eval_;
  GradFn grad_;
  HessFn hess_;
};

ExtReal evaluate(const Functional& f, const Point& p);

/// Central difference (F(p+t*phi) - F(p-t*phi)) / (2t): numerical stand-in
/// for the first Gateaux variation <dF(p), phi>. Throws DerivativeUndefined
/// when a probe point has infinite value.
double gateaux_fd(const Functional& f, const Point& p, std::span<const double> phi, double t);

/// Second central difference (F(p+t*phi) - 2F(p) + F(p-t*phi)) / t^2:
/// numerical stand-in for the second variation d2F(p; phi, phi).
double second_variation_fd(const Functional& f, const Point& p, std::span<const double> phi,
                           double t);

/// Exact second-order Taylor remainder
///   R = F(p+eps*phi) - F(p) - eps*<grad(p),phi> - 0.5*eps^2*hess(p,phi,phi).
/// Requires analytic grad and hess_form. R/eps^2 -> 0 as eps -> 0+ for
/// twice differentiable functionals; second-order certificates use R
/// directly instead of assuming it negligible.
double taylor_remainder(const Functional& f, const Point& p, std::span<const double> phi,
                        double eps);

// --- Test-functional zoo -------------------------------------------------

namespace zoo {

Functional constant(double value);

/// F(x) = sum_i (x_i - c_i)^2, analytic gradient and Hessian.
Functional quadratic(std::vector<double> center);

/// F(x) = sum_i (x_i - c_i)^4, analytic gradient and Hessian.
Functional quartic(std::vector<double> center);

/// Standard Rosenbrock, dim >= 2, analytic gradient and Hessian.
Functional rosenbrock(int dim);

/// F(x) = sum_i |x_i - c_i|; nonsmooth, no derivatives.
Functional abs_sum(std::vector<double> center);

/// F(x) = coeff * sum_i (x_i - c_i)^2 + indicator of the box [lo, hi]
/// (+inf outside). Derivatives are those of the smooth part; they agree
/// with the functional's difference quotients at interior points only.
Functional boxed_quadratic(double coeff, std::vector<double> center, std::vector<double> lo,
                           std::vector<double> hi);

/// Finite-space functional from an explicit value table.
Functional table(std::vector<ExtReal> values, double lower_bound);

}  // namespace zoo

}  // namespace evp
