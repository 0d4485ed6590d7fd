#pragma once

#include "etl/expr.hpp"

namespace etl {

/// Warping function data at a point: f, f', f'' and the log-derivatives
/// (log f)' = f'/f, (log f)'' = f''/f - (f'/f)^2.
struct LogDerivatives {
  double f = 0.0;
  double df = 0.0;
  double ddf = 0.0;
  double dlog = 0.0;
  double ddlog = 0.0;
};

/// Ambient sectional curvatures of I x_f M(c): radial planes (span of the
/// base direction and a fiber direction) and fiber planes.
struct SectionalPair {
  double k_radial = 0.0;  // -f''/f
  double k_fiber = 0.0;   // (c - f'^2)/f^2
};

/// The ambient warped product I x_f M(c): a positive warping function on an
/// open interval, a constant-curvature fiber (c in {-1, 0, +1}) and the
/// hypersurface dimension n (ambient dimension n+1). Immutable; freely
/// shared between threads.
class Ambient {
 public:
  Ambient(Expression warping, double t_lo, double t_hi, int fiber_curvature, int n);

  LogDerivatives log_derivatives(double t) const;
  SectionalPair sectional(double t) const;

  /// Signed margin of the fiber-curvature hypothesis at t:
  /// (f'(t)^2 - f(t) f''(t)) - c. Nonnegative where the hypothesis holds.
  double curvature_condition_margin(double t) const;

  bool contains(double t) const { return t > t_lo_ && t < t_hi_; }
  double t_lo() const { return t_lo_; }
  double t_hi() const { return t_hi_; }
  int fiber_curvature() const { return c_; }
  int dimension() const { return n_; }
  const Expression& warping() const { return f_; }

 private:
  Jet2 warping_jet(double t) const;

  Expression f_;
  double t_lo_;
  double t_hi_;
  int c_;
  int n_;
};

}  // namespace etl
