#include "etl/ambient.hpp"

#include <stdexcept>
#include <string>

namespace etl {

Ambient::Ambient(Expression warping, double t_lo, double t_hi, int fiber_curvature, int n)
    : f_(std::move(warping)), t_lo_(t_lo), t_hi_(t_hi), c_(fiber_curvature), n_(n) {
  if (!(t_lo < t_hi)) throw std::invalid_argument("ambient: t_lo must be < t_hi");
  if (c_ != -1 && c_ != 0 && c_ != 1) {
    throw std::invalid_argument("ambient: fiber curvature must be -1, 0 or +1");
  }
  if (n_ < 2) throw std::invalid_argument("ambient: dimension n must be >= 2");
}

Jet2 Ambient::warping_jet(double t) const {
  if (!contains(t)) {
    throw DomainError("ambient: t = " + std::to_string(t) +
                      " outside the open interval (" + std::to_string(t_lo_) + ", " +
                      std::to_string(t_hi_) + ")");
  }
  const Jet2 f = f_.eval_jet2(t);
  if (!(f.v > 0.0)) {
    throw DomainError("ambient: warping function is not positive at t = " +
                      std::to_string(t));
  }
  return f;
}

LogDerivatives Ambient::log_derivatives(double t) const {
  const Jet2 f = warping_jet(t);
  LogDerivatives d;
  d.f = f.v;
  d.df = f.d1;
  d.ddf = f.d2;
  d.dlog = f.d1 / f.v;
  d.ddlog = f.d2 / f.v - d.dlog * d.dlog;
  return d;
}

SectionalPair Ambient::sectional(double t) const {
  const Jet2 f = warping_jet(t);
  SectionalPair k;
  k.k_radial = -f.d2 / f.v;
  k.k_fiber = (static_cast<double>(c_) - f.d1 * f.d1) / (f.v * f.v);
  return k;
}

double Ambient::curvature_condition_margin(double t) const {
  const Jet2 f = warping_jet(t);
  return (f.d1 * f.d1 - f.v * f.d2) - static_cast<double>(c_);
}

}  // namespace etl
