#pragma once

#include <cmath>
#include <cstdlib>

#include "etl/errors.hpp"

namespace etl {

/// Second-order jet: a function value together with its first and second
/// derivative at a point. Arithmetic propagates derivatives by the exact
/// chain/product/quotient rules (truncated Taylor triple), so no finite
/// differences are involved anywhere.
struct Jet2 {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  static Jet2 variable(double x) { return {x, 1.0, 0.0}; }
  static Jet2 constant(double c) { return {c, 0.0, 0.0}; }

  bool finite() const {
    return std::isfinite(v) && std::isfinite(d1) && std::isfinite(d2);
  }
};

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
}
inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
}
inline Jet2 operator-(const Jet2& a) { return {-a.v, -a.d1, -a.d2}; }
inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1,
          a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}
inline Jet2 operator/(const Jet2& a, const Jet2& b) {
  const double q = a.v / b.v;
  const double q1 = (a.d1 - q * b.d1) / b.v;
  const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.v;
  return {q, q1, q2};
}

inline Jet2 operator+(double c, const Jet2& a) { return Jet2::constant(c) + a; }
inline Jet2 operator+(const Jet2& a, double c) { return a + Jet2::constant(c); }
inline Jet2 operator-(double c, const Jet2& a) { return Jet2::constant(c) - a; }
inline Jet2 operator-(const Jet2& a, double c) { return a - Jet2::constant(c); }
inline Jet2 operator*(double c, const Jet2& a) { return {c * a.v, c * a.d1, c * a.d2}; }
inline Jet2 operator*(const Jet2& a, double c) { return c * a; }
inline Jet2 operator/(const Jet2& a, double c) { return {a.v / c, a.d1 / c, a.d2 / c}; }
inline Jet2 operator/(double c, const Jet2& a) { return Jet2::constant(c) / a; }

/// Lift a scalar function with known derivatives g, g', g'' through the chain
/// rule: (g∘x)'' = g''·x'² + g'·x''.
inline Jet2 lift(double g, double g1, double g2, const Jet2& x) {
  return {g, g1 * x.d1, g2 * x.d1 * x.d1 + g1 * x.d2};
}

inline Jet2 sin(const Jet2& x) {
  return lift(std::sin(x.v), std::cos(x.v), -std::sin(x.v), x);
}
inline Jet2 cos(const Jet2& x) {
  return lift(std::cos(x.v), -std::sin(x.v), -std::cos(x.v), x);
}
inline Jet2 tan(const Jet2& x) {
  const double t = std::tan(x.v);
  return lift(t, 1.0 + t * t, 2.0 * t * (1.0 + t * t), x);
}
inline Jet2 sinh(const Jet2& x) {
  return lift(std::sinh(x.v), std::cosh(x.v), std::sinh(x.v), x);
}
inline Jet2 cosh(const Jet2& x) {
  return lift(std::cosh(x.v), std::sinh(x.v), std::cosh(x.v), x);
}
inline Jet2 tanh(const Jet2& x) {
  const double t = std::tanh(x.v);
  return lift(t, 1.0 - t * t, -2.0 * t * (1.0 - t * t), x);
}
inline Jet2 sech(const Jet2& x) {
  const double s = 1.0 / std::cosh(x.v);
  const double t = std::tanh(x.v);
  return lift(s, -s * t, s * (t * t - s * s), x);
}
inline Jet2 csch(const Jet2& x) {
  if (x.v == 0.0) throw DomainError("csch undefined at 0");
  const double c = 1.0 / std::sinh(x.v);
  const double ct = std::cosh(x.v) / std::sinh(x.v);
  return lift(c, -c * ct, c * ct * ct + c * c * c, x);
}
inline Jet2 coth(const Jet2& x) {
  if (x.v == 0.0) throw DomainError("coth undefined at 0");
  const double c = std::cosh(x.v) / std::sinh(x.v);
  return lift(c, 1.0 - c * c, -2.0 * c * (1.0 - c * c), x);
}
inline Jet2 exp(const Jet2& x) {
  const double e = std::exp(x.v);
  return lift(e, e, e, x);
}
inline Jet2 log(const Jet2& x) {
  if (x.v <= 0.0) throw DomainError("log of a non-positive number");
  return lift(std::log(x.v), 1.0 / x.v, -1.0 / (x.v * x.v), x);
}
inline Jet2 sqrt(const Jet2& x) {
  if (x.v <= 0.0) throw DomainError("sqrt of a non-positive number");
  const double r = std::sqrt(x.v);
  return lift(r, 0.5 / r, -0.25 / (x.v * r), x);
}
inline Jet2 arctan(const Jet2& x) {
  const double d = 1.0 + x.v * x.v;
  return lift(std::atan(x.v), 1.0 / d, -2.0 * x.v / (d * d), x);
}
inline Jet2 abs(const Jet2& x) {
  if (x.v == 0.0) throw DomainError("derivative of abs at 0");
  const double sign = x.v > 0.0 ? 1.0 : -1.0;
  return lift(std::fabs(x.v), sign, 0.0, x);
}

/// Integer power by binary exponentiation on jets. Exact product rule at
/// every step, so it is valid for base <= 0 as well.
inline Jet2 pow_int(const Jet2& a, long long n) {
  if (n == 0) return Jet2::constant(1.0);
  if (n < 0) return Jet2::constant(1.0) / pow_int(a, -n);
  Jet2 result = Jet2::constant(1.0);
  Jet2 base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    base = base * base;
    n >>= 1;
  }
  return result;
}

/// General power. A constant integer exponent routes through pow_int; any
/// other exponent requires a positive base and uses exp(b·log a).
inline Jet2 pow(const Jet2& a, const Jet2& b) {
  const bool const_exp = b.d1 == 0.0 && b.d2 == 0.0;
  if (const_exp && std::fabs(b.v) < 1e15 && b.v == std::nearbyint(b.v)) {
    return pow_int(a, static_cast<long long>(std::llround(b.v)));
  }
  if (a.v <= 0.0) {
    throw DomainError("pow with non-integer exponent requires a positive base");
  }
  return exp(b * log(a));
}

}  // namespace etl
