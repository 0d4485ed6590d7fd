#pragma once

#include <algorithm>
#include <cmath>

namespace etl::quadrature {

// 15-point Gauss-Legendre rule on [-1, 1].
inline constexpr int kGL = 15;
inline constexpr double kGLNode[kGL] = {
    -0.98799251802048543, -0.93727339240070590, -0.84820658341042722,
    -0.72441773136017005, -0.57097217260853885, -0.39415134707756337,
    -0.20119409399743452, 0.0,                  0.20119409399743452,
    0.39415134707756337,  0.57097217260853885,  0.72441773136017005,
    0.84820658341042722,  0.93727339240070590,  0.98799251802048543};
inline constexpr double kGLWeight[kGL] = {
    0.030753241996117268, 0.070366047488108125, 0.10715922046717194,
    0.13957067792615431,  0.16626920581699393,  0.18616100001556221,
    0.19843148532711158,  0.20257824192556127,  0.19843148532711158,
    0.18616100001556221,  0.16626920581699393,  0.13957067792615431,
    0.10715922046717194,  0.070366047488108125, 0.030753241996117268};

/// Composite Gauss-Legendre quadrature of `integrand` over [a, b] with panel
/// width at most `max_panel`. Handles b < a with the usual sign flip.
template <typename F>
double gauss_panels(F&& integrand, double a, double b, double max_panel) {
  const double span = b - a;
  if (span == 0.0) return 0.0;
  const int panels = std::max(1, static_cast<int>(std::ceil(std::fabs(span) / max_panel)));
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + span * p / panels;
    const double hi = a + span * (p + 1) / panels;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double acc = 0.0;
    for (int i = 0; i < kGL; ++i) acc += kGLWeight[i] * integrand(mid + half * kGLNode[i]);
    total += half * acc;
  }
  return total;
}

}  // namespace etl::quadrature
