#include "etl/rotational.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "etl/gauss.hpp"

namespace etl {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,     0.0,        500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84,  0.0};
constexpr double kB4[7] = {5179.0 / 57600,    0.0,          7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

using quadrature::gauss_panels;

double hermite(double t, double h, double y0, double d0, double y1, double d1) {
  // Cubic Hermite on [0, h], evaluated at local coordinate t.
  const double u = t / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * h * d0 +
         (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * h * d1;
}

}  // namespace

double AxiTensor::max_abs() const {
  return std::max({std::fabs(ss), std::fabs(vv_k), std::fabs(vv_perp)});
}

AxiTensor operator+(const AxiTensor& a, const AxiTensor& b) {
  return {a.ss + b.ss, a.vv_k + b.vv_k, a.vv_perp + b.vv_perp};
}
AxiTensor operator-(const AxiTensor& a, const AxiTensor& b) {
  return {a.ss - b.ss, a.vv_k - b.vv_k, a.vv_perp - b.vv_perp};
}
AxiTensor operator*(double c, const AxiTensor& a) {
  return {c * a.ss, c * a.vv_k, c * a.vv_perp};
}

Jet2 RotationalSurface::theta_jet(double s) const {
  const Jet2 th = profile_.theta.eval_jet2(s);
  if (!th.finite() || th.v * th.v >= 1.0) {
    throw NumericError("rotational: |theta| >= 1 at s = " + std::to_string(s));
  }
  return th;
}

RotationalSurface RotationalSurface::build(Ambient ambient, AngleProfile profile,
                                           double zeta0, double beta0, int m,
                                           double quad_tol) {
  if (m < 16) throw std::invalid_argument("rotational: grid size m must be >= 16");
  if (!(profile.s_lo < profile.s_hi)) {
    throw std::invalid_argument("rotational: s_lo must be < s_hi");
  }
  if (!(quad_tol > 0.0)) throw std::invalid_argument("rotational: tolerance must be > 0");

  RotationalSurface surf(std::move(ambient), std::move(profile));
  surf.quad_tol_ = quad_tol;

  const double s_lo = surf.profile_.s_lo;
  const double s_hi = surf.profile_.s_hi;
  const double grid_h = (s_hi - s_lo) / m;

  // Right-hand side of the coupled profile system.
  auto rhs = [&surf](double s, const std::array<double, 2>& y) -> std::array<double, 2> {
    const Jet2 th = surf.theta_jet(s);
    const double dz = std::sqrt(1.0 - th.v * th.v);
    LogDerivatives fd;
    try {
      fd = surf.ambient_.log_derivatives(y[0]);
    } catch (const DomainError& e) {
      throw NumericError("rotational: profile left the ambient interval near s = " +
                         std::to_string(s) + " (" + e.what() + ")");
    }
    return {dz, th.v / fd.f};
  };

  surf.s_.resize(static_cast<std::size_t>(m) + 1);
  surf.zeta_.resize(surf.s_.size());
  surf.beta_.resize(surf.s_.size());
  surf.s_[0] = s_lo;
  surf.zeta_[0] = zeta0;
  surf.beta_[0] = beta0;

  std::array<double, 2> y = {zeta0, beta0};
  double s = s_lo;
  double h = grid_h / 8.0;
  long steps = 0;
  constexpr long kMaxSteps = 2000000;

  for (int node = 1; node <= m; ++node) {
    const double target = s_lo + grid_h * node;
    const double close_enough = 1e-14 * std::max(1.0, std::fabs(target));
    while (target - s > close_enough) {
      if (++steps > kMaxSteps) {
        throw NumericError("rotational: quadrature failed to reach tolerance " +
                           std::to_string(quad_tol));
      }
      h = std::min(h, target - s);
      // Step underflow: the stage abscissas would collapse onto s and the
      // error estimate degenerates to zero.
      if (s + 0.1 * h == s) {
        throw NumericError("rotational: quadrature cannot reach tolerance " +
                           std::to_string(quad_tol) + " (step underflow at s = " +
                           std::to_string(s) + ")");
      }
      std::array<std::array<double, 2>, 7> k;
      k[0] = rhs(s, y);
      bool rejected = false;
      std::array<double, 2> y5{};
      for (int stage = 1; stage < 7; ++stage) {
        std::array<double, 2> yi = y;
        for (int j = 0; j < stage; ++j) {
          yi[0] += h * kA[stage][j] * k[j][0];
          yi[1] += h * kA[stage][j] * k[j][1];
        }
        k[stage] = rhs(s + kC[stage] * h, yi);
      }
      // Local error from the weight differences directly; forming y5 - y4
      // after the update would saturate at the rounding of y.
      double err = 0.0;
      for (int comp = 0; comp < 2; ++comp) {
        double acc5 = 0.0, diff = 0.0;
        for (int stage = 0; stage < 7; ++stage) {
          acc5 += kB5[stage] * k[stage][comp];
          diff += (kB5[stage] - kB4[stage]) * k[stage][comp];
        }
        y5[comp] = y[comp] + h * acc5;
        const double scale = quad_tol * (1.0 + std::fabs(y[comp]));
        err = std::max(err, std::fabs(h * diff) / scale);
      }
      if (err <= 1.0) {
        s += h;
        y = y5;
      } else {
        rejected = true;
      }
      const double factor = 0.9 * std::pow(std::max(err, 1e-16), -0.2);
      h *= std::clamp(factor, rejected ? 0.1 : 0.2, 5.0);
      h = std::min(h, grid_h);
      if (!(h > 0.0) || !std::isfinite(h)) {
        throw NumericError("rotational: step size underflow in profile integration");
      }
    }
    s = target;
    surf.s_[static_cast<std::size_t>(node)] = target;
    surf.zeta_[static_cast<std::size_t>(node)] = y[0];
    surf.beta_[static_cast<std::size_t>(node)] = y[1];
  }

  // Grid admissibility: |theta| < 1 is checked by theta_jet; sigma > 0 and
  // zeta inside the ambient interval are checked here.
  for (int i = 0; i <= m; ++i) {
    const ProfileSample ps = surf.sample_from(surf.s_[static_cast<std::size_t>(i)],
                                              surf.zeta_[static_cast<std::size_t>(i)],
                                              surf.beta_[static_cast<std::size_t>(i)]);
    if (!(ps.sigma > 0.0)) {
      throw NumericError("rotational: sigma <= 0 at s = " + std::to_string(ps.s));
    }
  }
  return surf;
}

ProfileSample RotationalSurface::sample_from(double s, double zeta, double beta) const {
  const Jet2 th = theta_jet(s);
  LogDerivatives fd;
  try {
    fd = ambient_.log_derivatives(zeta);
  } catch (const DomainError& e) {
    throw NumericError(std::string("rotational: ") + e.what());
  }

  ProfileSample p;
  p.s = s;
  p.zeta = zeta;
  p.beta = beta;
  p.theta = th.v;
  p.theta_s = th.d1;
  p.theta_ss = th.d2;
  p.f = fd.f;
  p.f_t = fd.df;
  p.f_tt = fd.ddf;
  p.zeta_s = std::sqrt(1.0 - th.v * th.v);
  p.zeta_ss = -th.v * th.d1 / p.zeta_s;
  p.beta_s = th.v / fd.f;
  p.beta_ss = th.d1 / fd.f - th.v * fd.df * p.zeta_s / (fd.f * fd.f);
  p.sigma = fd.f * beta;
  p.sigma_s = fd.df * p.zeta_s * beta + fd.f * p.beta_s;
  p.sigma_ss = fd.ddf * p.zeta_s * p.zeta_s * beta + fd.df * p.zeta_ss * beta +
               2.0 * fd.df * p.zeta_s * p.beta_s + fd.f * p.beta_ss;
  p.h = zeta;
  p.h_s = p.zeta_s;
  p.h_ss = p.zeta_ss;
  return p;
}

ProfileSample RotationalSurface::at(double s) const {
  const double lo = s_.front();
  const double hi = s_.back();
  const double slack = 1e-12 * (hi - lo);
  if (s < lo - slack || s > hi + slack) {
    throw DomainError("rotational: s = " + std::to_string(s) + " out of range [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  const double grid_h = (hi - lo) / (static_cast<double>(s_.size()) - 1.0);
  const double pos = (s - lo) / grid_h;
  int i = static_cast<int>(std::floor(pos));
  i = std::clamp(i, 0, static_cast<int>(s_.size()) - 2);
  const auto iu = static_cast<std::size_t>(i);

  if (s == s_[iu]) return sample_from(s, zeta_[iu], beta_[iu]);
  if (s == s_[iu + 1]) return sample_from(s, zeta_[iu + 1], beta_[iu + 1]);

  // Dense output: cubic Hermite on (zeta, beta) with exact node derivatives.
  const Jet2 th0 = theta_jet(s_[iu]);
  const Jet2 th1 = theta_jet(s_[iu + 1]);
  const double dz0 = std::sqrt(1.0 - th0.v * th0.v);
  const double dz1 = std::sqrt(1.0 - th1.v * th1.v);
  const double f0 = ambient_.log_derivatives(zeta_[iu]).f;
  const double f1 = ambient_.log_derivatives(zeta_[iu + 1]).f;
  const double t = s - s_[iu];
  const double zeta = hermite(t, grid_h, zeta_[iu], dz0, zeta_[iu + 1], dz1);
  const double beta =
      hermite(t, grid_h, beta_[iu], th0.v / f0, beta_[iu + 1], th1.v / f1);
  return sample_from(s, zeta, beta);
}

AxiTensor RotationalSurface::shape_operator(double s) const {
  const ProfileSample p = at(s);
  const double q = p.zeta_s;  // sqrt(1 - theta^2)
  const double lf = p.f_t / p.f;
  const double ss = -lf * p.theta - p.theta_s / q;
  const double vv = q / p.sigma - lf * p.theta;
  return {ss, vv, vv};
}

double RotationalSurface::mean_curvature(double s) const {
  const AxiTensor a = shape_operator(s);
  const int n = dimension();
  return (a.ss + (n - 1) * a.vv_k) / n;
}

double RotationalSurface::traceless_phi_norm2(double s) const {
  const AxiTensor a = shape_operator(s);
  const int n = dimension();
  const double H = (a.ss + (n - 1) * a.vv_k) / n;
  return a.ss * a.ss + (n - 1) * a.vv_k * a.vv_k - n * H * H;
}

HeightInfo RotationalSurface::height_and_gradient(double s) const {
  const ProfileSample p = at(s);
  return {p.h, p.h_s, 1.0 - p.theta * p.theta};
}

void RotationalSurface::embed_point(double s, std::span<const double> v,
                                    std::span<double> out) const {
  const int n = dimension();
  if (static_cast<int>(v.size()) != n - 1) {
    throw std::invalid_argument("embed_point: expected n-1 angles");
  }
  if (static_cast<int>(out.size()) != n + 1) {
    throw std::invalid_argument("embed_point: output needs n+1 coordinates");
  }
  const ProfileSample p = at(s);
  out[0] = p.zeta;
  double sines = 1.0;  // running product sin v1 ... sin v_{j-1}
  for (int j = 0; j < n - 1; ++j) {
    out[static_cast<std::size_t>(j) + 1] = p.beta * sines * std::cos(v[static_cast<std::size_t>(j)]);
    sines *= std::sin(v[static_cast<std::size_t>(j)]);
  }
  out[static_cast<std::size_t>(n)] = p.beta * sines;
}

std::vector<double> RotationalSurface::embed_point(double s, std::span<const double> v) const {
  std::vector<double> out(static_cast<std::size_t>(dimension()) + 1);
  embed_point(s, v, out);
  return out;
}

AnchoredProfile RotationalSurface::anchored(double center_s) const {
  const double lo = s_.front();
  const double hi = s_.back();
  const double grid_h = (hi - lo) / (static_cast<double>(s_.size()) - 1.0);
  int i = static_cast<int>(std::llround((center_s - lo) / grid_h));
  i = std::clamp(i, 0, static_cast<int>(s_.size()) - 1);
  AnchoredProfile a;
  a.surface_ = this;
  a.s0_ = s_[static_cast<std::size_t>(i)];
  a.zeta0_ = zeta_[static_cast<std::size_t>(i)];
  a.beta0_ = beta_[static_cast<std::size_t>(i)];
  return a;
}

double AnchoredProfile::zeta(double s) const {
  const auto& theta = surface_->profile_.theta;
  return zeta0_ + gauss_panels(
                      [&theta](double w) {
                        const double t = theta.eval(w);
                        return std::sqrt(1.0 - t * t);
                      },
                      s0_, s, 0.02);
}

double AnchoredProfile::beta(double s) const {
  return beta0_ + gauss_panels(
                      [this](double w) {
                        const double t = surface_->profile_.theta.eval(w);
                        const double z = zeta(w);
                        return t / surface_->ambient_.log_derivatives(z).f;
                      },
                      s0_, s, 0.02);
}

double AnchoredProfile::sigma(double s) const {
  const double z = zeta(s);
  const double b = beta(s);
  return surface_->ambient_.log_derivatives(z).f * b;
}

}  // namespace etl
