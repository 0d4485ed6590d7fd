#pragma once

#include <span>
#include <vector>

#include "etl/ambient.hpp"

namespace etl {

/// A symmetric 2-tensor at a point of the hypersurface, diagonal in the
/// adapted orthonormal frame {e0 = phi_s, e_i = phi_{v_i}/|phi_{v_i}|}:
/// `ss` is the radial eigenvalue, `vv_k` the distinguished fiber direction
/// (the one a fiber-linear map depends on) and `vv_perp` the remaining n-2
/// fiber directions. Radially symmetric tensors have vv_k == vv_perp.
struct AxiTensor {
  double ss = 0.0;
  double vv_k = 0.0;
  double vv_perp = 0.0;

  double trace(int n) const { return ss + vv_k + (n - 2) * vv_perp; }
  double max_abs() const;
};

AxiTensor operator+(const AxiTensor& a, const AxiTensor& b);
AxiTensor operator-(const AxiTensor& a, const AxiTensor& b);
AxiTensor operator*(double c, const AxiTensor& a);

/// Angle profile theta(s) of a rotational hypersurface on an open s-range.
/// Admissible profiles satisfy |theta| < 1 on the range.
struct AngleProfile {
  Expression theta;
  double s_lo = 0.0;
  double s_hi = 0.0;
};

/// Everything the closed-form operators need at one parameter value, with
/// all derivatives obtained from jets and the chain rule (no finite
/// differences). f and its t-derivatives are evaluated at zeta(s).
struct ProfileSample {
  double s = 0.0;
  double zeta = 0.0, beta = 0.0;
  double theta = 0.0, theta_s = 0.0, theta_ss = 0.0;
  double f = 0.0, f_t = 0.0, f_tt = 0.0;
  double zeta_s = 0.0, zeta_ss = 0.0;
  double beta_s = 0.0, beta_ss = 0.0;
  double sigma = 0.0, sigma_s = 0.0, sigma_ss = 0.0;
  double h = 0.0, h_s = 0.0, h_ss = 0.0;  // h == zeta
};

struct HeightInfo {
  double h = 0.0;
  double h_s = 0.0;        // sqrt(1 - theta^2)
  double grad_norm2 = 0.0; // 1 - theta^2
};

class RotationalSurface;

/// High-accuracy profile evaluation anchored at one grid node: zeta and beta
/// are recovered by Gauss-Legendre quadrature of the defining integrands
/// from the anchor. All evaluations near the anchor share the same starting
/// values, so finite-difference stencils built on top of this see no
/// integration noise. Used by the intrinsic oracle.
class AnchoredProfile {
 public:
  double zeta(double s) const;
  double beta(double s) const;
  double sigma(double s) const;
  double anchor() const { return s0_; }

 private:
  friend class RotationalSurface;
  const RotationalSurface* surface_ = nullptr;
  double s0_ = 0.0, zeta0_ = 0.0, beta0_ = 0.0;
};

/// The rotational hypersurface built from (theta, f): profile integrals
/// zeta = int sqrt(1-theta^2), beta = int theta/f(zeta), the induced warping
/// sigma = f(zeta)·beta, height h = zeta, principal curvatures and the
/// embedding. The profile ODE is integrated on a uniform grid with an
/// adaptive embedded Runge-Kutta scheme; off-node queries use cubic Hermite
/// interpolation of (zeta, beta) with the exact node derivatives.
/// Immutable once built; safe to query from many threads.
class RotationalSurface {
 public:
  /// Integrate the coupled system zeta' = sqrt(1-theta^2), beta' =
  /// theta/f(zeta) from (zeta0, beta0) at s_lo over m uniform intervals.
  /// Requires m >= 16, |theta| < 1 on the grid, zeta inside the ambient
  /// interval and sigma > 0 at every node.
  static RotationalSurface build(Ambient ambient, AngleProfile profile, double zeta0,
                                 double beta0, int m, double quad_tol = 1e-10);

  ProfileSample at(double s) const;

  /// Principal curvatures in the adapted frame:
  ///   ss = -(f'/f)·theta - theta'/sqrt(1-theta^2)
  ///   vv = sqrt(1-theta^2)/sigma - (f'/f)·theta
  /// The operator is radially symmetric (vv_k == vv_perp).
  AxiTensor shape_operator(double s) const;

  /// H = (ss + (n-1)·vv)/n.
  double mean_curvature(double s) const;

  /// Squared norm of the traceless second fundamental form,
  /// |A|^2 - n H^2 >= 0; zero exactly at umbilical points.
  double traceless_phi_norm2(double s) const;

  HeightInfo height_and_gradient(double s) const;

  /// Embedding (zeta, beta·X_1(v), ..., beta·X_n(v)) with the spherical
  /// chart X_1 = cos v1, X_2 = sin v1 cos v2, ... `v` has n-1 angles, `out`
  /// receives n+1 coordinates.
  void embed_point(double s, std::span<const double> v, std::span<double> out) const;
  std::vector<double> embed_point(double s, std::span<const double> v) const;

  AnchoredProfile anchored(double center_s) const;

  int grid_size() const { return static_cast<int>(s_.size()); }
  double node(int i) const { return s_[static_cast<std::size_t>(i)]; }
  double s_lo() const { return s_.front(); }
  double s_hi() const { return s_.back(); }
  double node_zeta(int i) const { return zeta_[static_cast<std::size_t>(i)]; }
  double node_beta(int i) const { return beta_[static_cast<std::size_t>(i)]; }
  int dimension() const { return ambient_.dimension(); }
  const Ambient& ambient() const { return ambient_; }
  const AngleProfile& profile() const { return profile_; }
  double quad_tolerance() const { return quad_tol_; }

  /// theta jet at s with the |theta| < 1 admissibility check.
  Jet2 theta_jet(double s) const;

 private:
  RotationalSurface(Ambient a, AngleProfile p) : ambient_(std::move(a)), profile_(std::move(p)) {}

  ProfileSample sample_from(double s, double zeta, double beta) const;
  friend class AnchoredProfile;

  Ambient ambient_;
  AngleProfile profile_;
  double quad_tol_ = 1e-10;
  std::vector<double> s_, zeta_, beta_;
};

}  // namespace etl
