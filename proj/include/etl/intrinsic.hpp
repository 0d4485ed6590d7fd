#pragma once

#include <array>
#include <functional>

#include "etl/rotational.hpp"

namespace etl::oracle {

inline constexpr int kMaxDim = 4;

/// A coordinate chart with a metric component callback. The oracle only ever
/// sees the metric through this interface, so its curvature values are
/// independent of every closed-form code path they are checked against.
struct ChartMetric {
  int dim = 0;
  /// Fills g (row-major dim x dim, symmetric) at the chart point x.
  std::function<void(const double* x, double* g)> components;
  /// Open box the finite-difference stencil must stay inside.
  std::array<double, kMaxDim> lo{};
  std::array<double, kMaxDim> hi{};
};

struct Matrix {
  int dim = 0;
  std::array<double, kMaxDim * kMaxDim> a{};
  double& at(int i, int j) { return a[static_cast<std::size_t>(i * kMaxDim + j)]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i * kMaxDim + j)]; }
};

struct Christoffels {
  int dim = 0;
  // G[k][i][j] = Gamma^k_ij, symmetric in (i, j).
  double G[kMaxDim][kMaxDim][kMaxDim] = {};
};

struct Riemann {
  int dim = 0;
  // up[l][i][j][k]  = R^l_ijk   with R(e_i, e_j) e_k = R^l_ijk e_l
  // low[i][j][k][l] = <R(e_i, e_j) e_k, e_l>
  double up[kMaxDim][kMaxDim][kMaxDim][kMaxDim] = {};
  double low[kMaxDim][kMaxDim][kMaxDim][kMaxDim] = {};
};

/// Relative residuals of the algebraic symmetries a curvature tensor must
/// satisfy, normalized by max(max|R|, 1).
struct SymmetryResiduals {
  double antisym_first = 0.0;
  double antisym_last = 0.0;
  double pair_symmetry = 0.0;
  double first_bianchi = 0.0;
  double worst() const;
};

Matrix metric_at(const ChartMetric& M, const double* p);
Matrix invert(const Matrix& g);

/// Levi-Civita connection coefficients from central differences of the
/// metric: Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij).
Christoffels christoffel_fd(const ChartMetric& M, const double* p, double step);

Riemann riemann_fd(const ChartMetric& M, const double* p, double step);

/// Ric_jk = R^i_ijk contracted from the finite-difference Riemann tensor.
Matrix ricci_fd(const ChartMetric& M, const double* p, double step);

/// One Richardson extrapolation level: (4·Ric(h/2) - Ric(h)) / 3.
Matrix ricci_fd_richardson(const ChartMetric& M, const double* p, double step);

/// Sectional curvature K(e_i, e_j) = R_ijji / (g_ii g_jj - g_ij^2).
double sectional_fd(const ChartMetric& M, const double* p, int i, int j, double step);

SymmetryResiduals riemann_symmetry_residuals(const Riemann& R);

/// Chart for the induced metric ds^2 + sigma(s)^2 g_{S^{n-1}} of a rotational
/// hypersurface, n in {2, 3}. sigma is evaluated through an AnchoredProfile
/// at `anchor_s`, so stencils near the anchor are free of integration noise.
ChartMetric surface_chart(const RotationalSurface& S, double anchor_s);

/// Round sphere of the given dimension (2 or 3) and radius, polar chart.
ChartMetric sphere_chart(int dim, double radius);

/// Three-dimensional model chart (t, x1, x2) of the ambient I x_f M(c):
/// dt^2 + f(t)^2 g_c with g_c the flat / round / hyperbolic plane model.
ChartMetric ambient_chart(const Ambient& a);

/// Closed-form Ricci of ds^2 + sigma^2 g_{S^{n-1}} in the orthonormal frame:
/// ss = -(n-1) sigma''/sigma, vv = -sigma''/sigma + (n-2)(1-sigma'^2)/sigma^2.
AxiTensor ricci_closed(const RotationalSurface& S, double s);

/// Hessian of a radial scalar w (given as the jet (w, w', w'') at s):
/// diag(w'', (sigma'/sigma) w', (sigma'/sigma) w') in the orthonormal frame.
AxiTensor hessian_radial(const RotationalSurface& S, const Jet2& w, double s);

/// Laplacian of a radial scalar; exactly the trace of hessian_radial.
double laplacian_radial(const RotationalSurface& S, const Jet2& w, double s);

/// Laplacian of the fiber coordinate v_k (1 <= k <= n-1) at the chart point
/// p = (s, v_1, ..., v_{n-1}), via the finite-difference connection:
/// Delta v_k = -g^{ij} Gamma^{v_k}_ij.
double fiber_coordinate_laplacian(const RotationalSurface& S, int k, const double* p,
                                  double step = 1e-4);

/// Richardson-extrapolated finite-difference Ricci converted to the adapted
/// orthonormal frame, so consumers never touch coordinate components. The
/// chart is anchored at s and the polar angle is clamped to [0.2, pi-0.2].
/// Empty v_ctx samples a generic interior point.
AxiTensor ricci_fd_axi(const RotationalSurface& S, double s,
                       std::span<const double> v_ctx = {}, double step = 1e-4);

}  // namespace etl::oracle
