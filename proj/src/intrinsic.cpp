#include "etl/intrinsic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace etl::oracle {

namespace {

void check_dim(int dim) {
  if (dim < 2 || dim > kMaxDim) {
    throw std::invalid_argument("chart dimension must be in [2, " +
                                std::to_string(kMaxDim) + "]");
  }
}

void check_stencil(const ChartMetric& M, const double* p, double reach) {
  for (int i = 0; i < M.dim; ++i) {
    if (p[i] - reach <= M.lo[static_cast<std::size_t>(i)] ||
        p[i] + reach >= M.hi[static_cast<std::size_t>(i)]) {
      throw DomainError("oracle: stencil at coordinate " + std::to_string(i) +
                        " = " + std::to_string(p[i]) + " too close to the chart boundary");
    }
  }
}

// d g_ab / d x_k by central differences.
void metric_partials(const ChartMetric& M, const double* p, double step,
                     double dg[kMaxDim][kMaxDim][kMaxDim]) {
  double xp[kMaxDim], xm[kMaxDim];
  for (int k = 0; k < M.dim; ++k) {
    for (int i = 0; i < M.dim; ++i) {
      xp[i] = p[i];
      xm[i] = p[i];
    }
    xp[k] += step;
    xm[k] -= step;
    const Matrix gp = metric_at(M, xp);
    const Matrix gm = metric_at(M, xm);
    for (int a = 0; a < M.dim; ++a) {
      for (int b = 0; b < M.dim; ++b) {
        dg[a][b][k] = (gp.at(a, b) - gm.at(a, b)) / (2.0 * step);
      }
    }
  }
}

Christoffels christoffel_at(const ChartMetric& M, const double* p, double step) {
  Christoffels c;
  c.dim = M.dim;
  const Matrix g = metric_at(M, p);
  const Matrix ginv = invert(g);
  double dg[kMaxDim][kMaxDim][kMaxDim];
  metric_partials(M, p, step, dg);
  for (int k = 0; k < M.dim; ++k) {
    for (int i = 0; i < M.dim; ++i) {
      for (int j = i; j < M.dim; ++j) {
        double acc = 0.0;
        for (int l = 0; l < M.dim; ++l) {
          acc += ginv.at(k, l) * (dg[j][l][i] + dg[i][l][j] - dg[i][j][l]);
        }
        c.G[k][i][j] = 0.5 * acc;
        c.G[k][j][i] = c.G[k][i][j];
      }
    }
  }
  return c;
}

}  // namespace

double SymmetryResiduals::worst() const {
  return std::max({antisym_first, antisym_last, pair_symmetry, first_bianchi});
}

Matrix metric_at(const ChartMetric& M, const double* p) {
  Matrix g;
  g.dim = M.dim;
  double buf[kMaxDim * kMaxDim] = {};
  M.components(p, buf);
  for (int i = 0; i < M.dim; ++i) {
    for (int j = 0; j < M.dim; ++j) {
      g.at(i, j) = buf[i * M.dim + j];
    }
  }
  return g;
}

Matrix invert(const Matrix& g) {
  const int n = g.dim;
  double a[kMaxDim][2 * kMaxDim] = {};
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a[i][j] = g.at(i, j);
      scale = std::max(scale, std::fabs(a[i][j]));
    }
    a[i][n + i] = 1.0;
  }
  if (scale == 0.0) throw NumericError("oracle: zero metric matrix");
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    if (std::fabs(a[pivot][col]) < 1e-13 * scale) {
      throw NumericError("oracle: singular metric matrix");
    }
    if (pivot != col) std::swap_ranges(a[pivot], a[pivot] + 2 * n, a[col]);
    const double inv = 1.0 / a[col][col];
    for (int j = 0; j < 2 * n; ++j) a[col][j] *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double factor = a[r][col];
      if (factor == 0.0) continue;
      for (int j = 0; j < 2 * n; ++j) a[r][j] -= factor * a[col][j];
    }
  }
  Matrix out;
  out.dim = n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out.at(i, j) = a[i][n + j];
  }
  return out;
}

Christoffels christoffel_fd(const ChartMetric& M, const double* p, double step) {
  check_dim(M.dim);
  if (!(step > 0.0)) throw std::invalid_argument("oracle: step must be > 0");
  check_stencil(M, p, step);
  return christoffel_at(M, p, step);
}

Riemann riemann_fd(const ChartMetric& M, const double* p, double step) {
  check_dim(M.dim);
  if (!(step > 0.0)) throw std::invalid_argument("oracle: step must be > 0");
  // Nested differentiation reaches 2·step from p.
  check_stencil(M, p, 2.0 * step);

  const int n = M.dim;
  const Christoffels c0 = christoffel_at(M, p, step);

  // dG[k][i][j][m] = d Gamma^k_ij / d x_m
  static thread_local double dG[kMaxDim][kMaxDim][kMaxDim][kMaxDim];
  double xp[kMaxDim], xm[kMaxDim];
  for (int m = 0; m < n; ++m) {
    for (int i = 0; i < n; ++i) {
      xp[i] = p[i];
      xm[i] = p[i];
    }
    xp[m] += step;
    xm[m] -= step;
    const Christoffels cp = christoffel_at(M, xp, step);
    const Christoffels cm = christoffel_at(M, xm, step);
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          dG[k][i][j][m] = (cp.G[k][i][j] - cm.G[k][i][j]) / (2.0 * step);
        }
      }
    }
  }

  Riemann R;
  R.dim = n;
  // R^l_ijk = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          double acc = dG[l][j][k][i] - dG[l][i][k][j];
          for (int m = 0; m < n; ++m) {
            acc += c0.G[l][i][m] * c0.G[m][j][k] - c0.G[l][j][m] * c0.G[m][i][k];
          }
          R.up[l][i][j][k] = acc;
        }
      }
    }
  }
  const Matrix g = metric_at(M, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          double acc = 0.0;
          for (int m = 0; m < n; ++m) acc += g.at(l, m) * R.up[m][i][j][k];
          R.low[i][j][k][l] = acc;
        }
      }
    }
  }
  return R;
}

Matrix ricci_fd(const ChartMetric& M, const double* p, double step) {
  const Riemann R = riemann_fd(M, p, step);
  Matrix ric;
  ric.dim = M.dim;
  for (int j = 0; j < M.dim; ++j) {
    for (int k = 0; k < M.dim; ++k) {
      double acc = 0.0;
      for (int i = 0; i < M.dim; ++i) acc += R.up[i][i][j][k];
      ric.at(j, k) = acc;
    }
  }
  return ric;
}

Matrix ricci_fd_richardson(const ChartMetric& M, const double* p, double step) {
  const Matrix coarse = ricci_fd(M, p, step);
  const Matrix fine = ricci_fd(M, p, 0.5 * step);
  Matrix out;
  out.dim = M.dim;
  for (int i = 0; i < M.dim; ++i) {
    for (int j = 0; j < M.dim; ++j) {
      out.at(i, j) = (4.0 * fine.at(i, j) - coarse.at(i, j)) / 3.0;
    }
  }
  return out;
}

double sectional_fd(const ChartMetric& M, const double* p, int i, int j, double step) {
  const Riemann R = riemann_fd(M, p, step);
  const Matrix g = metric_at(M, p);
  const double denom = g.at(i, i) * g.at(j, j) - g.at(i, j) * g.at(i, j);
  if (std::fabs(denom) < 1e-14) throw NumericError("oracle: degenerate plane");
  return R.low[i][j][j][i] / denom;
}

SymmetryResiduals riemann_symmetry_residuals(const Riemann& R) {
  const int n = R.dim;
  double norm = 0.0;
  SymmetryResiduals res;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          const double r = R.low[i][j][k][l];
          norm = std::max(norm, std::fabs(r));
          res.antisym_first = std::max(res.antisym_first, std::fabs(r + R.low[j][i][k][l]));
          res.antisym_last = std::max(res.antisym_last, std::fabs(r + R.low[i][j][l][k]));
          res.pair_symmetry = std::max(res.pair_symmetry, std::fabs(r - R.low[k][l][i][j]));
          res.first_bianchi = std::max(
              res.first_bianchi,
              std::fabs(r + R.low[j][k][i][l] + R.low[k][i][j][l]));
        }
      }
    }
  }
  const double denom = std::max(norm, 1.0);
  res.antisym_first /= denom;
  res.antisym_last /= denom;
  res.pair_symmetry /= denom;
  res.first_bianchi /= denom;
  return res;
}

ChartMetric surface_chart(const RotationalSurface& S, double anchor_s) {
  const int n = S.dimension();
  if (n != 2 && n != 3) {
    throw std::invalid_argument(
        "oracle: full-chart finite differences run only for n in {2, 3}");
  }
  ChartMetric M;
  M.dim = n;
  M.lo.fill(-std::numeric_limits<double>::infinity());
  M.hi.fill(std::numeric_limits<double>::infinity());
  M.lo[0] = S.s_lo() - 1e-3;
  M.hi[0] = S.s_hi() + 1e-3;
  if (n == 3) {
    M.lo[1] = 0.05;             // polar angle must stay interior
    M.hi[1] = std::numbers::pi - 0.05;
  }
  AnchoredProfile prof = S.anchored(anchor_s);
  M.components = [prof, n](const double* x, double* g) {
    const double sg = prof.sigma(x[0]);
    const double sg2 = sg * sg;
    for (int i = 0; i < n * n; ++i) g[i] = 0.0;
    g[0] = 1.0;
    g[1 * n + 1] = sg2;
    if (n == 3) {
      const double sv = std::sin(x[1]);
      g[2 * n + 2] = sg2 * sv * sv;
    }
  };
  return M;
}

ChartMetric sphere_chart(int dim, double radius) {
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("oracle: sphere chart supports dim 2 or 3");
  }
  ChartMetric M;
  M.dim = dim;
  M.lo.fill(-std::numeric_limits<double>::infinity());
  M.hi.fill(std::numeric_limits<double>::infinity());
  for (int i = 0; i + 1 < dim; ++i) {
    M.lo[static_cast<std::size_t>(i)] = 0.05;
    M.hi[static_cast<std::size_t>(i)] = std::numbers::pi - 0.05;
  }
  const double r2 = radius * radius;
  M.components = [r2, dim](const double* x, double* g) {
    for (int i = 0; i < dim * dim; ++i) g[i] = 0.0;
    double sines = 1.0;
    for (int i = 0; i < dim; ++i) {
      g[i * dim + i] = r2 * sines * sines;
      sines *= std::sin(x[i]);
    }
  };
  return M;
}

ChartMetric ambient_chart(const Ambient& a) {
  ChartMetric M;
  M.dim = 3;
  M.lo.fill(-std::numeric_limits<double>::infinity());
  M.hi.fill(std::numeric_limits<double>::infinity());
  M.lo[0] = a.t_lo();
  M.hi[0] = a.t_hi();
  const int c = a.fiber_curvature();
  if (c == 1) {
    M.lo[1] = 0.05;
    M.hi[1] = std::numbers::pi - 0.05;
  } else if (c == -1) {
    M.lo[1] = 0.05;  // keep away from the hyperbolic-polar axis
  }
  const Expression f = a.warping();
  M.components = [f, c](const double* x, double* g) {
    const double fv = f.eval(x[0]);
    const double f2 = fv * fv;
    for (int i = 0; i < 9; ++i) g[i] = 0.0;
    g[0] = 1.0;
    g[4] = f2;
    double fiber = 1.0;
    if (c == 1) fiber = std::sin(x[1]);
    if (c == -1) fiber = std::sinh(x[1]);
    g[8] = f2 * fiber * fiber;
  };
  return M;
}

AxiTensor ricci_closed(const RotationalSurface& S, double s) {
  const ProfileSample p = S.at(s);
  const int n = S.dimension();
  const double ss = -(n - 1) * p.sigma_ss / p.sigma;
  const double vv = -p.sigma_ss / p.sigma +
                    (n - 2) * (1.0 - p.sigma_s * p.sigma_s) / (p.sigma * p.sigma);
  return {ss, vv, vv};
}

AxiTensor hessian_radial(const RotationalSurface& S, const Jet2& w, double s) {
  const ProfileSample p = S.at(s);
  const double mixed = (p.sigma_s / p.sigma) * w.d1;
  return {w.d2, mixed, mixed};
}

double laplacian_radial(const RotationalSurface& S, const Jet2& w, double s) {
  const AxiTensor h = hessian_radial(S, w, s);
  return h.ss + (S.dimension() - 1) * h.vv_k;
}

AxiTensor ricci_fd_axi(const RotationalSurface& S, double s, std::span<const double> v_ctx,
                       double step) {
  const int n = S.dimension();
  const ChartMetric chart = surface_chart(S, s);
  double p[kMaxDim] = {s, 0.0, 0.0, 0.0};
  if (n == 3) {
    const double v1 = v_ctx.empty() ? std::numbers::pi / 3.0 : v_ctx[0];
    p[1] = std::clamp(v1, 0.2, std::numbers::pi - 0.2);
    p[2] = v_ctx.size() > 1 ? v_ctx[1] : 0.4;
  } else if (!v_ctx.empty()) {
    p[1] = v_ctx[0];
  }
  const Matrix ric = ricci_fd_richardson(chart, p, step);
  const Matrix g = metric_at(chart, p);
  const double ss = ric.at(0, 0);
  const double vv1 = ric.at(1, 1) / g.at(1, 1);
  const double vv2 = n == 3 ? ric.at(2, 2) / g.at(2, 2) : vv1;
  return {ss, vv1, vv2};
}

double fiber_coordinate_laplacian(const RotationalSurface& S, int k, const double* p,
                                  double step) {
  const int n = S.dimension();
  if (k < 1 || k > n - 1) {
    throw std::invalid_argument("fiber_coordinate_laplacian: k must be in [1, n-1]");
  }
  const ChartMetric M = surface_chart(S, p[0]);
  const Christoffels c = christoffel_fd(M, p, step);
  const Matrix ginv = invert(metric_at(M, p));
  // Delta v_k = g^{ij} (d_i d_j v_k - Gamma^l_ij d_l v_k) = -g^{ij} Gamma^{k}_ij
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) acc -= ginv.at(i, j) * c.G[k][i][j];
  }
  return acc;
}

}  // namespace etl::oracle
