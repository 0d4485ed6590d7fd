#include "etl/einstein.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "etl/gauss.hpp"

namespace etl {

namespace {

double hermite(double t, double h, double y0, double d0, double y1, double d1) {
  const double u = t / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * h * d0 +
         (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * h * d1;
}

// Product of the sphere chart factors in front of d v_k: 1 for k = 1,
// sin v_1 ... sin v_{k-1} otherwise. Empty context means the equator.
double sphere_factor(int k, std::span<const double> v_ctx) {
  double factor = 1.0;
  for (int j = 0; j + 1 < k; ++j) {
    const double vj = j < static_cast<int>(v_ctx.size())
                          ? v_ctx[static_cast<std::size_t>(j)]
                          : std::numbers::pi / 2.0;
    factor *= std::sin(vj);
  }
  return factor;
}

Jet2 height_jet(const ProfileSample& p) { return {p.h, p.h_s, p.h_ss}; }

}  // namespace

const char* tau_convention_name(TauConvention c) {
  return c == TauConvention::full_laplacian ? "A" : "B";
}

// ---------------------------------------------------------------------------
// UMap

UMap UMap::make_constant(double value) {
  UMap u;
  u.mode_ = UMode::constant;
  u.value_ = value;
  return u;
}

UMap UMap::base_radial(Expression e) {
  UMap u;
  u.mode_ = UMode::base_radial;
  u.expr_ = std::move(e);
  return u;
}

UMap UMap::fiber_linear(double c4, double c5, int k) {
  if (k < 1) throw std::invalid_argument("fiber-linear u: k must be >= 1");
  UMap u;
  u.mode_ = UMode::fiber_linear;
  u.c4_ = c4;
  u.c5_ = c5;
  u.k_ = k;
  return u;
}

UMap UMap::isometric_identity() {
  UMap u;
  u.mode_ = UMode::isometric_identity;
  return u;
}

Jet2 UMap::radial_jet(const RotationalSurface& S, double s) const {
  switch (mode_) {
    case UMode::constant:
      return Jet2::constant(value_);
    case UMode::base_radial:
      break;
    default:
      throw std::invalid_argument("radial_jet: u is not a radial map");
  }
  if (expr_) return expr_->eval_jet2(s);

  // Sampled map from solve_u_base: u' and u'' come from the defining
  // formula; the value interpolates between grid nodes.
  const ProfileSample p = S.at(s);
  const int n = S.dimension();
  auto du_at = [&](const ProfileSample& q) {
    double d = c2_ * std::exp(q.zeta);
    if (convention_ == TauConvention::full_laplacian) {
      d *= std::pow(q.sigma, 1.0 - n);
    }
    return d;
  };
  const double du = du_at(p);
  double ddu = du * p.zeta_s;
  if (convention_ == TauConvention::full_laplacian) {
    ddu = du * (p.zeta_s - (n - 1) * p.sigma_s / p.sigma);
  }

  const double lo = S.s_lo();
  const double grid_h = (S.s_hi() - lo) / (S.grid_size() - 1);
  const double pos = (s - lo) / grid_h;
  int i = std::clamp(static_cast<int>(std::floor(pos)), 0, S.grid_size() - 2);
  const auto iu = static_cast<std::size_t>(i);
  double value;
  if (s == S.node(i)) {
    value = samples_[iu];
  } else if (s == S.node(i + 1)) {
    value = samples_[iu + 1];
  } else {
    const double d0 = du_at(S.at(S.node(i)));
    const double d1 = du_at(S.at(S.node(i + 1)));
    value = hermite(s - S.node(i), grid_h, samples_[iu], d0, samples_[iu + 1], d1);
  }
  return {value, du, ddu};
}

UMap solve_u_base(const RotationalSurface& S, double c2, double c3, TauConvention conv) {
  if (c2 == 0.0) {
    // u' == 0: the map degenerates to a constant.
    return UMap::make_constant(c3);
  }
  const int n = S.dimension();
  auto du = [&](double s) {
    const ProfileSample p = S.at(s);
    double d = c2 * std::exp(p.zeta);
    if (conv == TauConvention::full_laplacian) {
      if (!(p.sigma > 0.0)) throw NumericError("solve_u_base: sigma vanished");
      d *= std::pow(p.sigma, 1.0 - n);
    }
    return d;
  };

  UMap u;
  u.mode_ = UMode::base_radial;
  u.c2_ = c2;
  u.convention_ = conv;
  u.samples_.resize(static_cast<std::size_t>(S.grid_size()));
  u.samples_[0] = c3;
  for (int i = 1; i < S.grid_size(); ++i) {
    const double a = S.node(i - 1);
    const double b = S.node(i);
    u.samples_[static_cast<std::size_t>(i)] =
        u.samples_[static_cast<std::size_t>(i - 1)] +
        quadrature::gauss_panels(du, a, b, (b - a) / 2.0);
  }
  return u;
}

// ---------------------------------------------------------------------------
// SliceSurface

double SliceSurface::slice_curvature() const {
  const LogDerivatives fd = ambient.log_derivatives(t0);
  return ambient.fiber_curvature() / (fd.f * fd.f);
}

AxiTensor SliceSurface::ricci() const {
  const double c = slice_curvature();
  const double r = (dimension() - 1) * c;
  return {r, r, r};
}

double SliceSurface::mean_curvature() const {
  return ambient.log_derivatives(t0).dlog;
}

// ---------------------------------------------------------------------------
// EinsteinTypeStructure

EinsteinTypeStructure EinsteinTypeStructure::on_surface(
    std::shared_ptr<const RotationalSurface> surface, double alpha, UMap u,
    ScalarField mu, ScalarField lambda) {
  if (!(alpha > 0.0)) throw std::invalid_argument("structure: alpha must be > 0");
  if (!surface) throw std::invalid_argument("structure: missing surface");
  if (u.mode() == UMode::isometric_identity) {
    throw std::invalid_argument("structure: the isometric identity map lives on slices");
  }
  if (u.mode() == UMode::fiber_linear && u.k() > surface->dimension() - 1) {
    throw std::invalid_argument("structure: fiber-linear k must be <= n-1");
  }
  EinsteinTypeStructure st;
  st.alpha_ = alpha;
  st.u_ = std::move(u);
  st.mu_ = std::move(mu);
  st.lambda_ = std::move(lambda);
  st.surface_ = std::move(surface);
  return st;
}

EinsteinTypeStructure EinsteinTypeStructure::on_slice(SliceSurface slice, double alpha,
                                                      UMap u, ScalarField mu,
                                                      ScalarField lambda) {
  if (!(alpha > 0.0)) throw std::invalid_argument("structure: alpha must be > 0");
  if (u.mode() != UMode::constant && u.mode() != UMode::isometric_identity) {
    throw std::invalid_argument("structure: slices support constant or identity u only");
  }
  if (!slice.ambient.contains(slice.t0)) {
    throw DomainError("structure: slice level t0 outside the ambient interval");
  }
  EinsteinTypeStructure st;
  st.alpha_ = alpha;
  st.u_ = std::move(u);
  st.mu_ = std::move(mu);
  st.lambda_ = std::move(lambda);
  st.slice_ = std::move(slice);
  return st;
}

int EinsteinTypeStructure::n() const {
  return is_slice() ? slice_->dimension() : surface_->dimension();
}

// ---------------------------------------------------------------------------
// pointwise evaluators

AxiTensor du_outer(const EinsteinTypeStructure& st, double s, std::span<const double> v_ctx) {
  const int n = st.n();
  switch (st.u().mode()) {
    case UMode::constant:
      return {0.0, 0.0, 0.0};
    case UMode::base_radial: {
      const Jet2 u = st.u().radial_jet(st.surface(), s);
      return {u.d1 * u.d1, 0.0, 0.0};
    }
    case UMode::fiber_linear: {
      const ProfileSample p = st.surface().at(s);
      const double factor = sphere_factor(st.u().k(), v_ctx);
      const double c4 = st.u().c4();
      const double vv = (c4 * c4) / (p.sigma * p.sigma * factor * factor);
      // n = 2 has a single fiber direction; keep both slots in sync there.
      return {0.0, vv, n == 2 ? vv : 0.0};
    }
    case UMode::isometric_identity:
      // Pullback of the target metric equals g.
      return {1.0, 1.0, 1.0};
  }
  return {};
}

double grad_u_norm2(const EinsteinTypeStructure& st, double s, std::span<const double> v_ctx) {
  switch (st.u().mode()) {
    case UMode::constant: return 0.0;
    case UMode::base_radial: {
      const Jet2 u = st.u().radial_jet(st.surface(), s);
      return u.d1 * u.d1;
    }
    case UMode::fiber_linear: {
      const ProfileSample p = st.surface().at(s);
      const double factor = sphere_factor(st.u().k(), v_ctx);
      const double c4 = st.u().c4();
      return (c4 * c4) / (p.sigma * p.sigma * factor * factor);
    }
    case UMode::isometric_identity: return static_cast<double>(st.n());
  }
  return 0.0;
}

AxiTensor ric_u(const EinsteinTypeStructure& st, double s, std::span<const double> v_ctx) {
  const AxiTensor ric = st.is_slice() ? st.slice().ricci() : oracle::ricci_closed(st.surface(), s);
  return ric - st.alpha() * du_outer(st, s, v_ctx);
}

AxiTensor hessian_height_extrinsic(const RotationalSurface& S, double s) {
  const ProfileSample p = S.at(s);
  const AxiTensor A = S.shape_operator(s);
  const double lf = p.f_t / p.f;
  const double th = p.theta;
  // (f'/f)(g - dh (x) dh) + theta <A·,·>; dh (x) dh = (1 - theta^2) e0 (x) e0.
  const double ss = lf * (1.0 - (1.0 - th * th)) + th * A.ss;
  const double vv = lf + th * A.vv_k;
  return {ss, vv, vv};
}

namespace {

// Ric^u + Hess h in the adapted frame: the part of the defining equation that
// does not involve lambda or mu.
AxiTensor structure_lhs_core(const EinsteinTypeStructure& st, double s,
                             std::span<const double> v_ctx) {
  if (st.is_slice()) return ric_u(st, s, v_ctx);  // Hess h = 0 on a slice
  const ProfileSample p = st.surface().at(s);
  return ric_u(st, s, v_ctx) + oracle::hessian_radial(st.surface(), height_jet(p), s);
}

}  // namespace

LambdaMu solve_lambda_mu(const EinsteinTypeStructure& st, double s) {
  if (st.is_slice()) {
    // grad h = 0 leaves mu unconstrained; every component pins lambda.
    const AxiTensor core = structure_lhs_core(st, s, {});
    return {core.vv_perp, 0.0};
  }
  const ProfileSample p = st.surface().at(s);
  const double w = 1.0 - p.theta * p.theta;  // the system determinant up to sign
  if (!(w > 1e-12)) {
    throw NumericError("solve_lambda_mu: singular system (theta^2 -> 1) at s = " +
                       std::to_string(s));
  }
  const AxiTensor core = structure_lhs_core(st, s, {});
  const double lambda = core.vv_perp;
  const double mu = (core.ss - lambda) / w;
  return {lambda, mu};
}

LambdaMu resolve_lambda_mu(const EinsteinTypeStructure& st, double s) {
  const bool lam_solver = st.lambda_field().mode == ScalarField::Mode::solver;
  const bool mu_solver = st.mu_field().mode == ScalarField::Mode::solver;
  LambdaMu out;
  if (lam_solver && mu_solver) return solve_lambda_mu(st, s);
  if (!lam_solver) out.lambda = st.lambda_field().expr->eval(s);
  if (!mu_solver) out.mu = st.mu_field().expr->eval(s);
  if (lam_solver || mu_solver) {
    const AxiTensor core = structure_lhs_core(st, s, {});
    if (lam_solver) {
      out.lambda = core.vv_perp;
    }
    if (mu_solver) {
      if (st.is_slice()) {
        out.mu = 0.0;
      } else {
        const ProfileSample p = st.surface().at(s);
        const double w = 1.0 - p.theta * p.theta;
        if (!(w > 1e-12)) {
          throw NumericError("resolve_lambda_mu: singular system at s = " + std::to_string(s));
        }
        out.mu = (core.ss - out.lambda) / w;
      }
    }
  }
  return out;
}

AxiTensor residual_eq0001_point(const EinsteinTypeStructure& st, double s,
                                std::span<const double> v_ctx) {
  const LambdaMu lm = resolve_lambda_mu(st, s);
  const AxiTensor core = structure_lhs_core(st, s, v_ctx);
  double w = 0.0;  // |grad h|^2
  if (!st.is_slice()) {
    const ProfileSample p = st.surface().at(s);
    w = 1.0 - p.theta * p.theta;
  }
  return {core.ss - lm.mu * w - lm.lambda, core.vv_k - lm.lambda,
          core.vv_perp - lm.lambda};
}

AxiTensor residual_prop1_point(const EinsteinTypeStructure& st, double s,
                               std::span<const double> v_ctx) {
  const LambdaMu lm = resolve_lambda_mu(st, s);
  if (st.is_slice()) {
    // theta = -1, A = (log f)'·Id, dh (x) dh = 0:
    // Ric^u - (lambda - lf) g + theta·A reduces to Ric^u - lambda g.
    const SliceSurface& sl = st.slice();
    const double lf = sl.ambient.log_derivatives(sl.t0).dlog;
    const AxiTensor ru = ric_u(st, s, v_ctx);
    const double comp = ru.ss - (lm.lambda - lf) + (-1.0) * lf;
    return {comp, comp, comp};
  }
  const ProfileSample p = st.surface().at(s);
  const AxiTensor A = st.surface().shape_operator(s);
  const AxiTensor ru = ric_u(st, s, v_ctx);
  const double lf = p.f_t / p.f;
  const double w = 1.0 - p.theta * p.theta;
  const double ss = ru.ss - (lm.lambda - lf) - (lm.mu + lf) * w + p.theta * A.ss;
  const double vvk = ru.vv_k - (lm.lambda - lf) + p.theta * A.vv_k;
  const double vvp = ru.vv_perp - (lm.lambda - lf) + p.theta * A.vv_perp;
  return {ss, vvk, vvp};
}

TauResiduals tau_residuals(const EinsteinTypeStructure& st, double s) {
  TauResiduals r;
  switch (st.u().mode()) {
    case UMode::constant:
    case UMode::isometric_identity:
      // tau vanishes and du(grad h) vanishes (grad h = 0 on slices; du = 0
      // for constants).
      return r;
    case UMode::base_radial: {
      const ProfileSample p = st.surface().at(s);
      const Jet2 u = st.u().radial_jet(st.surface(), s);
      const int n = st.n();
      const double laplace = u.d2 + (n - 1) * (p.sigma_s / p.sigma) * u.d1;
      const double rhs = u.d1 * p.h_s;
      r.conv_a = std::fabs(laplace - rhs);
      r.conv_b = std::fabs(u.d2 - rhs);
      return r;
    }
    case UMode::fiber_linear: {
      const int n = st.n();
      double point[oracle::kMaxDim] = {s, 0.0, 0.0, 0.0};
      if (n >= 3) point[1] = std::numbers::pi / 2.0;
      const double lap =
          oracle::fiber_coordinate_laplacian(st.surface(), st.u().k(), point);
      const double res = std::fabs(st.u().c4() * lap);
      r.conv_a = res;
      r.conv_b = res;
      return r;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// grid reports

namespace {

std::vector<double> report_points(const EinsteinTypeStructure& st) {
  if (st.is_slice()) return {st.slice().t0};
  std::vector<double> pts(static_cast<std::size_t>(st.surface().grid_size()));
  for (int i = 0; i < st.surface().grid_size(); ++i) {
    pts[static_cast<std::size_t>(i)] = st.surface().node(i);
  }
  return pts;
}

void finalize_tensor_report(EquationReport& rep, const EinsteinTypeStructure& st,
                            double tol) {
  const bool fiber = st.u().mode() == UMode::fiber_linear;
  const bool gate_vvk = !fiber || st.n() == 2;
  double maxv = 0.0, sum = 0.0, vvk_max = 0.0;
  std::size_t count = 0;
  for (const TensorRow& row : rep.tensor_rows) {
    const double a_ss = std::fabs(row.components.ss);
    const double a_vk = std::fabs(row.components.vv_k);
    const double a_vp = std::fabs(row.components.vv_perp);
    maxv = std::max({maxv, a_ss, a_vp});
    sum += a_ss + a_vp;
    count += 2;
    if (gate_vvk) {
      maxv = std::max(maxv, a_vk);
      sum += a_vk;
      ++count;
    } else {
      vvk_max = std::max(vvk_max, a_vk);
    }
  }
  rep.max = maxv;
  rep.mean = count ? sum / static_cast<double>(count) : 0.0;
  rep.gated = true;
  rep.pass = maxv < tol;
  if (!gate_vvk) rep.vv_k_consistency_max = vvk_max;
}

void finalize_value_report(EquationReport& rep, bool gated, double threshold) {
  double maxv = 0.0, sum = 0.0;
  for (const ValueRow& row : rep.value_rows) {
    maxv = std::max(maxv, std::fabs(row.value));
    sum += std::fabs(row.value);
  }
  rep.max = maxv;
  rep.mean = rep.value_rows.empty() ? 0.0 : sum / static_cast<double>(rep.value_rows.size());
  rep.gated = gated;
  rep.pass = maxv < threshold;  // informational even when not gated
}

ResidualReport tensor_report(
    const EinsteinTypeStructure& st, const char* equation, double tol, scan::Exec exec,
    AxiTensor (*point_fn)(const EinsteinTypeStructure&, double, std::span<const double>)) {
  ResidualReport report;
  report.tolerance = tol;

  const std::vector<double> pts = report_points(st);
  EquationReport tensor;
  tensor.equation = equation;
  tensor.tensor_rows.resize(pts.size());

  EquationReport tau_a, tau_b;
  tau_a.equation = "tau";
  tau_a.convention = "A";
  tau_a.value_rows.resize(pts.size());
  tau_b.equation = "tau";
  tau_b.convention = "B";
  tau_b.value_rows.resize(pts.size());

  scan::for_each(pts.size(), exec, [&](std::size_t i) {
    const double s = pts[i];
    const AxiTensor r = point_fn(st, s, {});
    // Report rows carry magnitudes; the pointwise evaluators keep the sign.
    tensor.tensor_rows[i] = {s, {std::fabs(r.ss), std::fabs(r.vv_k), std::fabs(r.vv_perp)}};
    const TauResiduals tr = tau_residuals(st, s);
    tau_a.value_rows[i] = {s, tr.conv_a};
    tau_b.value_rows[i] = {s, tr.conv_b};
  });

  finalize_tensor_report(tensor, st, tol);

  // Gating: the profile-ODE convention gates radial maps; the documented
  // Laplacian convention gap makes A report-only by default. Fiber maps have
  // one finite-difference tau value (identical under both labels), gated at
  // the looser of tol and 1e-5.
  const bool fiber = st.u().mode() == UMode::fiber_linear;
  const double tau_threshold = fiber ? std::max(tol, 1e-5) : tol;
  finalize_value_report(tau_a, fiber, tau_threshold);
  finalize_value_report(tau_b, true, tau_threshold);

  report.reports.push_back(std::move(tensor));
  report.reports.push_back(std::move(tau_a));
  report.reports.push_back(std::move(tau_b));
  report.pass = true;
  for (const EquationReport& r : report.reports) {
    if (r.gated && !r.pass) report.pass = false;
  }
  return report;
}

}  // namespace

const EquationReport* ResidualReport::find(const std::string& eq, const char* conv) const {
  for (const EquationReport& r : reports) {
    if (r.equation != eq) continue;
    if (conv && (!r.convention || *r.convention != conv)) continue;
    return &r;
  }
  return nullptr;
}

ResidualReport residual_eq0001(const EinsteinTypeStructure& st, double tol, scan::Exec exec) {
  return tensor_report(st, "eq0001", tol, exec, &residual_eq0001_point);
}

ResidualReport residual_prop1(const EinsteinTypeStructure& st, double tol, scan::Exec exec) {
  return tensor_report(st, "prop1", tol, exec, &residual_prop1_point);
}

// ---------------------------------------------------------------------------
// scalar curvature and Bochner identity

ScalarCurvatures u_scalar_curvature(const EinsteinTypeStructure& st, double s) {
  const int n = st.n();
  const double alpha = st.alpha();
  const LambdaMu lm = resolve_lambda_mu(st, s);
  ScalarCurvatures out;

  if (st.is_slice()) {
    const SliceSurface& sl = st.slice();
    const LogDerivatives fd = sl.ambient.log_derivatives(sl.t0);
    const double gradu2 = grad_u_norm2(st, s);
    out.intrinsic = sl.ricci().trace(n) - alpha * gradu2;
    const double H = sl.mean_curvature();
    const double theta = -1.0;
    out.trace = n * (lm.lambda - fd.dlog) - n * theta * H;
    const double c = sl.ambient.fiber_curvature();
    const double A2 = n * fd.dlog * fd.dlog;
    out.extrinsic = c * n * (n - 1) / (fd.f * fd.f) -
                    n * (n - 1) * fd.dlog * fd.dlog + n * n * H * H - A2 -
                    alpha * gradu2;
    return out;
  }

  const RotationalSurface& S = st.surface();
  const ProfileSample p = S.at(s);
  const double gradu2 = grad_u_norm2(st, s);
  const double gradh2 = 1.0 - p.theta * p.theta;
  out.intrinsic = oracle::ricci_closed(S, s).trace(n) - alpha * gradu2;

  const double lf = p.f_t / p.f;
  const double H = S.mean_curvature(s);
  out.trace = n * (lm.lambda - lf) + (lm.mu + lf) * gradh2 - n * p.theta * H;

  // Gauss-equation route through the ambient warped-product curvature.
  const double c = S.ambient().fiber_curvature();
  const double llog2 = (p.f_tt / p.f) - lf * lf;  // (log f)''
  const AxiTensor A = S.shape_operator(s);
  const double A2 = A.ss * A.ss + (n - 1) * A.vv_k * A.vv_k;
  out.extrinsic = c * (n - 1) * (n - 2.0 * gradh2) / (p.f * p.f) +
                  n * lf * lf * (gradh2 - (n - 1)) - (n - 2) * llog2 * gradh2 -
                  n * (p.f_tt / p.f) * gradh2 + n * n * H * H - A2 - alpha * gradu2;
  return out;
}

namespace {

// |tau u|^2 evaluated through the structure equation tau u = du(grad h).
double tau_norm2(const EinsteinTypeStructure& st, double s) {
  if (st.u().mode() != UMode::base_radial) return 0.0;
  const ProfileSample p = st.surface().at(s);
  const Jet2 u = st.u().radial_jet(st.surface(), s);
  const double t = u.d1 * p.h_s;
  return t * t;
}

double lambda_derivative(const EinsteinTypeStructure& st, double s) {
  if (st.lambda_field().mode == ScalarField::Mode::expression) {
    return st.lambda_field().expr->eval_jet2(s).d1;
  }
  if (st.is_slice()) return 0.0;
  const RotationalSurface& S = st.surface();
  const double span = S.s_hi() - S.s_lo();
  double delta = 1e-5 * std::max(1.0, span);
  delta = std::min({delta, s - S.s_lo(), S.s_hi() - s});
  if (!(delta > 0.0)) return 0.0;
  const double hi = resolve_lambda_mu(st, s + delta).lambda;
  const double lo = resolve_lambda_mu(st, s - delta).lambda;
  return (hi - lo) / (2.0 * delta);
}

bool mu_constant_on_grid(const EinsteinTypeStructure& st, double tol) {
  if (st.is_slice()) return true;
  const RotationalSurface& S = st.surface();
  double mu0 = 0.0;
  bool first = true;
  for (int i = 0; i < S.grid_size(); ++i) {
    const double mu = resolve_lambda_mu(st, S.node(i)).mu;
    if (first) {
      mu0 = mu;
      first = false;
    } else if (std::fabs(mu - mu0) > tol) {
      return false;
    }
  }
  return true;
}

}  // namespace

BochnerResult bochner_eval(const EinsteinTypeStructure& st, double s, double structure_tol) {
  BochnerResult out;
  const int n = st.n();
  const LambdaMu lm = resolve_lambda_mu(st, s);

  if (st.is_slice()) {
    out.lhs = 0.0;
    out.rhs = 0.0;  // every term carries |grad h| or Hess h, all zero
    out.applicable = residual_eq0001_point(st, s).max_abs() < structure_tol;
    return out;
  }

  const RotationalSurface& S = st.surface();
  const ProfileSample p = S.at(s);
  const Jet2 w{1.0 - p.theta * p.theta, -2.0 * p.theta * p.theta_s,
               -2.0 * (p.theta_s * p.theta_s + p.theta * p.theta_ss)};
  const double laplace_w = oracle::laplacian_radial(S, w, s);
  out.lhs = 0.5 * (laplace_w - p.h_s * w.d1);

  const AxiTensor hess = oracle::hessian_radial(S, height_jet(p), s);
  const double hess2 = hess.ss * hess.ss + (n - 1) * hess.vv_k * hess.vv_k;
  const double ru = u_scalar_curvature(st, s).intrinsic;
  const double dlam = lambda_derivative(st, s);
  out.rhs = hess2 + st.alpha() * tau_norm2(st, s) +
            (2.0 * lm.mu * lm.lambda * n - lm.lambda - 2.0 * lm.mu * ru) * w.v +
            lm.mu * (2.0 * lm.mu - 1.0) * w.v * w.v - (n - 2) * dlam * p.h_s;

  out.applicable = residual_eq0001_point(st, s).max_abs() < structure_tol &&
                   mu_constant_on_grid(st, structure_tol);
  return out;
}

// ---------------------------------------------------------------------------
// hypothesis margins

std::vector<MarginRow> hypothesis_margins(const EinsteinTypeStructure& st, scan::Exec exec) {
  const std::vector<double> pts = report_points(st);
  std::vector<MarginRow> rows(pts.size());

  scan::for_each(pts.size(), exec, [&](std::size_t i) {
    const double s = pts[i];
    MarginRow& row = rows[i];
    row.s = s;
    const LambdaMu lm = resolve_lambda_mu(st, s);

    double H, theta, lf, ddf_over_f, rho, phi2, ambient_margin;
    if (st.is_slice()) {
      const SliceSurface& sl = st.slice();
      const LogDerivatives fd = sl.ambient.log_derivatives(sl.t0);
      H = sl.mean_curvature();
      theta = -1.0;
      lf = fd.dlog;
      ddf_over_f = fd.ddf / fd.f;
      rho = fd.dlog;  // totally umbilical
      phi2 = 0.0;
      ambient_margin = sl.ambient.curvature_condition_margin(sl.t0);
    } else {
      const RotationalSurface& S = st.surface();
      const ProfileSample p = S.at(s);
      const AxiTensor A = S.shape_operator(s);
      H = S.mean_curvature(s);
      theta = p.theta;
      lf = p.f_t / p.f;
      ddf_over_f = p.f_tt / p.f;
      rho = A.ss;  // grad h is radial, so its eigenvalue is the ss one
      phi2 = S.traceless_phi_norm2(s);
      ambient_margin = S.ambient().curvature_condition_margin(p.zeta);
    }

    const int n = st.n();
    row.mean_curv = H;
    row.phi_norm2 = phi2;
    row.log_f_prime = lf;
    row.bound_low = H;
    row.bound_high = lf - H;
    row.map_triviality =
        lm.lambda - (lf - (n - 1) * ddf_over_f + std::fabs(lm.mu + lf) + H * (n * H + theta));
    row.discriminant =
        (n * H + theta) * (n * H + theta) + 4.0 * (lf - (n - 1) * ddf_over_f - lm.lambda);
    row.rho = rho;
    if (row.discriminant > 0.0) {
      const double root = std::sqrt(row.discriminant);
      row.rho_low = 0.5 * (n * H + theta - root);
      row.rho_high = 0.5 * (n * H + theta + root);
      row.rho_outside = rho <= row.rho_low || rho >= row.rho_high;
    } else {
      row.rho_low = row.rho_high = 0.5 * (n * H + theta);
      row.rho_outside = false;
    }
    row.ambient_margin = ambient_margin;
  });
  return rows;
}

}  // namespace etl
