#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "etl/intrinsic.hpp"
#include "etl/scan.hpp"

namespace etl {

/// Conventions for the tension-field equation tau u = du(grad h) of a
/// radial map u = u(s):
///   full_laplacian ("A"): tau u is the Laplace-Beltrami operator,
///       u'' + (n-1)(sigma'/sigma) u' = u' sqrt(1-theta^2)
///   profile_ode    ("B"): the one-dimensional reduction
///       u'' = u' sqrt(1-theta^2)
/// Residual reports always carry both.
enum class TauConvention { full_laplacian, profile_ode };

enum class UMode { constant, base_radial, fiber_linear, isometric_identity };

/// The smooth map u of the structure. Modes: constant; base-radial u = u(s)
/// (a closed-form expression or grid samples produced by solve_u_base);
/// fiber-linear u = c4·v_k + c5; and the isometric identity map of a slice
/// (pullback metric equal to g, |grad u|^2 = n).
class UMap {
 public:
  static UMap make_constant(double value = 0.0);
  static UMap base_radial(Expression u);
  static UMap fiber_linear(double c4, double c5, int k);
  static UMap isometric_identity();

  UMode mode() const { return mode_; }
  double c4() const { return c4_; }
  double c5() const { return c5_; }
  int k() const { return k_; }

  /// Jet (u, u', u'') at s for the radial modes (constant or base-radial).
  Jet2 radial_jet(const RotationalSurface& S, double s) const;

  bool sampled() const { return !samples_.empty(); }

 private:
  friend UMap solve_u_base(const RotationalSurface&, double c2, double c3, TauConvention);

  UMode mode_ = UMode::constant;
  double value_ = 0.0;               // constant mode
  std::optional<Expression> expr_;   // base-radial, closed form
  double c4_ = 0.0, c5_ = 0.0;       // fiber-linear coefficients
  int k_ = 1;                        // fiber-linear coordinate index
  // base-radial built by solve_u_base: node values plus the u' recipe.
  std::vector<double> samples_;
  double c2_ = 0.0;
  TauConvention convention_ = TauConvention::profile_ode;
};

/// lambda or mu: either a closed-form expression in s or the "solve" sentinel
/// (values produced pointwise by solve_lambda_mu).
struct ScalarField {
  enum class Mode { expression, solver };
  Mode mode = Mode::solver;
  std::optional<Expression> expr;

  static ScalarField solver() { return {}; }
  static ScalarField expression(Expression e) {
    ScalarField f;
    f.mode = Mode::expression;
    f.expr = std::move(e);
    return f;
  }
};

/// A totally umbilical slice {t0} x M(c): the dedicated constant-height path
/// (grad h = 0, Hess h = 0, shape operator (f'/f)(t0)·Id with theta = -1).
struct SliceSurface {
  Ambient ambient;
  double t0;

  int dimension() const { return ambient.dimension(); }
  /// Constant curvature of the induced metric f(t0)^2 g_M.
  double slice_curvature() const;
  AxiTensor ricci() const;
  double mean_curvature() const;  // (log f)'(t0)
};

/// Gradient Einstein-type data (alpha, u, mu, lambda) attached to a
/// rotational hypersurface or to a slice.
class EinsteinTypeStructure {
 public:
  static EinsteinTypeStructure on_surface(std::shared_ptr<const RotationalSurface> surface,
                                          double alpha, UMap u, ScalarField mu,
                                          ScalarField lambda);
  static EinsteinTypeStructure on_slice(SliceSurface slice, double alpha, UMap u,
                                        ScalarField mu, ScalarField lambda);

  bool is_slice() const { return slice_.has_value(); }
  const RotationalSurface& surface() const { return *surface_; }
  std::shared_ptr<const RotationalSurface> surface_ptr() const { return surface_; }
  const SliceSurface& slice() const { return *slice_; }
  int n() const;
  double alpha() const { return alpha_; }
  const UMap& u() const { return u_; }
  const ScalarField& mu_field() const { return mu_; }
  const ScalarField& lambda_field() const { return lambda_; }

 private:
  double alpha_ = 1.0;
  UMap u_;
  ScalarField mu_, lambda_;
  std::shared_ptr<const RotationalSurface> surface_;
  std::optional<SliceSurface> slice_;
};

struct LambdaMu {
  double lambda = 0.0;
  double mu = 0.0;
};

/// du ⊗ du in the adapted orthonormal frame. `v_ctx` (the n-1 chart angles)
/// only matters for fiber-linear u with k >= 2; when empty, all sphere
/// factors are taken at the equator (sin = 1), which reproduces the
/// coordinate normalization du(phi_{v_k}) = c4.
AxiTensor du_outer(const EinsteinTypeStructure& st, double s,
                   std::span<const double> v_ctx = {});

double grad_u_norm2(const EinsteinTypeStructure& st, double s,
                    std::span<const double> v_ctx = {});

/// Ric - alpha·du ⊗ du in the adapted frame.
AxiTensor ric_u(const EinsteinTypeStructure& st, double s,
                std::span<const double> v_ctx = {});

/// Hessian of the height function from the immersion data:
/// (f'/f)(g - dh ⊗ dh) + theta·<A·,·>. Cross-checked against the intrinsic
/// radial Hessian.
AxiTensor hessian_height_extrinsic(const RotationalSurface& S, double s);

/// Solve the two equations that are linear in (lambda, mu) at s: the radial
/// component fixes mu·(1-theta^2) and a fiber component fixes lambda. For
/// n >= 3 the lambda-equation is the one without the du ⊗ du term
/// (perpendicular directions); for n = 2 the single fiber direction is used.
/// Throws NumericError when 1-theta^2 is too small (singular system) or on
/// a slice (where mu is unconstrained; lambda is still returned with mu = 0).
LambdaMu solve_lambda_mu(const EinsteinTypeStructure& st, double s);

/// lambda and mu at s honoring the expression/solver mode of each field.
LambdaMu resolve_lambda_mu(const EinsteinTypeStructure& st, double s);

struct TensorRow {
  double s = 0.0;
  AxiTensor components;
};

struct ValueRow {
  double s = 0.0;
  double value = 0.0;
};

struct EquationReport {
  std::string equation;                  // "eq0001", "prop1", "tau"
  std::optional<std::string> convention; // "A" or "B" for tau
  std::vector<TensorRow> tensor_rows;
  std::vector<ValueRow> value_rows;
  double max = 0.0;
  double mean = 0.0;
  bool gated = true;
  bool pass = true;
  // Fiber-linear u over-determines the system; the distinguished-direction
  // residual is reported here instead of being gated.
  std::optional<double> vv_k_consistency_max;
};

struct ResidualReport {
  double tolerance = 1e-6;
  std::vector<EquationReport> reports;
  bool pass = true;

  const EquationReport* find(const std::string& eq, const char* conv = nullptr) const;
};

/// Pointwise residual of the defining tensor equation
/// Ric^u + Hess h - mu dh ⊗ dh - lambda g (all terms in the adapted frame,
/// Hess h by intrinsic radial calculus).
AxiTensor residual_eq0001_point(const EinsteinTypeStructure& st, double s,
                                std::span<const double> v_ctx = {});

/// Pointwise residual of the equivalent extrinsic form
/// Ric^u - (lambda - f'/f) g - (mu + f'/f) dh ⊗ dh + theta <A·,·>.
AxiTensor residual_prop1_point(const EinsteinTypeStructure& st, double s,
                               std::span<const double> v_ctx = {});

struct TauResiduals {
  double conv_a = 0.0;  // |Delta u - du(grad h)|
  double conv_b = 0.0;  // |u'' - u' sqrt(1-theta^2)| (base modes)
};
TauResiduals tau_residuals(const EinsteinTypeStructure& st, double s);

/// Grid scan of the tensor equation plus both tau conventions.
ResidualReport residual_eq0001(const EinsteinTypeStructure& st, double tol,
                               scan::Exec exec = scan::Exec::parallel);
ResidualReport residual_prop1(const EinsteinTypeStructure& st, double tol,
                              scan::Exec exec = scan::Exec::parallel);

/// Integrate the radial map: u' = c2·e^zeta (profile_ode) or
/// u' = c2·e^zeta·sigma^{1-n} (full_laplacian), u(s_lo) = c3.
UMap solve_u_base(const RotationalSurface& S, double c2, double c3, TauConvention conv);

struct ScalarCurvatures {
  double intrinsic = 0.0;  // R - alpha |grad u|^2 from the closed-form Ricci
  double trace = 0.0;      // n(lambda - f'/f) + (mu + f'/f)|grad h|^2 - n theta H
  double extrinsic = 0.0;  // Gauss equation route through the ambient curvature
};
ScalarCurvatures u_scalar_curvature(const EinsteinTypeStructure& st, double s);

struct BochnerResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool applicable = false;  // residual small at s and mu constant on the grid
};
/// Weighted Bochner identity for |grad h|^2:
/// (1/2) Delta_h |grad h|^2 = |Hess h|^2 + alpha |tau u|^2
///   + (2 mu lambda n - lambda - 2 mu R^u)|grad h|^2
///   + mu(2mu - 1)|grad h|^4 - (n-2) <grad lambda, grad h>.
BochnerResult bochner_eval(const EinsteinTypeStructure& st, double s,
                           double structure_tol = 1e-6);

struct MarginRow {
  double s = 0.0;
  double mean_curv = 0.0;
  double phi_norm2 = 0.0;
  double log_f_prime = 0.0;
  double bound_low = 0.0;     // H >= 0 margin (= H)
  double bound_high = 0.0;    // (log f)'(h) - H
  double map_triviality = 0.0;  // lambda - [f'/f - (n-1)f''/f + |mu+f'/f| + H(nH+theta)]
  double discriminant = 0.0;  // (nH+theta)^2 + 4[f'/f - (n-1)f''/f - lambda]
  double rho = 0.0;           // shape-operator eigenvalue on grad h
  double rho_low = 0.0, rho_high = 0.0;  // admissible interval when disc > 0
  bool rho_outside = false;
  double ambient_margin = 0.0;  // (f'^2 - f f'') - c at zeta(s)
};
std::vector<MarginRow> hypothesis_margins(const EinsteinTypeStructure& st,
                                          scan::Exec exec = scan::Exec::parallel);

const char* tau_convention_name(TauConvention c);

}  // namespace etl
