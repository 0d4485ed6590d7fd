#include "etl/fixtures.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <stdexcept>

namespace etl::fixtures {

namespace {

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Expression expr_s(const std::string& text) { return Expression::parse(text, "s"); }

void check_keys(const Params& p, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : p.values) {
    (void)value;
    if (!allowed.count(key)) {
      throw std::invalid_argument("fixture: unknown parameter '" + key + "'");
    }
  }
}

std::shared_ptr<const RotationalSurface> build_surface(Expression theta, double s_lo,
                                                       double s_hi, Ambient ambient,
                                                       double zeta0, double beta0, int m) {
  AngleProfile profile{std::move(theta), s_lo, s_hi};
  return std::make_shared<RotationalSurface>(RotationalSurface::build(
      std::move(ambient), std::move(profile), zeta0, beta0, m));
}

Fixture make_cylinder(const Params& p) {
  check_keys(p, {"n", "alpha", "m", "s_lo", "s_hi", "beta0"});
  const int n = static_cast<int>(p.get("n", 3));
  const double alpha = p.get("alpha", 1.0);
  const double s_lo = p.get("s_lo", 0.0);
  const double s_hi = p.get("s_hi", 3.0);
  const int m = static_cast<int>(p.get("m", 120));
  const double beta0 = p.get("beta0", 1.0);

  Ambient ambient(Expression::parse("1", "t"), -50.0, 50.0, 0, n);
  auto surf = build_surface(expr_s("0"), s_lo, s_hi, std::move(ambient), 0.0, beta0, m);

  Fixture f;
  f.name = "cylinder";
  f.structure = EinsteinTypeStructure::on_surface(surf, alpha, UMap::make_constant(),
                                                  ScalarField::solver(), ScalarField::solver());
  f.ref_lambda = expr_s(fmt_g(static_cast<double>(n - 2)));
  f.ref_mu = expr_s(fmt_g(-static_cast<double>(n - 2)));
  f.notes.push_back("flat cylinder anchor: lambda = n-2, mu = -(n-2), u constant");
  return f;
}

Fixture make_cone(const Params& p) {
  check_keys(p, {"n", "alpha", "theta0", "m", "s_lo", "s_hi"});
  const int n = static_cast<int>(p.get("n", 3));
  const double alpha = p.get("alpha", 1.0);
  const double theta0 = p.get("theta0", 0.6);
  const double s_lo = p.get("s_lo", 0.5);
  const double s_hi = p.get("s_hi", 4.5);
  const int m = static_cast<int>(p.get("m", 80));
  if (!(std::fabs(theta0) < 1.0)) throw std::invalid_argument("cone: |theta0| must be < 1");
  if (!(theta0 * s_lo > 0.0)) throw std::invalid_argument("cone: sigma must start positive");

  const double q = std::sqrt(1.0 - theta0 * theta0);
  Ambient ambient(Expression::parse("1", "t"), -50.0, 50.0, 0, n);
  auto surf = build_surface(expr_s(fmt_g(theta0)), s_lo, s_hi, std::move(ambient),
                            q * s_lo, theta0 * s_lo, m);

  Fixture f;
  f.name = "cone";
  f.structure = EinsteinTypeStructure::on_surface(surf, alpha, UMap::make_constant(),
                                                  ScalarField::solver(), ScalarField::solver());
  // sigma = theta0*s with one vanishing principal curvature.
  f.ref_lambda = expr_s("(" + fmt_g(theta0 * q) + ")/(" + fmt_g(theta0) + "*s) + (" +
                        fmt_g((n - 2) * (1.0 - theta0 * theta0)) + ")/((" + fmt_g(theta0) +
                        "*s)^2)");
  f.ref_mu = expr_s("-((" + fmt_g(theta0 * q) + ")/(" + fmt_g(theta0) + "*s) + (" +
                    fmt_g((n - 2) * (1.0 - theta0 * theta0)) + ")/((" + fmt_g(theta0) +
                    "*s)^2))/(" + fmt_g(1.0 - theta0 * theta0) + ")");
  f.ref_h = expr_s(fmt_g(q) + "*s");
  return f;
}

Fixture make_constant_angle(const Params& p) {
  check_keys(p, {"n", "alpha", "theta0", "c1", "c3", "c4", "cu", "c2u", "m", "s_lo", "s_hi"});
  const int n = static_cast<int>(p.get("n", 3));
  const double alpha = p.get("alpha", 1.0);
  const double theta0 = p.get("theta0", 0.6);
  const double c1 = p.get("c1", 1.0);
  const double c3 = p.get("c3", 0.0);
  // The published sigma uses c1 while lambda/mu use c4; the solver comparison
  // settles the intent, so c4 simply defaults to c1.
  const double c4 = p.get("c4", c1);
  const double cu = p.get("cu", 1.0);
  const double c2u = p.get("c2u", 0.0);
  const double s_lo = p.get("s_lo", 0.5);
  const double s_hi = p.get("s_hi", 5.0);
  const int m = static_cast<int>(p.get("m", 90));
  if (!(std::fabs(theta0) < 1.0)) {
    throw std::invalid_argument("constant_angle: |theta0| must be < 1");
  }
  if (!(theta0 * s_lo + c1 > 0.0)) {
    throw std::invalid_argument("constant_angle: sigma must start positive");
  }

  const double q = std::sqrt(1.0 - theta0 * theta0);
  const double w = 1.0 - theta0 * theta0;
  Ambient ambient(Expression::parse("1", "t"), -50.0, 50.0, 0, n);
  auto surf = build_surface(expr_s(fmt_g(theta0)), s_lo, s_hi, std::move(ambient),
                            q * s_lo + c3, theta0 * s_lo + c1, m);

  const std::string sigma = "(" + fmt_g(theta0) + "*s + " + fmt_g(c4) + ")";
  const std::string u_text =
      fmt_g(cu) + "*exp(" + fmt_g(q) + "*s)/" + fmt_g(q) + " + " + fmt_g(c2u);

  Fixture f;
  f.name = "constant_angle";
  f.structure = EinsteinTypeStructure::on_surface(
      surf, alpha, UMap::base_radial(expr_s(u_text)), ScalarField::solver(),
      ScalarField::solver());
  f.ref_lambda = expr_s("(" + sigma + "*" + fmt_g(theta0 * q) + " + " + fmt_g((n - 2) * w) +
                        ")/" + sigma + "^2");
  f.ref_mu = expr_s("-" + fmt_g(static_cast<double>(n - 2)) + "/" + sigma + "^2 - " +
                    fmt_g(theta0 * q) + "/(" + fmt_g(w) + "*" + sigma + ") - " +
                    fmt_g(alpha * cu * cu) + "*exp(" + fmt_g(2.0 * q) + "*s)/" + fmt_g(w));
  f.ref_u = expr_s(u_text);
  f.ref_h = expr_s(fmt_g(q) + "*s + " + fmt_g(c3));
  // u' = cu e^{q s} = c2 e^{zeta} with zeta = q s + c3.
  f.u_c2 = cu * std::exp(-c3);
  f.u_c3 = cu * std::exp(q * s_lo) / q + c2u;
  return f;
}

Fixture make_gudermannian(const Params& p) {
  check_keys(p, {"n", "alpha", "m", "s_lo", "s_hi"});
  const int n = static_cast<int>(p.get("n", 2));
  const double alpha = p.get("alpha", 1.0);
  const double s_lo = p.get("s_lo", 0.25);
  const double s_hi = p.get("s_hi", 3.25);
  const int m = static_cast<int>(p.get("m", 120));
  if (!(s_lo > 0.0)) {
    throw std::invalid_argument("gudermannian: s_lo must be > 0 (theta(0) = 1)");
  }

  Ambient ambient(Expression::parse("1", "t"), -50.0, 50.0, 0, n);
  // zeta = log cosh s, beta = gd(s) = 2 arctan tanh(s/2).
  const double zeta0 = std::log(std::cosh(s_lo));
  const double beta0 = 2.0 * std::atan(std::tanh(0.5 * s_lo));
  auto surf = build_surface(expr_s("sqrt(1 - tanh(s)^2)"), s_lo, s_hi, std::move(ambient),
                            zeta0, beta0, m);

  const std::string gd = "(2*arctan(tanh(s/2)))";
  Fixture f;
  f.name = "gudermannian";
  f.structure = EinsteinTypeStructure::on_surface(
      surf, alpha, UMap::base_radial(expr_s("sinh(s)")), ScalarField::solver(),
      ScalarField::solver());
  f.ref_lambda = expr_s("(sech(s)*(2*" + gd + " + " + fmt_g(static_cast<double>(n - 2)) +
                        "*sinh(s))*tanh(s))/" + gd + "^2");
  f.ref_mu = expr_s("((" + gd + "*csch(s) - 1)*(" + fmt_g(static_cast<double>(n - 2)) +
                    " + " + gd + "*csch(s)))/" + gd + "^2 - " + fmt_g(alpha) +
                    "*cosh(s)^2*coth(s)^2");
  f.ref_u = expr_s("sinh(s)");
  f.ref_h = expr_s("log(cosh(s))");
  f.u_c2 = 1.0;
  f.u_c3 = std::sinh(s_lo);
  return f;
}

Fixture make_fiber_map(const Params& p) {
  check_keys(p, {"n", "alpha", "c1", "c2", "k", "m", "s_lo", "s_hi"});
  const int n = static_cast<int>(p.get("n", 3));
  const double alpha = p.get("alpha", 1.0);
  const double c1 = p.get("c1", 0.5);
  const double c2 = p.get("c2", 0.0);
  const int k = static_cast<int>(p.get("k", n - 1));
  const double s_lo = p.get("s_lo", 0.3);
  const double s_hi = p.get("s_hi", 2.8);
  const int m = static_cast<int>(p.get("m", 100));
  if (!(s_lo > 0.0 && s_hi < std::numbers::pi)) {
    throw std::invalid_argument("fiber_map: s range must stay inside (0, pi)");
  }

  Ambient ambient(Expression::parse("1", "t"), -50.0, 50.0, 0, n);
  // sigma = s/2 + sin(2s)/4 (antiderivative of theta = cos^2 s).
  const double beta0 = 0.5 * s_lo + 0.25 * std::sin(2.0 * s_lo);
  auto surf = build_surface(expr_s("cos(s)^2"), s_lo, s_hi, std::move(ambient), 0.0,
                            beta0, m);

  const std::string twos = "(2*s + sin(2*s))";
  const std::string half = "(s + cos(s)*sin(s))";
  const double nm2 = static_cast<double>(n - 2);
  const std::string top =
      "(16*(" + fmt_g(nm2 - alpha * c1 * c1) + " - " + fmt_g(nm2) + "*cos(s)^4) + 8*" +
      half + "*sin(2*s))/" + twos + "^2";

  Fixture f;
  f.name = "fiber_map";
  f.structure = EinsteinTypeStructure::on_surface(
      surf, alpha, UMap::fiber_linear(c1, c2, k), ScalarField::solver(),
      ScalarField::solver());
  f.ref_lambda = expr_s(top + " + (2*cos(s)^2*sqrt(1 - cos(s)^4))/" + half);
  f.ref_mu = expr_s("-(1/(1 - cos(s)^4))*((2*cos(s)^2*sqrt(1 - cos(s)^4))/" + half +
                    " - 2*cos(s)*sin(s)*(cos(s)^2/sqrt(1 - cos(s)^4) + (" +
                    fmt_g(2.0 * (n - 1)) + ")/" + half + ") + " + top + ")");
  f.ref_h = expr_s(
      "-(sqrt(1 - cos(s)^4)*(sqrt(cos(2*s) + 3)*(cos(s)/sin(s))"
      " + sqrt(2)*(1/sin(s))*log(sqrt(2)*cos(s) + sqrt(cos(2*s) + 3))))"
      "/(2*sqrt(cos(2*s) + 3))");
  f.notes.push_back(
      "reference lambda/mu solve the distinguished-fiber equation with the coordinate "
      "normalization du(phi_vk) = c1; the perpendicular route differs by alpha*c1^2/sigma^2");
  return f;
}

Fixture make_sphere_slice(const Params& p) {
  check_keys(p, {"n", "alpha", "t0"});
  const int n = static_cast<int>(p.get("n", 3));
  const double alpha = p.get("alpha", 1.0);
  const double t0 = p.get("t0", 1.0);
  if (!(t0 > 0.0)) throw std::invalid_argument("sphere_slice: t0 must be > 0");

  // Euclidean space in polar form: (0, inf) x_t S^n.
  Ambient ambient(Expression::parse("t", "t"), 1e-3, 1e3, 1, n);
  SliceSurface slice{std::move(ambient), t0};

  Fixture f;
  f.name = "sphere_slice";
  f.structure = EinsteinTypeStructure::on_slice(std::move(slice), alpha,
                                                UMap::isometric_identity(),
                                                ScalarField::solver(), ScalarField::solver());
  // Published soliton function; the slice computation gives (n-1)/t0^2 - alpha.
  f.ref_lambda = expr_s(fmt_g(static_cast<double>(n) + 1.0 - alpha));
  f.notes.push_back(
      "reference lambda = n+1-alpha differs from the computed (n-1)/t0^2 - alpha; "
      "the discrepancy is recorded, not resolved");
  return f;
}

}  // namespace

std::vector<std::string> names() {
  return {"sphere_slice", "gudermannian", "constant_angle", "fiber_map", "cylinder", "cone"};
}

Fixture make(const std::string& name, const Params& params) {
  if (name == "cylinder") return make_cylinder(params);
  if (name == "cone") return make_cone(params);
  if (name == "constant_angle") return make_constant_angle(params);
  if (name == "gudermannian") return make_gudermannian(params);
  if (name == "fiber_map") return make_fiber_map(params);
  if (name == "sphere_slice") return make_sphere_slice(params);
  throw std::invalid_argument("fixture: unknown name '" + name + "'");
}

std::vector<ReferenceComparison> compare_with_reference(const Fixture& f) {
  std::vector<ReferenceComparison> out;
  const EinsteinTypeStructure& st = f.structure;

  auto accumulate = [](ReferenceComparison& c, double diff) {
    c.max_abs_diff = std::max(c.max_abs_diff, std::fabs(diff));
    c.mean_abs_diff += std::fabs(diff);
  };

  if (st.is_slice()) {
    if (f.ref_lambda) {
      ReferenceComparison c{"lambda", 0.0, 0.0, ""};
      const double computed = solve_lambda_mu(st, st.slice().t0).lambda;
      const double ref = f.ref_lambda->eval(st.slice().t0);
      accumulate(c, computed - ref);
      c.mean_abs_diff = c.max_abs_diff;
      c.note = "computed " + std::to_string(computed) + " vs reference " + std::to_string(ref);
      out.push_back(std::move(c));
    }
    return out;
  }

  const RotationalSurface& S = st.surface();
  const int points = S.grid_size();
  const bool fiber = st.u().mode() == UMode::fiber_linear;

  ReferenceComparison lam{"lambda", 0.0, 0.0, ""};
  ReferenceComparison mu{"mu", 0.0, 0.0, ""};
  ReferenceComparison lam_k{"lambda_fiber_route", 0.0, 0.0,
                            "lambda solved from the distinguished-fiber equation"};
  ReferenceComparison mu_k{"mu_fiber_route", 0.0, 0.0,
                           "mu paired with the fiber-route lambda"};
  ReferenceComparison uref{"u", 0.0, 0.0, "profile-ODE integration vs reference"};
  ReferenceComparison href{"h", 0.0, 0.0, ""};

  std::optional<UMap> u_solved;
  if (f.ref_u && f.u_c2 && f.u_c3) {
    u_solved = solve_u_base(S, *f.u_c2, *f.u_c3, TauConvention::profile_ode);
  }

  // Height comparison is up to the free additive constant; estimate it by
  // least squares over the grid first.
  double h_shift = 0.0;
  if (f.ref_h) {
    for (int i = 0; i < points; ++i) {
      const double s = S.node(i);
      h_shift += f.ref_h->eval(s) - S.at(s).h;
    }
    h_shift /= points;
    href.note = "additive constant " + std::to_string(h_shift) + " fitted by least squares";
  }

  for (int i = 0; i < points; ++i) {
    const double s = S.node(i);
    const LambdaMu lm = solve_lambda_mu(st, s);
    if (f.ref_lambda) accumulate(lam, lm.lambda - f.ref_lambda->eval(s));
    if (f.ref_mu) accumulate(mu, lm.mu - f.ref_mu->eval(s));
    if (fiber) {
      const ProfileSample ps = S.at(s);
      const double c4 = st.u().c4();
      const double lambda_k = lm.lambda - st.alpha() * c4 * c4 / (ps.sigma * ps.sigma);
      const double mu_from_k = lm.mu + (lm.lambda - lambda_k) / (1.0 - ps.theta * ps.theta);
      if (f.ref_lambda) accumulate(lam_k, lambda_k - f.ref_lambda->eval(s));
      if (f.ref_mu) accumulate(mu_k, mu_from_k - f.ref_mu->eval(s));
    }
    if (u_solved) {
      accumulate(uref, u_solved->radial_jet(S, s).v - f.ref_u->eval(s));
    }
    if (f.ref_h) accumulate(href, f.ref_h->eval(s) - S.at(s).h - h_shift);
  }

  auto push = [&](ReferenceComparison& c, bool enabled) {
    if (!enabled) return;
    c.mean_abs_diff /= points;
    out.push_back(std::move(c));
  };
  push(lam, f.ref_lambda.has_value());
  push(mu, f.ref_mu.has_value());
  push(lam_k, fiber && f.ref_lambda.has_value());
  push(mu_k, fiber && f.ref_mu.has_value());
  push(uref, u_solved.has_value());
  push(href, f.ref_h.has_value());
  return out;
}

}  // namespace etl::fixtures
