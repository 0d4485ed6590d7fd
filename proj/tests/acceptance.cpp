// Acceptance suite: one pass/fail line per criterion, exit 0 only if all
// pass. Runs the full fixture catalogue against the independent oracles at
// the pinned tolerances.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "etl/cli.hpp"
#include "etl/fixtures.hpp"
#include "etl/report.hpp"

using namespace etl;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report_line(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

fixtures::Fixture fx(const std::string& name, std::map<std::string, double> params = {}) {
  fixtures::Params p;
  p.values = std::move(params);
  return fixtures::make(name, p);
}

const std::vector<std::string>& rotational_names() {
  static const std::vector<std::string> names = {"gudermannian", "constant_angle",
                                                 "fiber_map", "cylinder", "cone"};
  return names;
}

// --- criterion 1: arc-length identity --------------------------------------
void criterion_arc_length() {
  double worst = 0.0;
  std::string where;
  for (const std::string& name : fixtures::names()) {
    const auto f = fx(name);
    if (f.structure.is_slice()) continue;  // constant-height slice: no profile
    const RotationalSurface& S = f.structure.surface();
    for (int i = 0; i < S.grid_size(); ++i) {
      const ProfileSample p = S.at(S.node(i));
      const double defect =
          std::fabs(p.zeta_s * p.zeta_s + p.f * p.f * p.beta_s * p.beta_s - 1.0);
      if (defect > worst) {
        worst = defect;
        where = name;
      }
    }
  }
  report_line(1, worst < 1e-10,
              "arc-length identity: max defect " + fmt(worst) + " (" + where +
                  ") < 1e-10 over all fixtures");
}

// --- criterion 2: height Hessian identity -----------------------------------
void criterion_hessian_identity() {
  double worst = 0.0;
  std::string where;
  bool cylinder_exact = true;
  for (const std::string& name : fixtures::names()) {
    const auto f = fx(name);
    for (const auto& rec : compare_hessian_identity(f.structure, 50)) {
      if (rec.abs_err > worst) {
        worst = rec.abs_err;
        where = name;
      }
      if (name == "cylinder" && (rec.closed_form != 0.0 || rec.oracle_value != 0.0)) {
        cylinder_exact = false;
      }
    }
  }
  report_line(2, worst < 1e-7 && cylinder_exact,
              "height Hessian extrinsic vs intrinsic: max " + fmt(worst) + " (" + where +
                  ") < 1e-7; cylinder exactly zero on both routes: " +
                  (cylinder_exact ? "yes" : "no"));
}

// --- criterion 3: Ricci oracle ----------------------------------------------
void criterion_ricci_oracle() {
  double worst_rel = 0.0, worst_sym = 0.0;
  std::string where;
  for (const std::string& name : rotational_names()) {
    for (int n : {2, 3}) {
      std::map<std::string, double> params{{"n", static_cast<double>(n)}};
      if (name == "fiber_map" && n == 2) params["k"] = 1.0;
      const auto f = fx(name, params);
      const RotationalSurface& S = f.structure.surface();
      const auto records = oracle::compare_surface(S, 20, 1e-4, scan::Exec::parallel);
      for (const auto& rec : records) {
        if (rec.quantity == "riemann_symmetry") {
          worst_sym = std::max(worst_sym, rec.oracle_value);
          continue;
        }
        if (rec.quantity.rfind("ricci", 0) != 0) continue;
        const double rel = rec.rel_err();
        if (rel > worst_rel) {
          worst_rel = rel;
          where = name + "/n=" + std::to_string(n);
        }
      }
    }
  }
  // Slice fixture: round metric charts in both oracle dimensions.
  for (int dim : {2, 3}) {
    const auto chart = oracle::sphere_chart(dim, 1.0);
    double p[4] = {std::numbers::pi / 2.5, 0.8, 0.7, 0.0};
    const auto ric = oracle::ricci_fd_richardson(chart, p, 1e-4);
    const auto g = oracle::metric_at(chart, p);
    for (int d = 0; d < dim; ++d) {
      const double rel = std::fabs(ric.at(d, d) / g.at(d, d) - (dim - 1.0)) / dim;
      if (rel > worst_rel) {
        worst_rel = rel;
        where = "sphere_slice/dim=" + std::to_string(dim);
      }
    }
  }
  report_line(3, worst_rel < 1e-5 && worst_sym < 1e-6,
              "Ricci closed vs FD: worst rel " + fmt(worst_rel) + " (" + where +
                  ") < 1e-5; Riemann symmetry residual " + fmt(worst_sym) + " < 1e-6");
}

// --- criterion 4: solver/verifier loop --------------------------------------
void criterion_solver_loop() {
  double worst = 0.0;
  std::string where;
  bool all_pass = true;
  for (const std::string& name : fixtures::names()) {
    const auto f = fx(name);
    const ResidualReport rep = residual_eq0001(f.structure, 1e-8);
    const EquationReport* tensor = rep.find("eq0001");
    if (tensor->max > worst) {
      worst = tensor->max;
      where = name;
    }
    all_pass = all_pass && rep.pass;
  }
  report_line(4, worst < 1e-8 && all_pass,
              "solver/verifier loop: max gated residual " + fmt(worst) + " (" + where +
                  ") < 1e-8 on every fixture grid point");
}

// --- criterion 5: gudermannian reproduction ---------------------------------
void criterion_gudermannian() {
  const auto f = fx("gudermannian");
  const RotationalSurface& S = f.structure.surface();
  const ProfileSample p = S.at(1.0);

  // Closed forms evaluated independently of the quadrature pipeline.
  const double zeta_closed = std::log(std::cosh(1.0));
  const double sigma_closed = 2.0 * std::atan(std::tanh(0.5));
  const double theta_closed = 1.0 / std::cosh(1.0);
  const double e1 = std::fabs(p.zeta - zeta_closed);
  const double e2 = std::fabs(p.sigma - sigma_closed);
  const double e3 = std::fabs(p.theta - theta_closed);

  double tau_b = 0.0, tau_gap = 0.0;
  for (int i = 0; i < S.grid_size(); ++i) {
    const double s = S.node(i);
    const TauResiduals tr = tau_residuals(f.structure, s);
    tau_b = std::max(tau_b, tr.conv_b);
    const ProfileSample q = S.at(s);
    const double expected_gap =
        (S.dimension() - 1) * (q.sigma_s / q.sigma) * std::cosh(s);
    tau_gap = std::max(tau_gap, std::fabs(tr.conv_a - expected_gap));
  }
  const bool pass = e1 < 1e-6 && e2 < 1e-6 && e3 < 1e-6 && tau_b < 1e-8 && tau_gap < 1e-8;
  report_line(5, pass,
              "gudermannian at s=1: |zeta-log cosh 1| " + fmt(e1) + ", |sigma-gd(1)| " +
                  fmt(e2) + ", |theta-sech 1| " + fmt(e3) +
                  " < 1e-6; tau(B) " + fmt(tau_b) +
                  " < 1e-8; tau(A) equals (n-1)(sigma'/sigma)cosh s to " + fmt(tau_gap));
}

// --- criterion 6: constant-angle reproduction -------------------------------
void criterion_constant_angle() {
  const auto f = fx("constant_angle");
  const RotationalSurface& S = f.structure.surface();
  double worst_lm = 0.0;
  for (int i = 0; i < S.grid_size(); ++i) {
    const double s = S.node(i);
    const LambdaMu lm = solve_lambda_mu(f.structure, s);
    worst_lm = std::max(worst_lm, std::fabs(lm.lambda - f.ref_lambda->eval(s)));
    worst_lm = std::max(worst_lm, std::fabs(lm.mu - f.ref_mu->eval(s)));
  }
  const UMap u = solve_u_base(S, *f.u_c2, *f.u_c3, TauConvention::profile_ode);
  double worst_u = 0.0;
  for (int i = 0; i < S.grid_size(); ++i) {
    const double s = S.node(i);
    worst_u = std::max(worst_u, std::fabs(u.radial_jet(S, s).v - f.ref_u->eval(s)));
  }
  report_line(6, worst_lm < 1e-8 && worst_u < 1e-10,
              "constant angle with c4 = c1: solver lambda/mu vs reference " + fmt(worst_lm) +
                  " < 1e-8 on [0.5, 5]; integrated u vs reference " + fmt(worst_u) +
                  " < 1e-10");
}

// --- criterion 7: trace identity --------------------------------------------
void criterion_trace_identity() {
  double worst = 0.0;
  std::string where;
  for (const std::string& name : rotational_names()) {
    const auto f = fx(name);
    const RotationalSurface& S = f.structure.surface();
    for (int i = 0; i < S.grid_size(); ++i) {
      const double s = S.node(i);
      if (residual_eq0001_point(f.structure, s).max_abs() >= 1e-8) continue;
      const ScalarCurvatures r = u_scalar_curvature(f.structure, s);
      const double diff = std::fabs(r.trace - r.intrinsic);
      if (diff > worst) {
        worst = diff;
        where = name;
      }
    }
  }
  const auto slice = fx("sphere_slice");
  const ScalarCurvatures r = u_scalar_curvature(slice.structure, slice.structure.slice().t0);
  const double slice_spread = std::max({std::fabs(r.intrinsic - r.trace),
                                        std::fabs(r.intrinsic - r.extrinsic),
                                        std::fabs(r.trace - r.extrinsic)});
  report_line(7, worst < 1e-8 && slice_spread < 1e-6,
              "trace identity: |R^u trace formula - intrinsic| " + fmt(worst) + " (" +
                  where + ") < 1e-8; slice three-route spread " + fmt(slice_spread) +
                  " < 1e-6");
}

// --- criterion 8: Bochner identity ------------------------------------------
void criterion_bochner() {
  const auto cyl = fx("cylinder");
  double worst = 0.0;
  bool applicable = true;
  const RotationalSurface& S = cyl.structure.surface();
  for (int i = 0; i < S.grid_size(); ++i) {
    const BochnerResult b = bochner_eval(cyl.structure, S.node(i));
    applicable = applicable && b.applicable;
    worst = std::max(worst, std::fabs(b.lhs - b.rhs));
  }
  const auto slice = fx("sphere_slice");
  const BochnerResult bs = bochner_eval(slice.structure, slice.structure.slice().t0);
  const bool slice_zero = bs.lhs == 0.0 && bs.rhs == 0.0 && bs.applicable;
  // Non-constant mu must be reported as not applicable, never asserted.
  const auto gud = fx("gudermannian");
  const bool skipped = !bochner_eval(gud.structure, 1.0).applicable;
  report_line(8, worst < 1e-7 && applicable && slice_zero && skipped,
              "Bochner identity: cylinder |lhs-rhs| " + fmt(worst) +
                  " < 1e-7 (constant mu = -(n-2)); slice trivially 0 = 0; "
                  "non-constant mu marked skipped: " + (skipped ? "yes" : "no"));
}

// --- criterion 9: form equivalence ------------------------------------------
void criterion_form_equivalence() {
  double worst = 0.0;
  std::string where;
  for (const std::string& name : fixtures::names()) {
    const auto f = fx(name);
    std::vector<double> pts;
    if (f.structure.is_slice()) {
      pts.push_back(f.structure.slice().t0);
    } else {
      const RotationalSurface& S = f.structure.surface();
      for (int i = 0; i < S.grid_size(); ++i) pts.push_back(S.node(i));
    }
    for (double s : pts) {
      const AxiTensor d =
          residual_eq0001_point(f.structure, s) - residual_prop1_point(f.structure, s);
      if (d.max_abs() > worst) {
        worst = d.max_abs();
        where = name;
      }
    }
  }
  report_line(9, worst < 1e-9,
              "defining equation vs extrinsic form: componentwise gap " + fmt(worst) +
                  " (" + where + ") < 1e-9");
}

// --- criterion 10: CLI determinism ------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return {};
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void criterion_determinism() {
#ifndef ETL_CLI_PATH
  report_line(10, false, "CLI path not wired into the build");
#else
  const fs::path dir =
      fs::temp_directory_path() / ("etl_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir / "a");
  fs::create_directories(dir / "b");

  nlohmann::json cfg = {
      {"ambient", {{"f", "1"}, {"t_range", {-50.0, 50.0}}, {"fiber_curvature", 0}, {"n", 2}}},
      {"profile",
       {{"theta", "sqrt(1 - tanh(s)^2)"},
        {"s_range", {0.25, 3.25}},
        {"zeta0", 0.030929803620161371},
        {"beta0", 0.24743579898243148}}},
      {"structure",
       {{"alpha", 1.0},
        {"u", {{"mode", "base-radial"}, {"expr", "sinh(s)"}}},
        {"mu", "solve"},
        {"lambda", "solve"}}},
      {"grid", {{"points", 120}, {"tolerance", 1e-10}}},
      {"outputs", {{"mesh", {{"path", "mesh.csv"}, {"s_points", 100}, {"v_points", 60}}}}}};
  std::ofstream(dir / "config.json") << cfg.dump(2);

  auto run_into = [&](const std::string& sub, const std::string& threads) {
    std::ostringstream cmd;
    cmd << "ETL_THREADS=" << threads << " '" << ETL_CLI_PATH << "' verify --config '"
        << (dir / "config.json").string() << "' --out '" << (dir / sub).string()
        << "' > /dev/null 2>&1 && ETL_THREADS=" << threads << " '" << ETL_CLI_PATH
        << "' mesh --config '" << (dir / "config.json").string() << "' --out '"
        << (dir / sub).string() << "' > /dev/null 2>&1";
    return std::system(cmd.str().c_str());
  };
  const int rc1 = run_into("a", "1");
  const int rc2 = run_into("b", "4");

  const std::string report_a = slurp(dir / "a" / "report.json");
  const std::string report_b = slurp(dir / "b" / "report.json");
  const std::string mesh_a = slurp(dir / "a" / "mesh.csv");
  const std::string mesh_b = slurp(dir / "b" / "mesh.csv");
  const auto rows = std::count(mesh_a.begin(), mesh_a.end(), '\n');

  const bool pass = rc1 == 0 && rc2 == 0 && !report_a.empty() && report_a == report_b &&
                    !mesh_a.empty() && mesh_a == mesh_b && rows == 100 * 60 + 1;
  report_line(10, pass,
              std::string("determinism: verify/mesh byte-identical across reruns and "
                          "thread counts: ") +
                  ((report_a == report_b && mesh_a == mesh_b) ? "yes" : "NO") +
                  "; mesh rows " + std::to_string(rows) + " == 6000 + header");
  std::error_code ec;
  fs::remove_all(dir, ec);
#endif
}

}  // namespace

int main() {
  criterion_arc_length();
  criterion_hessian_identity();
  criterion_ricci_oracle();
  criterion_solver_loop();
  criterion_gudermannian();
  criterion_constant_angle();
  criterion_trace_identity();
  criterion_bochner();
  criterion_form_equivalence();
  criterion_determinism();

  if (g_failures == 0) {
    std::printf("acceptance: all 10 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return 1;
}
