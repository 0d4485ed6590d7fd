#include "etl/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "etl/fixtures.hpp"
#include "etl/report.hpp"

namespace etl::cli {

namespace {

namespace fs = std::filesystem;

Expression parse_config_expr(const nlohmann::json& j, const std::string& key,
                             const std::string& var) {
  if (!j.is_string()) throw ConfigError("config: '" + key + "' must be an expression string");
  try {
    return Expression::parse(j.get<std::string>(), var);
  } catch (const ParseError& e) {
    throw ConfigError("config: '" + key + "': " + e.what());
  }
}

double require_number(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw ConfigError("config: missing numeric '" + key + "'");
  }
  return j[key].get<double>();
}

std::pair<double, double> require_range(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 2) {
    throw ConfigError("config: '" + key + "' must be [lo, hi]");
  }
  return {j[key][0].get<double>(), j[key][1].get<double>()};
}

ScalarField scalar_field(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key)) return ScalarField::solver();
  if (j[key].is_string() && j[key].get<std::string>() == "solve") {
    return ScalarField::solver();
  }
  return ScalarField::expression(parse_config_expr(j[key], key, "s"));
}

TauConvention convention_from_string(const std::string& text, const std::string& key) {
  if (text == "A" || text == "full-laplacian") return TauConvention::full_laplacian;
  if (text == "B" || text == "profile-ode") return TauConvention::profile_ode;
  throw ConfigError("config: '" + key + "' must be A, B, full-laplacian or profile-ode");
}

UMap u_map_from_json(const nlohmann::json& j, const RotationalSurface& S) {
  if (!j.is_object() || !j.contains("mode")) {
    throw ConfigError("config: structure.u needs a 'mode'");
  }
  const std::string mode = j["mode"].get<std::string>();
  if (mode == "constant") {
    return UMap::make_constant(j.value("value", 0.0));
  }
  if (mode == "base-radial") {
    if (j.contains("expr")) {
      return UMap::base_radial(parse_config_expr(j["expr"], "structure.u.expr", "s"));
    }
    const double c2 = require_number(j, "c2");
    const double c3 = j.value("c3", 0.0);
    const TauConvention conv =
        convention_from_string(j.value("convention", std::string("B")),
                               "structure.u.convention");
    return solve_u_base(S, c2, c3, conv);
  }
  if (mode == "fiber-linear") {
    const double c4 = require_number(j, "c4");
    const double c5 = j.value("c5", 0.0);
    const int k = static_cast<int>(j.value("k", 1.0));
    return UMap::fiber_linear(c4, c5, k);
  }
  if (mode == "isometric-identity") {
    throw ConfigError("config: the isometric identity map is only available via the "
                      "sphere_slice fixture");
  }
  throw ConfigError("config: unknown u mode '" + mode + "'");
}

Outputs outputs_from_json(const nlohmann::json& j) {
  Outputs out;
  if (!j.contains("outputs")) return out;
  const nlohmann::json& o = j["outputs"];
  if (!o.is_object()) throw ConfigError("config: 'outputs' must be an object");
  auto pick = [&o](const char* key) -> std::optional<std::string> {
    if (!o.contains(key)) return std::nullopt;
    return o[key].get<std::string>();
  };
  out.report = pick("report");
  out.solve = pick("solve");
  out.margins = pick("margins");
  out.profile = pick("profile");
  out.oracle = pick("oracle");
  out.comparison = pick("comparison");
  if (o.contains("mesh")) {
    MeshSpec mesh;
    const nlohmann::json& m = o["mesh"];
    if (m.is_string()) {
      mesh.path = m.get<std::string>();
    } else if (m.is_object()) {
      mesh.path = m.value("path", std::string("mesh.csv"));
      mesh.s_points = static_cast<int>(m.value("s_points", 100.0));
      mesh.v_points = static_cast<int>(m.value("v_points", 60.0));
    } else {
      throw ConfigError("config: outputs.mesh must be a path or an object");
    }
    out.mesh = mesh;
  }
  return out;
}

}  // namespace

Scenario scenario_from_json(const nlohmann::json& config) {
  if (!config.is_object()) throw ConfigError("config: top level must be an object");
  for (const char* key : {"ambient", "profile", "structure", "grid"}) {
    if (!config.contains(key)) throw ConfigError(std::string("config: missing '") + key + "'");
  }
  const nlohmann::json& ja = config["ambient"];
  const nlohmann::json& jp = config["profile"];
  const nlohmann::json& js = config["structure"];
  const nlohmann::json& jg = config["grid"];

  Expression f = parse_config_expr(
      ja.contains("f") ? ja["f"] : nlohmann::json(), "ambient.f", "t");
  const auto [t_lo, t_hi] = require_range(ja, "t_range");
  const int fiber_c = static_cast<int>(ja.value("fiber_curvature", 0.0));
  const int n = static_cast<int>(require_number(ja, "n"));

  Expression theta = parse_config_expr(
      jp.contains("theta") ? jp["theta"] : nlohmann::json(), "profile.theta", "s");
  const auto [s_lo, s_hi] = require_range(jp, "s_range");
  const double zeta0 = jp.value("zeta0", 0.0);
  const double beta0 = jp.value("beta0", 1.0);

  const int m = static_cast<int>(jg.value("points", 120.0));
  const double quad_tol = jg.value("tolerance", 1e-10);

  std::shared_ptr<const RotationalSurface> surface;
  try {
    Ambient ambient(std::move(f), t_lo, t_hi, fiber_c, n);
    AngleProfile profile{std::move(theta), s_lo, s_hi};
    surface = std::make_shared<RotationalSurface>(
        RotationalSurface::build(std::move(ambient), std::move(profile), zeta0, beta0, m,
                                 quad_tol));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  const double alpha = require_number(js, "alpha");
  UMap u = js.contains("u") ? u_map_from_json(js["u"], *surface) : UMap::make_constant();
  ScalarField mu = scalar_field(js, "mu");
  ScalarField lambda = scalar_field(js, "lambda");

  Scenario sc;
  try {
    sc.structure = EinsteinTypeStructure::on_surface(surface, alpha, std::move(u),
                                                     std::move(mu), std::move(lambda));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  sc.verify_tol = config.value("verify_tolerance", 1e-6);
  sc.outputs = outputs_from_json(config);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  nlohmann::json config;
  try {
    in >> config;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: invalid JSON in '" + path + "': " + e.what());
  }
  return scenario_from_json(config);
}

void apply_tau_convention(ResidualReport& report, const std::string& convention) {
  EquationReport* tau_a = nullptr;
  EquationReport* tau_b = nullptr;
  for (EquationReport& r : report.reports) {
    if (r.equation != "tau" || !r.convention) continue;
    (*r.convention == "A" ? tau_a : tau_b) = &r;
  }
  if (!tau_a || !tau_b) return;
  if (convention == "A") {
    tau_a->gated = true;
    tau_b->gated = false;
  } else if (convention == "B") {
    tau_a->gated = false;
    tau_b->gated = true;
  } else {  // both: the equation holds if either reading does
    const bool either = tau_a->pass || tau_b->pass;
    tau_a->gated = tau_a->gated && !either;
    tau_b->gated = tau_b->gated && !either;
  }
  report.pass = true;
  for (const EquationReport& r : report.reports) {
    if (r.gated && !r.pass) report.pass = false;
  }
}

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<double> tol;
  std::optional<int> grid;
  std::string convention = "both";
};

std::string join_out(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
}

Scenario load_with_overrides(const CommonOptions& opt) {
  std::ifstream in(opt.config_path);
  if (!in) throw ConfigError("config: cannot open '" + opt.config_path + "'");
  nlohmann::json config;
  try {
    in >> config;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: invalid JSON: " + std::string(e.what()));
  }
  if (opt.grid) config["grid"]["points"] = *opt.grid;
  Scenario sc = scenario_from_json(config);
  if (opt.tol) sc.verify_tol = *opt.tol;
  return sc;
}

int run_verify(const Scenario& sc, const CommonOptions& opt) {
  const EinsteinTypeStructure& st = *sc.structure;
  ResidualReport eq = residual_eq0001(st, sc.verify_tol);
  ResidualReport prop = residual_prop1(st, sc.verify_tol);
  apply_tau_convention(eq, opt.convention);
  apply_tau_convention(prop, opt.convention);

  nlohmann::json root;
  root["eq0001"] = report::residual_to_json(eq);
  root["prop1"] = report::residual_to_json(prop);
  const bool pass = eq.pass && prop.pass;
  root["pass"] = pass;

  ensure_out_dir(opt.out_dir);
  const std::string path =
      join_out(opt.out_dir, sc.outputs.report.value_or("report.json"));
  report::write_file(path, root.dump(2) + "\n");

  double worst = 0.0;
  for (const auto* r : {&eq, &prop}) {
    for (const EquationReport& rep : r->reports) {
      if (rep.gated) worst = std::max(worst, rep.max);
    }
  }
  std::printf("%s max gated residual %.3e (tolerance %.3e) -> %s\n",
              pass ? "PASS" : "FAIL", worst, sc.verify_tol, path.c_str());
  return pass ? 0 : 1;
}

int run_solve(const Scenario& sc, const CommonOptions& opt) {
  ensure_out_dir(opt.out_dir);
  const std::string path = join_out(opt.out_dir, sc.outputs.solve.value_or("solve.csv"));
  report::write_file(path, report::solve_csv(*sc.structure));
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int run_oracle(const Scenario& sc, const CommonOptions& opt) {
  const EinsteinTypeStructure& st = *sc.structure;
  const double rel_tol = opt.tol.value_or(sc.oracle_rel_tol);
  std::vector<oracle::OracleRecord> records;
  if (!st.is_slice()) {
    records = oracle::compare_surface(st.surface(), sc.oracle_points, sc.oracle_step);
    const auto ambient_records =
        oracle::compare_ambient(st.surface().ambient(), 5, sc.oracle_step);
    records.insert(records.end(), ambient_records.begin(), ambient_records.end());
  }
  const auto hess = compare_hessian_identity(st, sc.oracle_points);
  records.insert(records.end(), hess.begin(), hess.end());

  const nlohmann::json root = report::oracle_to_json(records, rel_tol);
  ensure_out_dir(opt.out_dir);
  const std::string path = join_out(opt.out_dir, sc.outputs.oracle.value_or("oracle.json"));
  report::write_file(path, root.dump(2) + "\n");
  const bool pass = root["pass"].get<bool>();
  std::printf("%s worst relative error %.3e (tolerance %.3e) -> %s\n",
              pass ? "PASS" : "FAIL", root["worst_relative_error"].get<double>(), rel_tol,
              path.c_str());
  return pass ? 0 : 1;
}

int run_mesh(const Scenario& sc, const CommonOptions& opt) {
  const MeshSpec mesh = sc.outputs.mesh.value_or(MeshSpec{});
  ensure_out_dir(opt.out_dir);
  const std::string path = join_out(opt.out_dir, mesh.path);
  report::write_file(path,
                     report::mesh_csv(sc.structure->surface(), mesh.s_points, mesh.v_points));
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int run_margins(const Scenario& sc, const CommonOptions& opt) {
  const auto rows = hypothesis_margins(*sc.structure);
  ensure_out_dir(opt.out_dir);
  const std::string path =
      join_out(opt.out_dir, sc.outputs.margins.value_or("margins.csv"));
  report::write_file(path, report::margins_csv(rows));
  double inf_margin = rows.empty() ? 0.0 : rows.front().ambient_margin;
  for (const MarginRow& r : rows) inf_margin = std::min(inf_margin, r.ambient_margin);
  std::printf("wrote %s (ambient curvature-condition infimum %.6g)\n", path.c_str(),
              inf_margin);
  return 0;
}

int run_example(const std::string& name, const CommonOptions& opt) {
  const fixtures::Fixture fixture = fixtures::make(name);
  const EinsteinTypeStructure& st = fixture.structure;
  const double tol = opt.tol.value_or(1e-6);
  ensure_out_dir(opt.out_dir);

  ResidualReport eq = residual_eq0001(st, tol);
  ResidualReport prop = residual_prop1(st, tol);
  apply_tau_convention(eq, opt.convention);
  apply_tau_convention(prop, opt.convention);
  nlohmann::json verify_json;
  verify_json["eq0001"] = report::residual_to_json(eq);
  verify_json["prop1"] = report::residual_to_json(prop);
  const bool pass = eq.pass && prop.pass;
  verify_json["pass"] = pass;
  report::write_file(join_out(opt.out_dir, name + "_report.json"),
                     verify_json.dump(2) + "\n");

  report::write_file(join_out(opt.out_dir, name + "_solve.csv"), report::solve_csv(st));
  report::write_file(join_out(opt.out_dir, name + "_margins.csv"),
                     report::margins_csv(hypothesis_margins(st)));
  if (!st.is_slice()) {
    report::write_file(join_out(opt.out_dir, name + "_profile.csv"),
                       report::profile_csv(st.surface()));
  }
  const auto comps = fixtures::compare_with_reference(fixture);
  report::write_file(
      join_out(opt.out_dir, name + "_comparison.json"),
      report::comparisons_to_json(name, comps, fixture.notes).dump(2) + "\n");

  std::printf("%s fixture '%s' (outputs in %s)\n", pass ? "PASS" : "FAIL", name.c_str(),
              opt.out_dir.c_str());
  for (const auto& c : comps) {
    std::printf("  reference %-18s max |diff| %.3e%s%s\n", c.quantity.c_str(),
                c.max_abs_diff, c.note.empty() ? "" : "  -- ", c.note.c_str());
  }
  return pass ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"rotational Einstein-type structures in warped products"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string example_name;
  bool list_examples = false;

  auto add_common = [&opt](CLI::App* cmd, bool needs_config) {
    if (needs_config) {
      cmd->add_option("--config", opt.config_path, "scenario JSON")->required();
    }
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--tol", opt.tol, "tolerance override");
    cmd->add_option("--grid", opt.grid, "grid points override");
    cmd->add_option("--convention", opt.convention, "tau convention: A, B or both")
        ->check(CLI::IsMember({"A", "B", "both"}));
  };

  CLI::App* solve = app.add_subcommand("solve", "emit lambda(s), mu(s), u(s) CSV");
  add_common(solve, true);
  CLI::App* verify = app.add_subcommand("verify", "residual report; exit 0 iff pass");
  add_common(verify, true);
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "closed-form vs finite-difference report");
  add_common(oracle_cmd, true);
  CLI::App* mesh = app.add_subcommand("mesh", "embedded surface CSV");
  add_common(mesh, true);
  CLI::App* margins = app.add_subcommand("margins", "hypothesis margin CSV");
  add_common(margins, true);
  CLI::App* example = app.add_subcommand("example", "run a bundled fixture end to end");
  example->add_option("name", example_name, "fixture name");
  example->add_flag("--list", list_examples, "list fixture names");
  add_common(example, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (example->parsed()) {
      if (list_examples) {
        for (const std::string& n : fixtures::names()) std::printf("%s\n", n.c_str());
        return 0;
      }
      if (example_name.empty()) {
        std::fprintf(stderr, "example: give a fixture name or --list\n");
        return 2;
      }
      return run_example(example_name, opt);
    }
    const Scenario sc = load_with_overrides(opt);
    if (solve->parsed()) return run_solve(sc, opt);
    if (verify->parsed()) return run_verify(sc, opt);
    if (oracle_cmd->parsed()) return run_oracle(sc, opt);
    if (mesh->parsed()) return run_mesh(sc, opt);
    if (margins->parsed()) return run_margins(sc, opt);
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
}

}  // namespace etl::cli
