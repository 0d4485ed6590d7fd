#include "etl/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

namespace etl::oracle {

double OracleRecord::rel_err() const {
  return abs_err / std::max(1.0, std::fabs(closed_form));
}

namespace {

std::vector<int> spread_indices(int grid_size, int points) {
  // Interior nodes only: finite-difference stencils stay inside the grid.
  std::vector<int> idx;
  const int lo = 1;
  const int hi = grid_size - 2;
  points = std::max(1, std::min(points, hi - lo + 1));
  for (int i = 0; i < points; ++i) {
    idx.push_back(lo + static_cast<int>(std::llround(
                           static_cast<double>(i) * (hi - lo) / std::max(1, points - 1))));
  }
  return idx;
}

}  // namespace

std::vector<OracleRecord> compare_surface(const RotationalSurface& S, int points,
                                          double step, scan::Exec exec) {
  const int n = S.dimension();
  const std::vector<int> idx = spread_indices(S.grid_size(), points);
  const int per_point = n == 3 ? 7 : 6;
  std::vector<OracleRecord> records(idx.size() * static_cast<std::size_t>(per_point));

  scan::for_each(idx.size(), exec, [&](std::size_t i) {
    const double s = S.node(idx[i]);
    const ProfileSample p = S.at(s);
    const ChartMetric chart = surface_chart(S, s);
    double point[kMaxDim] = {s, 0.0, 0.0, 0.0};
    if (n == 3) {
      point[1] = std::numbers::pi / 3.0;
      point[2] = 0.4;
    }

    OracleRecord* rec = records.data() + i * static_cast<std::size_t>(per_point);
    auto emit = [&rec, s](const std::string& q, double closed, double fd) {
      *rec++ = {s, q, closed, fd, std::fabs(closed - fd)};
    };

    const AxiTensor closed = ricci_closed(S, s);
    const AxiTensor fd = ricci_fd_axi(S, s, std::span<const double>(point + 1, n - 1), step);
    emit("ricci_ss", closed.ss, fd.ss);
    emit("ricci_v1", closed.vv_perp, fd.vv_k);
    if (n == 3) emit("ricci_v2", closed.vv_perp, fd.vv_perp);

    // Connection: Gamma^s_{v1 v1} = -sigma sigma', Gamma^{v1}_{s v1} = sigma'/sigma.
    const Christoffels c = christoffel_fd(chart, point, step);
    emit("christoffel_s_v1v1", -p.sigma * p.sigma_s, c.G[0][1][1]);
    emit("christoffel_v1_sv1", p.sigma_s / p.sigma, c.G[1][0][1]);

    // sigma' from the chain rule vs a centered difference of anchored sigma.
    const AnchoredProfile prof = S.anchored(s);
    const double fd_sigma_s = (prof.sigma(s + 1e-4) - prof.sigma(s - 1e-4)) / 2e-4;
    emit("sigma_s", p.sigma_s, fd_sigma_s);

    const Riemann riem = riemann_fd(chart, point, step);
    emit("riemann_symmetry", 0.0, riemann_symmetry_residuals(riem).worst());
  });
  return records;
}

std::vector<OracleRecord> compare_ambient(const Ambient& a, int points, double step) {
  std::vector<OracleRecord> records;
  const ChartMetric chart = ambient_chart(a);
  const double pad = 0.05 * (a.t_hi() - a.t_lo());
  const double lo = a.t_lo() + pad;
  const double hi = a.t_hi() - pad;
  for (int i = 0; i < points; ++i) {
    const double t = lo + (hi - lo) * (points == 1 ? 0.5 : static_cast<double>(i) / (points - 1));
    const SectionalPair closed = a.sectional(t);
    double point[kMaxDim] = {t, 0.0, 0.3, 0.0};
    if (a.fiber_curvature() == 1) point[1] = std::numbers::pi / 2.5;
    if (a.fiber_curvature() == -1) point[1] = 0.8;
    const double k_tv = sectional_fd(chart, point, 0, 1, step);
    const double k_vw = sectional_fd(chart, point, 1, 2, step);
    records.push_back({t, "ambient_k_radial", closed.k_radial, k_tv,
                       std::fabs(closed.k_radial - k_tv)});
    records.push_back({t, "ambient_k_fiber", closed.k_fiber, k_vw,
                       std::fabs(closed.k_fiber - k_vw)});
  }
  return records;
}

}  // namespace etl::oracle

namespace etl {

std::vector<oracle::OracleRecord> compare_hessian_identity(const EinsteinTypeStructure& st,
                                                           int points) {
  std::vector<oracle::OracleRecord> records;
  if (st.is_slice()) {
    // Both routes are identically zero on a slice.
    records.push_back({st.slice().t0, "hess_h_ss", 0.0, 0.0, 0.0});
    records.push_back({st.slice().t0, "hess_h_vv", 0.0, 0.0, 0.0});
    return records;
  }
  const RotationalSurface& S = st.surface();
  points = std::max(2, points);
  for (int i = 0; i < points; ++i) {
    const double s = S.s_lo() + (S.s_hi() - S.s_lo()) * i / (points - 1);
    const ProfileSample p = S.at(s);
    const AxiTensor ext = hessian_height_extrinsic(S, s);
    const AxiTensor rad = oracle::hessian_radial(S, {p.h, p.h_s, p.h_ss}, s);
    records.push_back({s, "hess_h_ss", ext.ss, rad.ss, std::fabs(ext.ss - rad.ss)});
    records.push_back({s, "hess_h_vv", ext.vv_perp, rad.vv_perp,
                       std::fabs(ext.vv_perp - rad.vv_perp)});
  }
  return records;
}

}  // namespace etl

namespace etl::report {

std::string float17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json residual_to_json(const ResidualReport& report) {
  nlohmann::json root;
  root["tolerance"] = report.tolerance;
  root["pass"] = report.pass;
  nlohmann::json reports = nlohmann::json::array();
  for (const EquationReport& rep : report.reports) {
    nlohmann::json j;
    j["equation"] = rep.equation;
    if (rep.convention) j["convention"] = *rep.convention;
    nlohmann::json grid = nlohmann::json::array();
    for (const TensorRow& row : rep.tensor_rows) {
      grid.push_back({{"s", row.s},
                      {"components",
                       {{"ss", row.components.ss},
                        {"vv_k", row.components.vv_k},
                        {"vv_perp", row.components.vv_perp}}}});
    }
    for (const ValueRow& row : rep.value_rows) {
      grid.push_back({{"s", row.s}, {"value", row.value}});
    }
    j["grid"] = std::move(grid);
    j["max"] = rep.max;
    j["mean"] = rep.mean;
    j["gated"] = rep.gated;
    j["pass"] = rep.pass;
    if (rep.vv_k_consistency_max) j["vv_k_consistency_max"] = *rep.vv_k_consistency_max;
    reports.push_back(std::move(j));
  }
  root["reports"] = std::move(reports);
  return root;
}

nlohmann::json oracle_to_json(const std::vector<oracle::OracleRecord>& records,
                              double rel_tol) {
  nlohmann::json root;
  root["relative_tolerance"] = rel_tol;
  bool pass = true;
  double worst = 0.0;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    const double rel = r.rel_err();
    worst = std::max(worst, rel);
    const bool ok = rel < rel_tol;
    pass = pass && ok;
    arr.push_back({{"s", r.s},
                   {"quantity", r.quantity},
                   {"closed_form", r.closed_form},
                   {"oracle", r.oracle_value},
                   {"abs_err", r.abs_err},
                   {"pass", ok}});
  }
  root["records"] = std::move(arr);
  root["worst_relative_error"] = worst;
  root["pass"] = pass;
  return root;
}

nlohmann::json comparisons_to_json(const std::string& fixture_name,
                                   const std::vector<fixtures::ReferenceComparison>& comps,
                                   const std::vector<std::string>& notes) {
  nlohmann::json root;
  root["fixture"] = fixture_name;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : comps) {
    nlohmann::json j{{"quantity", c.quantity},
                     {"max_abs_diff", c.max_abs_diff},
                     {"mean_abs_diff", c.mean_abs_diff}};
    if (!c.note.empty()) j["note"] = c.note;
    arr.push_back(std::move(j));
  }
  root["comparisons"] = std::move(arr);
  root["notes"] = notes;
  return root;
}

std::string profile_csv(const RotationalSurface& S) {
  std::string out = "s,zeta,beta,sigma,theta,h\n";
  for (int i = 0; i < S.grid_size(); ++i) {
    const ProfileSample p = S.at(S.node(i));
    out += float17(p.s) + ',' + float17(p.zeta) + ',' + float17(p.beta) + ',' +
           float17(p.sigma) + ',' + float17(p.theta) + ',' + float17(p.h) + '\n';
  }
  return out;
}

std::string mesh_csv(const RotationalSurface& S, int s_points, int v_points,
                     scan::Exec exec) {
  if (s_points < 2 || v_points < 1) {
    throw std::invalid_argument("mesh: need s_points >= 2 and v_points >= 1");
  }
  const int n = S.dimension();
  std::string header = "s";
  for (int j = 1; j < n; ++j) header += ",v" + std::to_string(j);
  for (int j = 0; j <= n; ++j) header += ",x" + std::to_string(j);
  header += '\n';

  const int angle_dims = n - 1;
  long long v_total = 1;
  for (int j = 0; j < angle_dims; ++j) v_total *= v_points;

  std::vector<std::string> blocks(static_cast<std::size_t>(s_points));
  scan::for_each(static_cast<std::size_t>(s_points), exec, [&](std::size_t i) {
    const double s =
        S.s_lo() + (S.s_hi() - S.s_lo()) * static_cast<double>(i) / (s_points - 1);
    std::vector<double> v(static_cast<std::size_t>(angle_dims));
    std::vector<double> x(static_cast<std::size_t>(n) + 1);
    std::string block;
    for (long long flat = 0; flat < v_total; ++flat) {
      long long rest = flat;
      for (int j = angle_dims - 1; j >= 0; --j) {
        const long long step_idx = rest % v_points;
        rest /= v_points;
        v[static_cast<std::size_t>(j)] =
            2.0 * std::numbers::pi * static_cast<double>(step_idx) / v_points;
      }
      S.embed_point(s, v, x);
      block += float17(s);
      for (double vj : v) block += ',' + float17(vj);
      for (double xj : x) block += ',' + float17(xj);
      block += '\n';
    }
    blocks[i] = std::move(block);
  });

  std::string out = std::move(header);
  for (std::string& b : blocks) out += b;
  return out;
}

std::string solve_csv(const EinsteinTypeStructure& st) {
  std::string out = "s,lambda,mu,u,du\n";
  auto row = [&out, &st](double s) {
    const LambdaMu lm = resolve_lambda_mu(st, s);
    double u = 0.0, du = 0.0;
    switch (st.u().mode()) {
      case UMode::constant:
      case UMode::base_radial: {
        const Jet2 j = st.is_slice() ? Jet2::constant(0.0)
                                     : st.u().radial_jet(st.surface(), s);
        u = j.v;
        du = j.d1;
        break;
      }
      case UMode::fiber_linear:
        u = st.u().c5();  // value along the v = 0 profile curve
        break;
      case UMode::isometric_identity:
        break;  // not a real-valued map; columns stay 0
    }
    out += float17(s) + ',' + float17(lm.lambda) + ',' + float17(lm.mu) + ',' +
           float17(u) + ',' + float17(du) + '\n';
  };
  if (st.is_slice()) {
    row(st.slice().t0);
  } else {
    for (int i = 0; i < st.surface().grid_size(); ++i) row(st.surface().node(i));
  }
  return out;
}

std::string margins_csv(const std::vector<MarginRow>& rows) {
  std::string out =
      "s,H,phi2,logf_prime,H_margin,upper_margin,map_triviality_margin,"
      "discriminant,rho,rho_low,rho_high,rho_outside,ambient_margin\n";
  for (const MarginRow& r : rows) {
    out += float17(r.s) + ',' + float17(r.mean_curv) + ',' + float17(r.phi_norm2) + ',' +
           float17(r.log_f_prime) + ',' + float17(r.bound_low) + ',' +
           float17(r.bound_high) + ',' + float17(r.map_triviality) + ',' +
           float17(r.discriminant) + ',' + float17(r.rho) + ',' + float17(r.rho_low) +
           ',' + float17(r.rho_high) + ',' + (r.rho_outside ? "1" : "0") + ',' +
           float17(r.ambient_margin) + '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file '" + path + "'");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw ConfigError("failed writing '" + path + "'");
}

}  // namespace etl::report
