#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "etl/einstein.hpp"
#include "etl/fixtures.hpp"

namespace etl::oracle {

/// One closed-form-vs-oracle comparison record.
struct OracleRecord {
  double s = 0.0;
  std::string quantity;
  double closed_form = 0.0;
  double oracle_value = 0.0;
  double abs_err = 0.0;

  double rel_err() const;
};

/// Closed-form curvature data of a rotational surface against the
/// finite-difference machinery: Ricci (Richardson extrapolated), connection
/// coefficients, sigma' and the Riemann symmetry residuals.
std::vector<OracleRecord> compare_surface(const RotationalSurface& S, int points,
                                          double step,
                                          scan::Exec exec = scan::Exec::parallel);

/// Ambient sectional curvatures against the finite-difference oracle run in
/// the ambient model chart.
std::vector<OracleRecord> compare_ambient(const Ambient& a, int points, double step);

}  // namespace etl::oracle

namespace etl {

/// Height-Hessian identity records: the extrinsic route vs intrinsic radial
/// calculus at `points` grid positions.
std::vector<oracle::OracleRecord> compare_hessian_identity(const EinsteinTypeStructure& st,
                                                           int points);

}  // namespace etl

namespace etl::report {

/// 17-significant-digit decimal form; fixed formatting for byte-stable CSVs.
std::string float17(double v);

nlohmann::json residual_to_json(const ResidualReport& report);
nlohmann::json oracle_to_json(const std::vector<oracle::OracleRecord>& records,
                              double rel_tol);
nlohmann::json comparisons_to_json(const std::string& fixture_name,
                                   const std::vector<fixtures::ReferenceComparison>& comps,
                                   const std::vector<std::string>& notes);

std::string profile_csv(const RotationalSurface& S);

/// Mesh rows ordered row-major in (s, v1, ..., v_{n-1}); s sweeps the
/// closed range with s_points samples, every angle sweeps [0, 2*pi) with
/// v_points samples. Data rows = s_points * v_points^(n-1).
std::string mesh_csv(const RotationalSurface& S, int s_points, int v_points,
                     scan::Exec exec = scan::Exec::parallel);

std::string solve_csv(const EinsteinTypeStructure& st);
std::string margins_csv(const std::vector<MarginRow>& rows);

void write_file(const std::string& path, const std::string& content);

}  // namespace etl::report
