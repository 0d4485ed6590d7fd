#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "etl/einstein.hpp"

namespace etl::fixtures {

/// Named numeric parameters with per-fixture defaults (n, alpha, theta0,
/// c1, ...). Unknown keys are rejected by make().
struct Params {
  std::map<std::string, double> values;

  double get(const std::string& key, double fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  }
};

/// A worked example bundled with its reference closed forms (the published
/// lambda/mu/u/h displays) for comparison runs. The reference forms are data
/// under test, never the verification target: all gates run against the
/// solver/oracle pipeline.
struct Fixture {
  std::string name;
  EinsteinTypeStructure structure;
  std::optional<Expression> ref_lambda, ref_mu, ref_u, ref_h;
  // Constants reproducing ref_u through solve_u_base (profile-ODE route).
  std::optional<double> u_c2, u_c3;
  std::vector<std::string> notes;
};

/// Fixture names accepted by make(): sphere_slice, gudermannian,
/// constant_angle, fiber_map, cylinder, cone.
std::vector<std::string> names();

Fixture make(const std::string& name, const Params& params = {});

struct ReferenceComparison {
  std::string quantity;
  double max_abs_diff = 0.0;
  double mean_abs_diff = 0.0;
  std::string note;
};

/// Evaluate the fixture's reference forms against the solver output over the
/// grid. The height comparison estimates the free additive constant by least
/// squares before measuring deviation.
std::vector<ReferenceComparison> compare_with_reference(const Fixture& f);

}  // namespace etl::fixtures
