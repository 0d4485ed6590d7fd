#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "etl/intrinsic.hpp"
#include "test_support.hpp"

using namespace etl;

namespace {

RotationalSurface build(const char* theta, const char* f, double s_lo, double s_hi,
                        double zeta0, double beta0, int m = 64, int n = 2, int c = 0) {
  Ambient ambient(Expression::parse(f, "t"), -50.0, 50.0, c, n);
  AngleProfile profile{Expression::parse(theta, "s"), s_lo, s_hi};
  return RotationalSurface::build(std::move(ambient), std::move(profile), zeta0, beta0, m);
}

RotationalSurface gudermannian(int n = 2, int m = 120) {
  const double s_lo = 0.25;
  return build("sqrt(1 - tanh(s)^2)", "1", s_lo, 3.25, std::log(std::cosh(s_lo)),
               2.0 * std::atan(std::tanh(0.5 * s_lo)), m, n);
}

double arc_length_defect(const RotationalSurface& S) {
  double worst = 0.0;
  for (int i = 0; i < S.grid_size(); ++i) {
    const ProfileSample p = S.at(S.node(i));
    worst = std::max(worst,
                     std::fabs(p.zeta_s * p.zeta_s + p.f * p.f * p.beta_s * p.beta_s - 1.0));
  }
  return worst;
}

}  // namespace

TEST_CASE("cylinder: constant integrands") {
  const RotationalSurface S = build("0", "1", 0.0, 3.0, 0.0, 1.0, 120, 3);
  const ProfileSample p = S.at(1.7);
  CHECK(p.zeta == doctest::Approx(1.7).epsilon(1e-14));
  CHECK(p.beta == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.sigma == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.sigma_s == 0.0);
  CHECK(p.sigma_ss == 0.0);

  const AxiTensor a = S.shape_operator(1.7);
  CHECK(a.ss == 0.0);
  CHECK(a.vv_k == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(S.mean_curvature(1.7) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(S.traceless_phi_norm2(1.7) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));

  const HeightInfo h = S.height_and_gradient(1.7);
  CHECK(h.grad_norm2 == 1.0);
  CHECK(h.h_s == 1.0);

  // Embedding example: n = 3 gives 2 angles; at v = 0 the first fiber
  // coordinate carries beta.
  const double v[2] = {0.0, 0.0};
  const auto x = S.embed_point(2.0, std::span<const double>(v, 2));
  CHECK(x[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::fabs(x[2]) < 1e-15);
  CHECK(std::fabs(x[3]) < 1e-15);

  // Surface case: one angle, three coordinates.
  const RotationalSurface S2 = build("0", "1", 0.0, 3.0, 0.0, 1.0, 120, 2);
  const double v0 = 0.0;
  const auto y = S2.embed_point(2.0, std::span<const double>(&v0, 1));
  CHECK(y.size() == 3);
  CHECK(y[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(y[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::fabs(y[2]) < 1e-15);
  const double bad[2] = {0.0, 0.0};
  CHECK_THROWS_AS(S2.embed_point(2.0, std::span<const double>(bad, 2)),
                  std::invalid_argument);
}

TEST_CASE("profile integrals match closed antiderivatives (log cosh and gd)") {
  const RotationalSurface S = gudermannian();
  // s = 1 is a grid node by construction (0.25 + 30*0.025).
  const ProfileSample p = S.at(1.0);
  CHECK(p.zeta == doctest::Approx(testsup::kLogCosh1).epsilon(1e-10));
  CHECK(p.beta == doctest::Approx(testsup::kGd1).epsilon(1e-10));
  CHECK(p.sigma == doctest::Approx(testsup::kGd1).epsilon(1e-10));
  CHECK(p.theta == doctest::Approx(testsup::kSech1).epsilon(1e-13));

  const HeightInfo h = S.height_and_gradient(1.0);
  CHECK(h.h == doctest::Approx(testsup::kLogCosh1).epsilon(1e-10));
  CHECK(h.grad_norm2 == doctest::Approx(testsup::kTanhSq1).epsilon(1e-12));

  // Off-node interpolation keeps quadrature-level accuracy.
  CHECK(S.at(1.01).zeta == doctest::Approx(std::log(std::cosh(1.01))).epsilon(1e-9));
  CHECK(S.at(1.0125).beta ==
        doctest::Approx(2.0 * std::atan(std::tanh(0.50625))).epsilon(1e-9));
}

TEST_CASE("shape operator of the gudermannian surface at s = 1") {
  const RotationalSurface S = gudermannian();
  const AxiTensor a = S.shape_operator(1.0);
  // theta' = -theta sqrt(1-theta^2) makes the radial eigenvalue equal theta.
  CHECK(a.ss == doctest::Approx(testsup::kSech1).epsilon(1e-10));
  CHECK(a.vv_k == doctest::Approx(testsup::kShapeVv1).epsilon(1e-10));
  CHECK(a.vv_k == a.vv_perp);
  CHECK(S.mean_curvature(1.0) == doctest::Approx(testsup::kMeanCurv1N2).epsilon(1e-10));
}

TEST_CASE("constant angle gives a cone: sigma linear, one flat principal curvature") {
  const double theta0 = 0.6;
  const double q = std::sqrt(1.0 - theta0 * theta0);
  const RotationalSurface S =
      build("0.6", "1", 0.5, 4.5, q * 0.5, theta0 * 0.5 + 1.0, 80, 3);
  CHECK(S.at(2.0).sigma == doctest::Approx(theta0 * 2.0 + 1.0).epsilon(1e-13));
  CHECK(S.at(3.1).sigma == doctest::Approx(theta0 * 3.1 + 1.0).epsilon(1e-13));
  const AxiTensor a = S.shape_operator(2.0);
  CHECK(std::fabs(a.ss) < 1e-15);
  CHECK(a.vv_k == doctest::Approx(q / (theta0 * 2.0 + 1.0)).epsilon(1e-13));
}

TEST_CASE("squared-cosine profile: gradient norm reaches 1 at the equator") {
  const RotationalSurface S =
      build("cos(s)^2", "1", 0.3, 2.8, 0.0, 0.5 * 0.3 + 0.25 * std::sin(0.6), 100, 3);
  // pi/2 is not a node; |theta| there is ~0 and grad_norm2 ~ 1.
  const HeightInfo h = S.height_and_gradient(std::numbers::pi / 2.0);
  CHECK(h.grad_norm2 == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("embedding of the gudermannian surface") {
  const RotationalSurface S = gudermannian();
  const double v = std::numbers::pi / 2.0;
  const auto x = S.embed_point(1.0, std::span<const double>(&v, 1));
  CHECK(x[0] == doctest::Approx(testsup::kLogCosh1).epsilon(1e-10));
  CHECK(std::fabs(x[1]) < 1e-12);
  CHECK(x[2] == doctest::Approx(testsup::kGd1).epsilon(1e-10));

  // Rotational invariance: fiber radius independent of the angle.
  for (double angle : {0.1, 1.3, 2.9, 4.4}) {
    const auto y = S.embed_point(1.0, std::span<const double>(&angle, 1));
    CHECK(std::hypot(y[1], y[2]) == doctest::Approx(testsup::kGd1).epsilon(1e-12));
  }
}

TEST_CASE("arc-length identity holds at every node") {
  CHECK(arc_length_defect(gudermannian()) < 1e-10);
  CHECK(arc_length_defect(build("0", "1", 0.0, 3.0, 0.0, 1.0, 64, 3)) < 1e-10);
  CHECK(arc_length_defect(build("cos(s)^2", "1", 0.3, 2.8, 0.0, 0.337, 100, 3)) < 1e-10);
  // Nontrivial warping: constant angle in the hyperbolic model.
  CHECK(arc_length_defect(build("0.3", "exp(t)", 0.2, 2.2, 0.0, 1.0, 64,
                                3)) < 1e-10);
}

TEST_CASE("chain-rule sigma' matches centered differences of anchored sigma") {
  const RotationalSurface surfaces[] = {
      gudermannian(),
      build("cos(s)^2", "1", 0.3, 2.8, 0.0, 0.337, 100, 3),
      build("0.3", "exp(t)", 0.2, 2.2, 0.0, 1.0, 64, 3),
  };
  for (const RotationalSurface& S : surfaces) {
    for (int i = 2; i < S.grid_size() - 2; i += 7) {
      const double s = S.node(i);
      const ProfileSample p = S.at(s);
      const AnchoredProfile prof = S.anchored(s);
      const double fd = (prof.sigma(s + 1e-4) - prof.sigma(s - 1e-4)) / 2e-4;
      REQUIRE(std::fabs(p.sigma_s - fd) < 1e-6 * (1.0 + std::fabs(p.sigma_s)));
      const double fd2 =
          (prof.sigma(s + 1e-4) - 2.0 * prof.sigma(s) + prof.sigma(s - 1e-4)) / 1e-8;
      REQUIRE(std::fabs(p.sigma_ss - fd2) < 1e-5 * (1.0 + std::fabs(p.sigma_ss)));
    }
  }
}

TEST_CASE("radial shape eigenvalue equals the independent jet recomputation") {
  const RotationalSurface S = gudermannian();
  const Expression theta = Expression::parse("sqrt(1 - tanh(s)^2)", "s");
  for (int i = 0; i < S.grid_size(); i += 5) {
    const double s = S.node(i);
    const Jet2 th = theta.eval_jet2(s);
    // f == 1: the radial eigenvalue reduces to -theta'/sqrt(1-theta^2).
    const double expected = -th.d1 / std::sqrt(1.0 - th.v * th.v);
    REQUIRE(S.shape_operator(s).ss == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("gauss equation for surfaces: K = K_ambient(tangent) + det A") {
  struct Case {
    RotationalSurface S;
  };
  const RotationalSurface surfaces[] = {
      gudermannian(2, 120),
      build("0", "1", 0.0, 3.0, 0.0, 1.0, 64, 2),
      build("0.6", "1", 0.5, 4.5, 0.4, 1.3, 64, 2),
      build("cos(s)^2", "1", 0.3, 2.8, 0.0, 0.337, 100, 2),
      build("0.3", "exp(t)", 0.2, 2.2, 0.0, 1.0, 64, 2),
  };
  for (const RotationalSurface& S : surfaces) {
    for (int i = 2; i < S.grid_size() - 2; i += std::max(1, S.grid_size() / 20)) {
      const double s = S.node(i);
      const ProfileSample p = S.at(s);
      const AxiTensor a = S.shape_operator(s);
      const SectionalPair amb = S.ambient().sectional(p.zeta);
      const double grad2 = 1.0 - p.theta * p.theta;
      const double k_ambient = grad2 * amb.k_radial + p.theta * p.theta * amb.k_fiber;
      const double k_closed = k_ambient + a.ss * a.vv_k;

      const auto chart = oracle::surface_chart(S, s);
      double point[4] = {s, 0.0, 0.0, 0.0};
      const double k_fd = oracle::sectional_fd(chart, point, 0, 1, 1e-4);
      REQUIRE(std::fabs(k_fd - k_closed) < 1e-6 * (1.0 + std::fabs(k_closed)));
    }
  }
}

TEST_CASE("admissibility violations are rejected") {
  // |theta| = 1 at the left end of the range.
  CHECK_THROWS_AS(build("sqrt(1 - tanh(s)^2)", "1", 0.0, 3.0, 0.0, 0.1), NumericError);
  // sigma = f beta <= 0 at the start.
  CHECK_THROWS_AS(build("0.5", "1", 0.5, 3.0, 0.0, 0.0), NumericError);
  // zeta exits the ambient interval.
  auto escape = [] {
    Ambient ambient(Expression::parse("1", "t"), 0.0, 1.0, 0, 2);
    AngleProfile profile{Expression::parse("0", "s"), 0.0, 3.0};
    return RotationalSurface::build(std::move(ambient), std::move(profile), 0.5, 1.0, 64);
  };
  CHECK_THROWS_AS(escape(), NumericError);
  // Grid too coarse.
  CHECK_THROWS_AS(build("0", "1", 0.0, 1.0, 0.0, 1.0, 8), std::invalid_argument);
  // Unreachable quadrature tolerance: the step controller bottoms out.
  auto hopeless = [] {
    Ambient ambient(Expression::parse("1", "t"), -50.0, 50.0, 0, 2);
    AngleProfile profile{Expression::parse("sqrt(1 - tanh(s)^2)", "s"), 0.25, 3.25};
    return RotationalSurface::build(std::move(ambient), std::move(profile),
                                    std::log(std::cosh(0.25)),
                                    2.0 * std::atan(std::tanh(0.125)), 64, 1e-300);
  };
  CHECK_THROWS_AS(hopeless(), NumericError);
  // Query outside the built range.
  const RotationalSurface S = build("0", "1", 0.0, 1.0, 0.0, 1.0, 32);
  CHECK_THROWS_AS(S.at(2.0), DomainError);
  CHECK_THROWS_AS(S.shape_operator(-0.5), DomainError);
}

TEST_CASE("umbilical points have vanishing traceless second fundamental form") {
  // Spherical cap: theta = -sin(s) with zeta = sin s, sigma = cos s on a
  // range where cos stays positive. The cap is totally umbilical (A = Id).
  const RotationalSurface S = build("-sin(s)", "1", 0.4, std::numbers::pi / 2 - 0.1,
                                    std::sin(0.4), std::cos(0.4), 64, 3);
  for (double s : {0.5, 0.8, 1.1, 1.4}) {
    const AxiTensor a = S.shape_operator(s);
    CHECK(a.ss == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(a.ss == doctest::Approx(a.vv_k).epsilon(1e-9));
    CHECK(std::fabs(S.traceless_phi_norm2(s)) < 1e-9);
  }
}
