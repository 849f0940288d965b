#include "doctest.h"

#include "kenstat/catalog.hpp"

using namespace kenstat;

namespace {

// R(X,Y)Z = k (g(Y,Z) X - g(X,Z) Y) for a space of constant curvature k.
Vec space_form(double k, const Mat& g, const Vec& x, const Vec& y, const Vec& z) {
  return k * (inner(g, y, z) * x - inner(g, x, z) * y);
}

Vec random_vec(Rng& rng, int n) { return rng.normal_vec(n); }

}  // namespace

TEST_CASE("flat space has zero curvature") {
  AmbientSpace e = make_manifold("euclidean(3)");
  Rng rng(1);
  for (const auto& p : sample_points(e.manifold, 10, 3)) {
    CurvatureSample cs = curvature_sample(e.manifold, p);
    CHECK(cs.r.max_abs() < 1e-9);
    CHECK(cs.s.max_abs() < 1e-9);
    Vec a = random_vec(rng, 3), b = random_vec(rng, 3);
    CHECK(sectional_curvature(cs, a, b) == doctest::Approx(0.0));
    CHECK(std::abs(ricci_curvature(cs, a, CurvatureKind::levi_civita)) < 1e-9);
    CHECK(jacobi_operator(cs, a, b).norm() < 1e-9);
  }
}

TEST_CASE("round sphere matches the unit space form") {
  StatisticalManifold m = round_sphere(2);
  Rng rng(2);
  for (const auto& p : sample_points(m, 20, 4)) {
    CurvatureSample cs = curvature_sample(m, p);
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
      Vec x = random_vec(rng, 2), y = random_vec(rng, 2), z = random_vec(rng, 2);
      worst = std::max(worst, (cs.apply(CurvatureKind::levi_civita, x, y, z) - space_form(1.0, cs.g, x, y, z)).norm());
    }
    CHECK(worst < 1e-6);
    CHECK(sectional_curvature(cs, Vec::Unit(2, 0), Vec::Unit(2, 1)) == doctest::Approx(1.0).epsilon(1e-5));
  }
  StatisticalManifold s3 = round_sphere(3);
  for (const auto& p : sample_points(s3, 5, 4)) {
    CurvatureSample cs = curvature_sample(s3, p);
    CHECK(ricci_curvature(cs, Vec::Unit(3, 1), CurvatureKind::levi_civita) == doctest::Approx(2.0).epsilon(1e-5));
  }
}

TEST_CASE("curvature arrays are antisymmetric in the plane slots") {
  for (const auto& spec : {"hyperbolic_kenmotsu(1,1)", "example_3_4(1,1)"}) {
    AmbientSpace a = make_manifold(spec);
    for (const auto& p : sample_points(a.manifold, 5, 1)) {
      CurvatureSample cs = curvature_sample(a.manifold, p);
      CHECK(cs.r.antisymmetry_residual(2, 3) < 1e-12);
      CHECK(cs.s.antisymmetry_residual(2, 3) < 1e-12);
    }
  }
}

TEST_CASE("statistical curvature agrees along both construction paths") {
  for (const auto& spec : sweep_manifolds()) {
    CAPTURE(spec);
    AmbientSpace a = make_manifold(spec);
    double worst = 0.0;
    for (const auto& p : sample_points(a.manifold, 50, 13)) worst = std::max(worst, curvature_sample(a.manifold, p).dual_path_residual());
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("K = 0 reduces statistical curvature to the Riemannian one") {
  AmbientSpace h = make_manifold("hyperbolic_kenmotsu(1)");
  const ChartPoint p{0.1, 0.2, -0.1};
  CurvatureSample cs = curvature_sample(h.manifold, p);
  CHECK(max_abs_diff(cs.s, cs.r_lc) < 1e-12);
  Rng rng(4);
  Vec e = random_vec(rng, 3), f = random_vec(rng, 3), g = random_vec(rng, 3);
  StatisticalCurvatureValue v = statistical_curvature(h.manifold, p, e, f, g);
  CHECK(v.consistent);
  CHECK((v.value - connection_curvature(h.manifold, Connection::levi_civita, p, e, f, g)).norm() < 1e-6);
}

TEST_CASE("hyperbolic lift has constant curvature -1") {
  for (int s : {1, 2}) {
    AmbientSpace h = make_manifold("hyperbolic_kenmotsu(" + std::to_string(s) + ")");
    REQUIRE(h.c_bar());
    CHECK(*h.c_bar() == -1.0);
    const int n = 2 * s + 1;
    Rng rng(s);
    for (const auto& p : sample_points(h.manifold, 20, 5)) {
      CurvatureSample cs = curvature_sample(h.manifold, p);
      // model tensor at c = -1 is the space form with k = -1; check independently
      for (int t = 0; t < 3; ++t) {
        Vec x = random_vec(rng, n), y = random_vec(rng, n), z = random_vec(rng, n);
        CHECK((cs.apply(CurvatureKind::statistical, x, y, z) - space_form(-1.0, cs.g, x, y, z)).norm() < 1e-5);
      }
      const Vec xi = h.contact()->xi(p.coords());
      CHECK(sectional_curvature(cs, random_vec(rng, n), random_vec(rng, n)) == doctest::Approx(-1.0).epsilon(1e-5));
      CHECK(sectional_curvature(cs, xi, random_vec(rng, n)) == doctest::Approx(-1.0).epsilon(1e-5));
      CHECK(ricci_curvature(cs, xi, CurvatureKind::statistical) == doctest::Approx(-2.0 * s).epsilon(1e-5));

      Frame fr = complete_frame({p, xi}, cs.g, 3);
      const Vec e = fr.vectors[1];
      CHECK(ricci_curvature(cs, e, CurvatureKind::statistical) == doctest::Approx(-2.0 * s).epsilon(1e-5));
      CHECK((jacobi_operator(cs, xi, e) + e).norm() < 1e-5);
      CHECK(jacobi_operator(cs, e, e).norm() < 1e-12);
    }
  }
}

TEST_CASE("degenerate planes are rejected") {
  AmbientSpace h = make_manifold("hyperbolic_kenmotsu(1)");
  CurvatureSample cs = curvature_sample(h.manifold, ChartPoint{0.0, 0.0, 0.0});
  Vec e = Vec::Unit(3, 0);
  try {
    sectional_curvature(cs, e, 2.0 * e);
    FAIL("expected degenerate plane");
  } catch (const GeometryError& err) {
    CHECK(err.kind() == GeometryError::Kind::degenerate_plane);
  }
}

TEST_CASE("structure Jacobi operator derivative") {
  SUBCASE("Euclidean with constant field") {
    AmbientSpace e = make_manifold("euclidean(3)");
    VectorFieldFn xi = [](const Vec&) { return Vec(Vec::Unit(3, 2)); };
    const ChartPoint p{0.1, 0.2, 0.3};
    Frame fr = complete_frame({p, Vec::Unit(3, 2)}, Mat::Identity(3, 3), 1);
    JacobiParallelism j = jacobi_parallelism_residual(e.manifold, xi, p, fr);
    CHECK(j.residual < 1e-9);
  }
  SUBCASE("hyperbolic lift with beta = 0") {
    // R = R^g with curvature -1, so (nabla_F R_xi) E = g(E,F) xi for fiber E, F:
    // unit fiber vectors give a residual of exactly 1, all along xi.
    AmbientSpace h = make_manifold("hyperbolic_kenmotsu(1,0)");
    for (const auto& p : sample_points(h.manifold, 5, 9)) {
      const Mat g = h.manifold.metric_at(p);
      Frame fr = complete_frame({p, h.contact()->xi(p.coords())}, g, 2);
      JacobiParallelism j = jacobi_parallelism_residual(h.manifold, h.contact()->xi, p, fr);
      CHECK(j.residual == doctest::Approx(1.0).epsilon(1e-4));
      CHECK(j.transverse < 1e-4);
    }
  }
  SUBCASE("beta = 1 lifts") {
    for (const auto& spec : {"hyperbolic_kenmotsu(1,1)", "example_3_4(1,1)"}) {
      CAPTURE(spec);
      AmbientSpace a = make_manifold(spec);
      for (const auto& p : sample_points(a.manifold, 5, 9)) {
        Frame fr = complete_frame({p, a.contact()->xi(p.coords())}, a.manifold.metric_at(p), 2);
        CHECK(jacobi_parallelism_residual(a.manifold, a.contact()->xi, p, fr).residual < 1e-4);
        // dual connection picks up K* = -K: the factor becomes (-beta - 1)
        CHECK(jacobi_parallelism_residual(a.manifold, a.contact()->xi, p, fr, Connection::dual).residual > 0.5);
      }
    }
  }
}
