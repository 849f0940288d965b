#include "doctest.h"

#include "kenstat/catalog.hpp"
#include "kenstat/chen_ricci.hpp"

using namespace kenstat;

namespace {

// Levi-Civita symbols of e^{2a}(dx^2 + dy^2) + da^2, worked out by hand.
MultiArray warped_christoffels(double alpha) {
  MultiArray g({3, 3, 3});
  g(2, 0, 0) = g(2, 1, 1) = -std::exp(2 * alpha);
  g(0, 0, 2) = g(0, 2, 0) = g(1, 1, 2) = g(1, 2, 1) = 1.0;
  return g;
}

Mat warped_metric(double alpha) {
  Mat g = Mat::Identity(3, 3);
  g(0, 0) = g(1, 1) = std::exp(2 * alpha);
  return g;
}

Vec normal_projection(const Mat& g, const Mat& jac, const Vec& v) {
  const Mat ind = jac.transpose() * g * jac;
  return v - jac * ind.ldlt().solve(jac.transpose() * g * v);
}

}  // namespace

TEST_CASE("totally geodesic planes") {
  for (const auto& spec : {"euclidean_plane()", "xalpha_plane(0)"}) {
    CAPTURE(spec);
    Immersion imm = make_immersion(spec);
    for (const auto& p : sample_source_points(imm, 10, 3)) {
      SubmanifoldGeometry geo = induced_geometry(imm, p);
      CHECK(geo.h_coord.max_abs() < 1e-9);
      CHECK(geo.h_star_coord.max_abs() < 1e-9);
      MeanCurvatures mc = mean_curvatures(geo);
      CHECK(mc.h_norm_sq < 1e-18);
      CHECK(mc.h0_norm_sq < 1e-18);
      ShapeOperators so = shape_operators(imm, geo, geo.normal_frame.vectors[0]);
      CHECK(so.a.norm() < 1e-9);
      CHECK(so.a_star.norm() < 1e-9);
      CHECK(so.weingarten < 1e-6);
      EqualityResiduals eq = equality_case_check(geo);
      CHECK(eq.max() < 1e-9);
    }
  }
}

TEST_CASE("fiber slice is totally umbilical with h = -g xi") {
  for (double alpha0 : {0.0, 0.2, -0.35}) {
    Immersion imm = make_immersion("fiber_slice(1," + std::to_string(alpha0) + ",0)");
    for (const auto& p : sample_source_points(imm, 10, 5)) {
      SubmanifoldGeometry geo = induced_geometry(imm, p);
      const double w = std::exp(2 * alpha0);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          CHECK(std::abs(geo.h_coord(2, a, b) + (a == b ? w : 0.0)) < 1e-9);
          CHECK(std::abs(geo.h_coord(0, a, b)) + std::abs(geo.h_coord(1, a, b)) < 1e-9);
        }
      MeanCurvatures mc = mean_curvatures(geo);
      CHECK((mc.h_mean + Vec::Unit(3, 2)).norm() < 1e-9);
      CHECK((mc.h_star_mean + Vec::Unit(3, 2)).norm() < 1e-9);
      CHECK(mc.h_norm_sq == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(mc.g_h_hstar == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(mc.polarization_residual < 1e-10);

      ShapeOperators so = shape_operators(imm, geo, Vec::Unit(3, 2));
      CHECK((so.a_star + Mat::Identity(2, 2)).norm() < 1e-9);
      CHECK((so.a + Mat::Identity(2, 2)).norm() < 1e-9);
      CHECK(so.weingarten < 1e-6);
      CHECK(so.weingarten_star < 1e-6);

      const Mat& g = geo.induced_g;
      for (int i = 0; i < 2; ++i) {
        PcSplit pc = pc_decomposition(geo, *imm.ambient.contact(), Vec::Unit(2, i));
        CHECK(pc.c_norm_sq < 1e-18);
        CHECK(pc.p_norm_sq == doctest::Approx(g(i, i)).epsilon(1e-12));
      }
      CHECK(equality_case_check(geo).max() < 1e-9);
    }
  }
}

TEST_CASE("second fundamental form of the perturbed graph against a hand computation") {
  Immersion imm = make_immersion("perturbed_graph(0.3,0)");
  for (const auto& p : sample_source_points(imm, 10, 8)) {
    SubmanifoldGeometry geo = induced_geometry(imm, p);
    const double x = p[0], alpha = 0.3 * x * x;
    Mat jac = Mat::Zero(3, 2);
    jac(0, 0) = 1.0;
    jac(1, 1) = 1.0;
    jac(2, 0) = 0.6 * x;
    const Mat gb = warped_metric(alpha);
    const MultiArray gam = warped_christoffels(alpha);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        Vec second = Vec::Zero(3);
        if (a == 0 && b == 0) second[2] = 0.6;
        const Vec nab = second + apply_bilinear(gam, jac.col(a), jac.col(b));
        const Vec expect = normal_projection(gb, jac, nab);
        const Vec got = geo.h(Vec::Unit(2, a), Vec::Unit(2, b));
        CHECK((got - expect).norm() < 1e-7);
      }
    CHECK(geo.split_residual < 1e-9);
  }
}

TEST_CASE("shape operator pairing and Weingarten formula on catalog immersions") {
  for (const auto& spec : sweep_immersions()) {
    CAPTURE(spec);
    Immersion imm = make_immersion(spec);
    for (const auto& p : sample_source_points(imm, 5, 2)) {
      SubmanifoldGeometry geo = induced_geometry(imm, p);
      CHECK(geo.split_residual < 1e-9);
      CHECK(geo.h_coord.symmetry_residual(1, 2) < 1e-9);
      CHECK(orthonormality_residual(geo.tangent_frame, geo.g_bar) < 1e-10);
      CHECK(mean_curvatures(geo).polarization_residual < 1e-10);
      for (const Vec& u : geo.normal_frame.vectors) {
        ShapeOperators so = shape_operators(imm, geo, u);
        CHECK(so.weingarten < 1e-5);
        CHECK(so.weingarten_star < 1e-5);
        // g(A_U E, F) = g(h*(E, F), U)
        for (int a = 0; a < geo.src_dim(); ++a)
          for (int b = 0; b < geo.src_dim(); ++b) {
            const Vec ea = Vec::Unit(geo.src_dim(), a), eb = Vec::Unit(geo.src_dim(), b);
            CHECK(std::abs(inner(geo.induced_g, so.a * ea, eb) - inner(geo.g_bar, geo.h_star(ea, eb), u)) < 1e-9);
            CHECK(std::abs(inner(geo.induced_g, so.a_star * ea, eb) - inner(geo.g_bar, geo.h(ea, eb), u)) < 1e-9);
          }
      }
    }
  }
}

TEST_CASE("tangential vectors are rejected as normals") {
  Immersion imm = make_immersion("fiber_slice(1,0,0)");
  SubmanifoldGeometry geo = induced_geometry(imm, ChartPoint{0.1, 0.2});
  try {
    shape_operators(imm, geo, Vec::Unit(3, 0));
    FAIL("expected invalid normal");
  } catch (const GeometryError& e) {
    CHECK(e.kind() == GeometryError::Kind::invalid_normal);
  }
}

TEST_CASE("Gauss equations") {
  for (const auto& spec : {"fiber_slice(1,0,0)", "perturbed_graph(0.3,1)", "tilted_plane(0.7,0)", "euclidean_plane()"}) {
    CAPTURE(spec);
    Immersion imm = make_immersion(spec);
    Rng rng(4);
    for (const auto& p : sample_source_points(imm, 30, 6)) {
      SubmanifoldGeometry geo = induced_geometry(imm, p);
      CurvatureSample amb = curvature_sample(imm.ambient.manifold, geo.ambient_point);
      CurvatureSample intr = intrinsic_curvature(imm, geo);
      const int k = geo.src_dim();
      GaussResiduals r = gauss_equation_residual(imm, geo, amb, intr, rng.normal_vec(k), rng.normal_vec(k),
                                                 rng.normal_vec(k), rng.normal_vec(k));
      CHECK(r.res < 1e-5);
      CHECK(r.res_star < 1e-5);
      CHECK(r.res_model.has_value() == imm.ambient.c_bar().has_value());
      if (r.res_model) CHECK(*r.res_model < 1e-5);
    }
  }
}

TEST_CASE("xalpha plane is anti-invariant") {
  Immersion imm = make_immersion("xalpha_plane(0)");
  for (const auto& p : sample_source_points(imm, 5, 1)) {
    SubmanifoldGeometry geo = induced_geometry(imm, p);
    PcSplit dx = pc_decomposition(geo, *imm.ambient.contact(), Vec::Unit(2, 0));
    CHECK(dx.p_norm_sq < 1e-18);
    CHECK(dx.c_norm_sq == doctest::Approx(std::exp(2 * p[1])).epsilon(1e-12));
    PcSplit xi = pc_decomposition(geo, *imm.ambient.contact(), Vec::Unit(2, 1));
    CHECK(xi.p_norm_sq + xi.c_norm_sq < 1e-18);
    CHECK(p_norm_sq(geo, *imm.ambient.contact()) < 1e-18);
  }
}

TEST_CASE("invariance classification") {
  auto kind = [](const std::string& spec) {
    Immersion imm = make_immersion(spec);
    return classify_invariance(imm, sample_source_points(imm, 10, 1)).kind;
  };
  CHECK(kind("fiber_slice(1,0,0)") == InvarianceClass::invariant);
  CHECK(kind("fiber_slice(2,0.2,0)") == InvarianceClass::invariant);
  CHECK(kind("invariant_slice(0)") == InvarianceClass::invariant);
  CHECK(kind("xalpha_plane(0)") == InvarianceClass::anti_invariant);
  CHECK(kind("tilted_plane(0.7,0)") == InvarianceClass::generic);
  Immersion tilted = make_immersion("tilted_plane(0.7,0)");
  InvarianceReport r = classify_invariance(tilted, sample_source_points(tilted, 10, 1));
  CHECK(r.max_c > 0.1);
  CHECK(r.max_p > 0.1);
}

TEST_CASE("umbilical submanifolds of the c = -1 model") {
  SUBCASE("xalpha plane") {
    Immersion imm = make_immersion("xalpha_plane(0)");
    ConstantCurvatureReport r = constant_curvature_check(imm, sample_source_points(imm, 10, 2));
    CHECK(r.residual < 1e-5);
    CHECK(r.curvature_value == doctest::Approx(-1.0).epsilon(1e-9));
    // phi maps the plane into its normal bundle
    CHECK_FALSE(r.preconditions_hold);
  }
  SUBCASE("invariant slice meets every hypothesis") {
    Immersion imm = make_immersion("invariant_slice(0)");
    ConstantCurvatureReport r = constant_curvature_check(imm, sample_source_points(imm, 10, 2));
    CHECK(r.preconditions_hold);
    CHECK(r.residual < 1e-4);
    CHECK(r.curvature_value == doctest::Approx(-1.0).epsilon(1e-9));
  }
  SUBCASE("Euclidean ambient") {
    Immersion imm = make_immersion("euclidean_plane()");
    ConstantCurvatureReport r = constant_curvature_check(imm, sample_source_points(imm, 3, 2));
    CHECK_FALSE(r.preconditions_hold);
    CHECK_FALSE(r.preconditions.front().ok);
  }
}
