#pragma once

#include "kenstat/kenmotsu.hpp"

namespace kenstat {

using ImmersionMap = std::function<Vec(const Vec&)>;

struct Immersion {
  std::string name;
  int src_dim = 0;
  AmbientSpace ambient;
  ImmersionMap map;
  DomainPredicate src_domain;
  SamplingBox src_box;
  /// Steps for the immersion's own derivatives and for the induced manifold.
  FdSteps fd;

  int ambient_dim() const { return ambient.manifold.dim; }
};

/// Columns d(iota)/du^a by finite differences.
Mat immersion_jacobian(const Immersion& imm, const Vec& u);

/// Statistical manifold on the source chart: metric iota^* g and difference
/// tensor equal to the tangential part of the ambient K. Its curvature is the
/// intrinsic curvature of the submanifold.
StatisticalManifold induced_manifold(const Immersion& imm);

/// Tangent vectors of N are given by source-chart components; ambient vectors
/// by ambient-chart components.
struct SubmanifoldGeometry {
  ChartPoint point;          // source chart
  ChartPoint ambient_point;  // iota(point)
  Mat jacobian;              // ambient_dim x src_dim
  Mat g_bar;
  Mat induced_g;
  Frame tangent_frame;       // ambient vectors, g_bar-orthonormal
  Mat tangent_src;           // column i: source components of tangent_frame[i]
  Frame normal_frame;
  MultiArray h_coord;        // (A, a, b): ambient component A of h(d_a, d_b)
  MultiArray h_star_coord;
  MultiArray connection;      // induced Christoffels (c, a, b) of nabla
  MultiArray connection_star;
  /// Decomposition identity |tangential + normal - nabla-bar| (max over a, b).
  double split_residual = 0.0;

  int src_dim() const { return static_cast<int>(jacobian.cols()); }
  int ambient_dim() const { return static_cast<int>(jacobian.rows()); }
  Vec push(const Vec& u) const { return jacobian * u; }
  Vec h(const Vec& x, const Vec& y) const;
  Vec h_star(const Vec& x, const Vec& y) const;
  Vec h0(const Vec& x, const Vec& y) const { return 0.5 * (h(x, y) + h_star(x, y)); }
  /// Tangential part of an ambient vector as source components.
  Vec tangential(const Vec& v) const;
  Vec normal_part(const Vec& v) const { return v - push(tangential(v)); }
};

/// Orthonormal tangent frame starting with `first_direction` when given.
SubmanifoldGeometry induced_geometry(const Immersion& imm, const ChartPoint& p, std::uint64_t seed = 0,
                                     const Vec& first_direction = Vec());

struct ShapeOperators {
  Mat a;       // A_U in source components: g(A_U E, F) = g_bar(h*(E,F), U)
  Mat a_star;  // A*_U:                     g(A*_U E, F) = g_bar(h(E,F), U)
  double weingarten = 0.0;       // |tan(nabla-bar_E U) + A_U E|, max over coordinate E
  double weingarten_star = 0.0;  // dual version
  Mat normal_connection;         // columns D^perp_{d_a} U (ambient vectors)
  Mat normal_connection_star;
};

/// Throws invalid_normal if U has a tangential part above tol * |U|.
ShapeOperators shape_operators(const Immersion& imm, const SubmanifoldGeometry& geom, const Vec& u,
                               double tol = 1e-8);

struct GaussResiduals {
  double res = 0.0;
  double res_star = 0.0;
  std::optional<double> res_model;
};

/// Intrinsic curvature of N at the geometry's point.
CurvatureSample intrinsic_curvature(const Immersion& imm, const SubmanifoldGeometry& geom);

GaussResiduals gauss_equation_residual(const Immersion& imm, const SubmanifoldGeometry& geom,
                                       const CurvatureSample& ambient, const CurvatureSample& intrinsic,
                                       const Vec& e, const Vec& f, const Vec& gv, const Vec& hv);

struct MeanCurvatures {
  Vec h_mean, h_star_mean, h0_mean;
  double h_norm_sq = 0.0, h_star_norm_sq = 0.0, h0_norm_sq = 0.0, g_h_hstar = 0.0;
  double polarization_residual = 0.0;  // |2 H0 - H - H*|
};

MeanCurvatures mean_curvatures(const SubmanifoldGeometry& geom);

struct PcSplit {
  Vec p;                // ambient vector, tangent
  Vec c;                // ambient vector, normal
  double p_norm_sq = 0.0;
  double c_norm_sq = 0.0;
};

/// phi E = P E + C E for a source-chart tangent vector E.
PcSplit pc_decomposition(const SubmanifoldGeometry& geom, const AlmostContactData& contact, const Vec& e);

/// sum_{i,j} g(P e_i, e_j)^2 over the tangent frame.
double p_norm_sq(const SubmanifoldGeometry& geom, const AlmostContactData& contact);

enum class InvarianceClass { invariant, anti_invariant, generic };
const char* to_string(InvarianceClass c);

struct InvarianceReport {
  InvarianceClass kind = InvarianceClass::generic;
  double max_c = 0.0;
  double max_p = 0.0;
};

InvarianceReport classify_invariance(const Immersion& imm, const std::vector<ChartPoint>& samples,
                                     double tol = 1e-8);

struct PreconditionStatus {
  std::string name;
  double value = 0.0;
  bool ok = false;
};

struct ConstantCurvatureReport {
  std::vector<PreconditionStatus> preconditions;
  bool preconditions_hold = false;
  double residual = 0.0;        // |R(E,F)G - (g(H,H*) - 1)(g(F,G)E - g(E,G)F)|
  double curvature_value = 0.0; // g(H,H*) - 1 at the first sample
};

ConstantCurvatureReport constant_curvature_check(const Immersion& imm, const std::vector<ChartPoint>& samples,
                                                 double tol = 1e-6);

/// Seeded source points that satisfy the source domain and map into the ambient domain.
std::vector<ChartPoint> sample_source_points(const Immersion& imm, int count, std::uint64_t seed,
                                             std::uint64_t stream = 0);

}  // namespace kenstat
