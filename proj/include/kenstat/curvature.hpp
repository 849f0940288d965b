#pragma once

#include "kenstat/statistical.hpp"

namespace kenstat {

enum class CurvatureKind { primal, dual, levi_civita, statistical };
const char* to_string(CurvatureKind k);

/// Every curvature object of a statistical manifold at one point.
///
/// Curvature arrays are indexed (l, k, i, j) with R(d_i, d_j) d_k = R^l_kij d_l
/// and R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
/// `s` is the statistical curvature built as R^g + [K_X, K_Y]; `s_average`
/// is the independent route (R + R*)/2 through both connections.
struct CurvatureSample {
  ChartPoint point;
  Mat g;
  MultiArray k;
  MultiArray gamma, gamma_star, gamma_lc;
  MultiArray r, r_star, r_lc;
  MultiArray s;
  MultiArray s_average;

  const MultiArray& tensor(CurvatureKind kind) const;
  /// R(E, F) G for the selected curvature.
  Vec apply(CurvatureKind kind, const Vec& e, const Vec& f, const Vec& gv) const;
  /// g(R(E, F) G, H).
  double lowered(CurvatureKind kind, const Vec& e, const Vec& f, const Vec& gv, const Vec& h) const;
  /// Max component difference between the two statistical-curvature routes.
  double dual_path_residual() const;
  int dim() const { return static_cast<int>(g.rows()); }
};

/// Riemann components from connection symbols and their derivatives
/// dgamma(c, k, i, j) = d_c Gamma^k_ij.
MultiArray riemann_from(const MultiArray& gamma, const MultiArray& dgamma);

/// [K_X, K_Y] as a curvature-shaped array.
MultiArray k_commutator(const MultiArray& k);

CurvatureSample curvature_sample(const StatisticalManifold& m, const ChartPoint& p);

/// Lowered components g(R(e_a, e_b) e_c, e_d) in the given frame.
MultiArray frame_components(const CurvatureSample& cs, CurvatureKind kind, const Frame& frame);

Vec connection_curvature(const StatisticalManifold& m, Connection c, const ChartPoint& p, const Vec& e,
                         const Vec& f, const Vec& gv);

struct StatisticalCurvatureValue {
  Vec value;           // R^g(E,F)G + [K_E, K_F]G
  double cross_check;  // |value - (R + R*)(E,F)G / 2|_g
  bool consistent;
};

StatisticalCurvatureValue statistical_curvature(const StatisticalManifold& m, const ChartPoint& p, const Vec& e,
                                                const Vec& f, const Vec& gv, double tol = 1e-6);

/// g(S(E,F)F, E) after orthonormalizing {E, F}; throws degenerate_plane.
double sectional_curvature(const CurvatureSample& cs, const Vec& e, const Vec& f,
                           CurvatureKind kind = CurvatureKind::statistical);
double sectional_curvature(const StatisticalManifold& m, const ChartPoint& p, const Vec& e, const Vec& f);

/// Sum over i >= 2 of g(S(e_i, E) E, e_i) in a completed orthonormal frame
/// with e_1 = E / |E|.
double ricci_curvature(const CurvatureSample& cs, const Vec& e, CurvatureKind kind, std::uint64_t seed = 0);
double ricci_curvature(const StatisticalManifold& m, const ChartPoint& p, const Vec& e,
                       CurvatureKind kind = CurvatureKind::statistical, std::uint64_t seed = 0);

/// Jacobi operator R(F, anchor) anchor of the primal connection.
Vec jacobi_operator(const CurvatureSample& cs, const Vec& anchor, const Vec& f,
                    CurvatureKind kind = CurvatureKind::primal);

using VectorFieldFn = std::function<Vec(const Vec&)>;

struct JacobiParallelism {
  /// max over frame E, F of |(nabla_F R_xi)(E)|_g
  double residual = 0.0;
  /// same, restricted to E, F orthogonal to xi and with the result
  /// projected onto the orthogonal complement of xi
  double transverse = 0.0;
};

/// Covariant derivative of the structure Jacobi operator field
/// E -> R(E, xi) xi, differentiated by finite differences of the operator
/// field in coordinates.
JacobiParallelism jacobi_parallelism_residual(const StatisticalManifold& m, const VectorFieldFn& xi,
                                              const ChartPoint& p, const Frame& directions,
                                              Connection c = Connection::primal);

}  // namespace kenstat
