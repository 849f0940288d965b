#pragma once

#include "kenstat/curvature.hpp"

#include <optional>

namespace kenstat {

using MatrixFieldFn = std::function<Mat(const Vec&)>;
using ScalarFieldFn = std::function<double(const Vec&)>;

/// (phi, xi) on a chart; phi(x) has column j equal to phi(d_j). eta = g(., xi).
struct AlmostContactData {
  MatrixFieldFn phi;
  VectorFieldFn xi;
};

struct AlmostContactResiduals {
  double phi_xi = 0.0;          // |phi xi|
  double phi_squared = 0.0;     // |phi^2 E + E - eta(E) xi|
  double compatibility = 0.0;   // |g(phi E, phi F) - g(E,F) + eta(E) eta(F)|
  double unit_xi = 0.0;         // |g(xi, xi) - 1|
  double max() const;
};

AlmostContactResiduals almost_contact_residuals(const StatisticalManifold& m, const AlmostContactData& c,
                                                const ChartPoint& p, const Frame& frame);

/// Levi-Civita Kenmotsu identities: (nabla_E phi)F = g(phi E, F) xi - eta(F) phi E
/// and nabla_E xi = E - eta(E) xi. Returns the larger of the two residuals.
double kenmotsu_structure_residual(const StatisticalManifold& m, const AlmostContactData& c, const ChartPoint& p,
                                   const Frame& frame);

/// Even-dimensional statistical manifold with a complex structure J.
struct HolomorphicStatisticalManifold {
  StatisticalManifold base;
  MatrixFieldFn j;
};

struct HolomorphicResiduals {
  double j_squared = 0.0;    // |J^2 E + E|
  double isometry = 0.0;     // |g(JE, JF) - g(E,F)|
  double holomorphic = 0.0;  // |K(E, JF) + J K(E,F)|
  double max() const;
};

HolomorphicResiduals holomorphic_residuals(const HolomorphicStatisticalManifold& b, const ChartPoint& p,
                                           const Frame& frame);

struct KenmotsuStatisticalManifold {
  StatisticalManifold base;  // chart (fiber coords, alpha)
  AlmostContactData contact;
  std::optional<double> c_bar;
  int s = 0;  // base.dim = 2s + 1
  std::optional<HolomorphicStatisticalManifold> fiber;
};

struct WarpedContact {
  MetricField metric;
  AlmostContactData contact;
};

/// Product chart (fiber coords, alpha) with metric e^{2 alpha} g~ + d alpha^2,
/// phi = J on the fiber, phi xi = 0, xi = d/d alpha.
WarpedContact build_warped_contact(const HolomorphicStatisticalManifold& fiber);

/// Lifts the fiber difference tensor: K(fiber, fiber) = K~, mixed entries 0,
/// K(xi, xi) = beta xi. The last chart coordinate is alpha; `alpha_range`
/// extends the fiber sampling box.
KenmotsuStatisticalManifold lift_statistical_structure(const HolomorphicStatisticalManifold& fiber,
                                                       const ScalarFieldFn& beta, std::optional<double> c_bar,
                                                       double alpha_lo = -1.0, double alpha_hi = 1.0,
                                                       const std::string& name = "");

/// max over frame pairs of |K(E, phi F) + phi K(E, F)|_g.
double kenmotsu_condition_residual(const KenmotsuStatisticalManifold& m, const ChartPoint& p, const Frame& frame);

/// Constant phi-sectional curvature model R(E,F)G with parameter c.
Vec model_curvature(double c_bar, const Mat& g, const Mat& phi, const Vec& xi, const Vec& e, const Vec& f,
                    const Vec& gv);

/// Model tensor in curvature layout (l, k, i, j).
MultiArray model_curvature_tensor(double c_bar, const Mat& g, const Mat& phi, const Vec& xi);

struct RicciCoefficients {
  double t1 = 0.0;
  double t2 = 0.0;
};

/// Ric = t1 g + t2 eta (x) eta for the model in dimension 2s + 1.
RicciCoefficients model_ricci_coefficients(double c_bar, int s);
double model_ricci(double c_bar, int s, const Vec& e, const Vec& f, const Mat& g, const Vec& xi);

/// Ric(E, F) = sum_i g(R(e_i, E) F, e_i) of the model traced over a
/// g-orthonormal frame; the algebraic oracle for model_ricci.
double model_ricci_trace(double c_bar, const Mat& g, const Mat& phi, const Vec& xi, const Vec& e, const Vec& f);

/// e^{2 alpha} (c + 1)(s + 1) / 2 * g~(E, E).
double fiber_ricci_expected(double c_bar, int s, double alpha, double g_fiber_ee);

struct FiberRicciCheck {
  double measured = 0.0;
  double expected = 0.0;
  double residual = 0.0;
};

/// Statistical Ricci of the fiber at fiber point p in direction E against the
/// closed form for a lift with declared c.
FiberRicciCheck fiber_ricci_check(const HolomorphicStatisticalManifold& fiber, double c_bar, double alpha,
                                  const ChartPoint& p, const Vec& e, std::uint64_t seed = 0);

/// Identities for R(., .)xi and friends on a lift with K = beta eta (x) eta (x) xi.
/// Each item is measured against its stated right side and against the negative.
struct SignedResidual {
  double as_stated = 0.0;
  double flipped = 0.0;
  const char* matches(double tol) const;
};

struct StructureCurvatureIdentities {
  SignedResidual r_e_f_xi;         // R(E,F)xi = eta(F)E - eta(E)F
  SignedResidual r_xi_e_f;         // R(xi,E)F = g(E,F)xi - eta(F)E
  SignedResidual r_phie_xi_f;      // R(phi E, xi)F = eta(F) phi E - g(phi E, F) xi
  SignedResidual sum_identity;     // R(E, phi F)xi + R(xi, E)phi F = -R(phi F, xi)E
  SignedResidual xi_sectional;     // g(R(E,xi)xi, E) = g(E,E) - eta(E)^2
};

StructureCurvatureIdentities structure_curvature_identities(const KenmotsuStatisticalManifold& m,
                                                            const CurvatureSample& cs, const Frame& frame,
                                                            CurvatureKind kind = CurvatureKind::primal);

// Building blocks for the catalog.

/// Flat C^s with K = 0 and J(d_{x_a}) = d_{y_a} in coordinates (x_1, y_1, ..., x_s, y_s).
HolomorphicStatisticalManifold flat_fiber(int s, double box = 1.0);

/// Upper half plane chart x > 0 with g~ = x (dx^2 + dy^2), or the flat metric
/// when `conformal` is false, and the lambda difference tensor.
HolomorphicStatisticalManifold two_dim_fiber(double lambda, bool conformal);

/// Round unit sphere in stereographic coordinates with K = 0.
StatisticalManifold round_sphere(int n);

StatisticalManifold euclidean_space(int n);

/// A catalog manifold: the statistical manifold plus its Kenmotsu data when
/// it has any. `spec` is the canonical "name(args)" string.
struct AmbientSpace {
  std::string spec;
  StatisticalManifold manifold;
  std::optional<KenmotsuStatisticalManifold> kenmotsu;
  /// Statistical sectional curvature shared by every plane, when known.
  std::optional<double> constant_sectional;

  const AlmostContactData* contact() const { return kenmotsu ? &kenmotsu->contact : nullptr; }
  std::optional<double> c_bar() const { return kenmotsu ? kenmotsu->c_bar : std::nullopt; }
};

}  // namespace kenstat
