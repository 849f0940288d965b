#pragma once

#include "kenstat/tensor.hpp"

#include <string>

namespace kenstat {

using MetricFn = std::function<Mat(const Vec&)>;
/// Returns a (1,2)-tensor as a dim x dim x dim array indexed (k, i, j) = T^k_ij.
using TensorFn = std::function<MultiArray(const Vec&)>;

struct MetricField {
  int dim = 0;
  MetricFn eval;
};

struct DifferenceTensorField {
  int dim = 0;
  TensorFn eval;

  static DifferenceTensorField zero(int dim);
};

/// Axis-aligned coordinate box used for rejection sampling.
struct SamplingBox {
  Vec lo;
  Vec hi;
};

/// A statistical manifold presented by its metric and difference tensor
/// K = nabla - nabla^g on a single chart.
struct StatisticalManifold {
  std::string name;
  int dim = 0;
  MetricField metric;
  DifferenceTensorField ktensor;
  DomainPredicate domain;
  SamplingBox box;
  FdSteps fd;

  bool contains(const Vec& x) const { return !domain || domain(x); }
  Mat metric_at(const ChartPoint& p) const;
  MultiArray k_at(const ChartPoint& p) const;
};

enum class Connection { primal, dual, levi_civita };
const char* to_string(Connection c);

/// Seeded rejection sampling inside the box intersected with the domain.
ChartPoint sample_point(const StatisticalManifold& m, Rng& rng);
std::vector<ChartPoint> sample_points(const StatisticalManifold& m, int count, std::uint64_t seed,
                                      std::uint64_t stream = 0);

/// (l, i, j) = d_l g_ij by Richardson-refined central differences.
MultiArray metric_derivatives(const StatisticalManifold& m, const ChartPoint& p);

/// Koszul formula; (k, i, j) = Gamma^k_ij with nabla_{d_i} d_j = Gamma^k_ij d_k.
MultiArray levi_civita_christoffels(const StatisticalManifold& m, const ChartPoint& p);

struct ChristoffelSet {
  MultiArray levi_civita;
  MultiArray primal;  // Gamma^g + K
  MultiArray dual;    // Gamma^g - K
};

ChristoffelSet dual_christoffels(const StatisticalManifold& m, const ChartPoint& p);
MultiArray christoffels(const StatisticalManifold& m, const ChartPoint& p, Connection c);

/// nabla_X Y for the frozen-component field Y: Gamma^k_ij X^i Y^j.
Vec apply_connection(const MultiArray& gamma, const Vec& x, const Vec& y);
/// T(X, Y)^k = T^k_ij X^i Y^j for any (1,2)-tensor array.
inline Vec apply_bilinear(const MultiArray& t, const Vec& x, const Vec& y) { return apply_connection(t, x, y); }

/// Lower the upper index: (k, i, j) -> g_kl T^l_ij.
MultiArray lower_first(const MultiArray& t, const Mat& g);

struct StatisticalResiduals {
  double duality = 0.0;           // |G g(E,F) - g(nabla_G E, F) - g(E, nabla*_G F)|
  double codazzi = 0.0;           // |(nabla_E g)(F,G) - (nabla_F g)(E,G)|
  double k_symmetry = 0.0;        // |K(E,F) - K(F,E)|
  double self_adjointness = 0.0;  // |g(K(E,F),G) - g(F,K(E,G))|
  double torsion = 0.0;           // lower-index asymmetry of Gamma and Gamma*

  double max() const;
};

/// Axiom residuals maximized over all triples of frame vectors.
StatisticalResiduals check_statistical(const StatisticalManifold& m, const ChartPoint& p, const Frame& frame);

/// Builds the dual of the dual of nabla from the duality identity alone and
/// returns its max component deviation from Gamma.
double conjugate_involution_check(const StatisticalManifold& m, const ChartPoint& p);

/// Dual connection obtained from the duality identity
/// d_c g_ab = g(nabla_c d_a, d_b) + g(d_a, nabla'_c d_b).
MultiArray dual_by_duality(const MultiArray& gamma, const Mat& g, const MultiArray& dg);

/// Fully symmetric lowered cubic form with one index raised by g^{-1}; the
/// result is a valid difference tensor for g.
MultiArray random_admissible_k(const Mat& g, Rng& rng, double scale = 1.0);

/// Metric inverse; throws singular_metric unless g is symmetric positive definite.
Mat inverse_metric(const Mat& g);

}  // namespace kenstat
