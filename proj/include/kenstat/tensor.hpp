#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace kenstat {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Error raised by every geometric primitive; `kind()` distinguishes the failure class.
class GeometryError : public std::runtime_error {
 public:
  enum class Kind {
    domain_violation,
    degenerate_frame,
    singular_metric,
    degenerate_plane,
    invalid_normal,
    rank_deficiency,
    precondition,
    catalog_miss,
    config,
  };

  GeometryError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

const char* to_string(GeometryError::Kind kind);

using DomainPredicate = std::function<bool(const Vec&)>;

/// Point of a single coordinate chart.
class ChartPoint {
 public:
  ChartPoint() = default;
  explicit ChartPoint(Vec coords);
  ChartPoint(std::initializer_list<double> coords);

  const Vec& coords() const noexcept { return coords_; }
  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[i]; }

 private:
  Vec coords_;
};

struct TangentVector {
  ChartPoint base;
  Vec components;
};

/// Vectors sharing one base point. `orthonormal` records that the
/// vectors were produced by an orthonormalization against some metric.
struct Frame {
  ChartPoint base;
  std::vector<Vec> vectors;
  bool orthonormal = false;

  int size() const noexcept { return static_cast<int>(vectors.size()); }
  TangentVector at(int i) const { return {base, vectors.at(i)}; }
};

/// Dense row-major multi-index array of reals.
class MultiArray {
 public:
  MultiArray() = default;
  explicit MultiArray(std::vector<int> shape, double fill = 0.0);

  const std::vector<int>& shape() const noexcept { return shape_; }
  int rank() const noexcept { return static_cast<int>(shape_.size()); }
  std::size_t size() const noexcept { return data_.size(); }
  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  template <class... Idx>
  double& operator()(Idx... idx) {
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <class... Idx>
  double operator()(Idx... idx) const {
    return data_[offset({static_cast<int>(idx)...})];
  }

  double max_abs() const;
  /// Max |A(.., i, .., j, ..) - A(.., j, .., i, ..)| over the two given axes.
  double symmetry_residual(int axis_a, int axis_b) const;
  /// Max |A(.., i, .., j, ..) + A(.., j, .., i, ..)| over the two given axes.
  double antisymmetry_residual(int axis_a, int axis_b) const;

  MultiArray& operator+=(const MultiArray& o);
  MultiArray& operator-=(const MultiArray& o);
  MultiArray& operator*=(double s);

 private:
  std::size_t offset(std::initializer_list<int> idx) const;
  std::size_t offset_of(const std::vector<int>& idx) const;
  double pair_residual(int axis_a, int axis_b, double sign) const;

  std::vector<int> shape_;
  std::vector<double> data_;
};

MultiArray operator+(MultiArray a, const MultiArray& b);
MultiArray operator-(MultiArray a, const MultiArray& b);
MultiArray operator*(double s, MultiArray a);
MultiArray operator*(MultiArray a, double s);
double max_abs_diff(const MultiArray& a, const MultiArray& b);

/// Base steps for nested finite differences. `first` differentiates the
/// metric, `second` differentiates connection symbols, `third`
/// differentiates curvature. Each step is scaled by max(1, |x_i|).
struct FdSteps {
  double first = 1e-3;
  double second = 5e-3;
  double third = 2e-2;
};

/// Actual step used at coordinate value x for base step h.
inline double scaled_step(double base, double x) { return base * std::max(1.0, std::abs(x)); }

/// Central difference along coordinate i with one Richardson refinement
/// (error O(h^4)). Works for any value type closed under +, - and scalar *.
/// Throws domain_violation if a stencil point leaves `domain`.
template <class F>
auto richardson_partial(F&& f, const Vec& p, int i, double step, const DomainPredicate& domain = {})
    -> std::decay_t<decltype(f(p))> {
  const double h = scaled_step(step, p[i]);
  auto shifted = [&](double d) {
    Vec q = p;
    q[i] += d;
    if (domain && !domain(q)) {
      throw GeometryError(GeometryError::Kind::domain_violation,
                          "finite-difference stencil leaves the domain along coordinate " +
                              std::to_string(i));
    }
    return q;
  };
  using R = std::decay_t<decltype(f(p))>;
  const Vec pp = shifted(h), pm = shifted(-h), hp = shifted(0.5 * h), hm = shifted(-0.5 * h);
  // Eigen expressions must be materialized before their operands die.
  R wide = (f(pp) - f(pm)) * (1.0 / (2.0 * h));
  R narrow = (f(hp) - f(hm)) * (1.0 / h);
  return R((narrow * 4.0 - wide) * (1.0 / 3.0));
}

double fd_derivative(const std::function<double(const Vec&)>& f, const ChartPoint& p, int i, double step,
                     const DomainPredicate& domain = {});

/// g-orthonormalization (modified Gram-Schmidt with one reorthogonalization
/// pass). The first output vector is parallel to the first input.
Frame gram_schmidt(const Frame& vs, const Mat& g, double pivot_tol = 1e-10);

/// Full g-orthonormal frame whose first vector is e1/|e1|_g, completed with
/// seeded random vectors.
Frame complete_frame(const TangentVector& e1, const Mat& g, std::uint64_t seed);

/// Appends seeded random directions to a g-orthonormal partial frame until it
/// spans the whole space.
Frame extend_frame(const Frame& partial, const Mat& g, std::uint64_t seed);

/// Max |g(u_i, u_j) - delta_ij| over the frame.
double orthonormality_residual(const Frame& f, const Mat& g);

inline double inner(const Mat& g, const Vec& a, const Vec& b) { return a.dot(g * b); }
inline double norm(const Mat& g, const Vec& a) { return std::sqrt(std::max(0.0, inner(g, a, a))); }

// --- deterministic randomness -------------------------------------------

/// splitmix64 step; used to derive independent per-sample streams.
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Small deterministic generator (xoshiro256**) with explicit conversions so
/// outputs do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  Vec normal_vec(int n);

 private:
  std::uint64_t s_[4];
};

}  // namespace kenstat
