#include "kenstat/tensor.hpp"

#include <algorithm>

namespace kenstat {

const char* to_string(GeometryError::Kind kind) {
  switch (kind) {
    case GeometryError::Kind::domain_violation: return "domain-violation";
    case GeometryError::Kind::degenerate_frame: return "degenerate-frame";
    case GeometryError::Kind::singular_metric: return "singular-metric";
    case GeometryError::Kind::degenerate_plane: return "degenerate-plane";
    case GeometryError::Kind::invalid_normal: return "invalid-normal";
    case GeometryError::Kind::rank_deficiency: return "rank-deficiency";
    case GeometryError::Kind::precondition: return "precondition";
    case GeometryError::Kind::catalog_miss: return "catalog-miss";
    case GeometryError::Kind::config: return "config";
  }
  return "unknown";
}

ChartPoint::ChartPoint(Vec coords) : coords_(std::move(coords)) {
  if (!coords_.allFinite()) {
    throw GeometryError(GeometryError::Kind::domain_violation, "chart point has non-finite coordinates");
  }
}

ChartPoint::ChartPoint(std::initializer_list<double> coords)
    : ChartPoint(Vec::Map(coords.begin(), static_cast<Eigen::Index>(coords.size()))) {}

// --- MultiArray ------------------------------------------------------------

MultiArray::MultiArray(std::vector<int> shape, double fill) : shape_(std::move(shape)) {
  std::size_t n = 1;
  for (int e : shape_) {
    if (e < 0) throw std::invalid_argument("MultiArray: negative extent");
    n *= static_cast<std::size_t>(e);
  }
  data_.assign(n, fill);
}

std::size_t MultiArray::offset(std::initializer_list<int> idx) const {
  std::size_t off = 0;
  std::size_t axis = 0;
  for (int i : idx) {
    off = off * static_cast<std::size_t>(shape_[axis]) + static_cast<std::size_t>(i);
    ++axis;
  }
  return off;
}

std::size_t MultiArray::offset_of(const std::vector<int>& idx) const {
  std::size_t off = 0;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    off = off * static_cast<std::size_t>(shape_[a]) + static_cast<std::size_t>(idx[a]);
  }
  return off;
}

double MultiArray::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double MultiArray::pair_residual(int axis_a, int axis_b, double sign) const {
  if (shape_.at(axis_a) != shape_.at(axis_b)) throw std::invalid_argument("MultiArray: axes differ in extent");
  std::vector<int> idx(shape_.size(), 0);
  double worst = 0.0;
  for (std::size_t flat = 0; flat < data_.size(); ++flat) {
    std::size_t rem = flat;
    for (int a = rank() - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % static_cast<std::size_t>(shape_[a]));
      rem /= static_cast<std::size_t>(shape_[a]);
    }
    std::vector<int> swapped = idx;
    std::swap(swapped[axis_a], swapped[axis_b]);
    worst = std::max(worst, std::abs(data_[flat] - sign * data_[offset_of(swapped)]));
  }
  return worst;
}

double MultiArray::symmetry_residual(int axis_a, int axis_b) const { return pair_residual(axis_a, axis_b, 1.0); }
double MultiArray::antisymmetry_residual(int axis_a, int axis_b) const { return pair_residual(axis_a, axis_b, -1.0); }

MultiArray& MultiArray::operator+=(const MultiArray& o) {
  if (o.shape_ != shape_) throw std::invalid_argument("MultiArray: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

MultiArray& MultiArray::operator-=(const MultiArray& o) {
  if (o.shape_ != shape_) throw std::invalid_argument("MultiArray: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

MultiArray& MultiArray::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

MultiArray operator+(MultiArray a, const MultiArray& b) { return a += b; }
MultiArray operator-(MultiArray a, const MultiArray& b) { return a -= b; }
MultiArray operator*(double s, MultiArray a) { return a *= s; }
MultiArray operator*(MultiArray a, double s) { return a *= s; }

double max_abs_diff(const MultiArray& a, const MultiArray& b) { return (a - b).max_abs(); }

// --- differentiation --------------------------------------------------------

double fd_derivative(const std::function<double(const Vec&)>& f, const ChartPoint& p, int i, double step,
                     const DomainPredicate& domain) {
  if (i < 0 || i >= p.dim()) throw std::out_of_range("fd_derivative: coordinate index out of range");
  return richardson_partial(f, p.coords(), i, step, domain);
}

// --- frames ------------------------------------------------------------------

Frame gram_schmidt(const Frame& vs, const Mat& g, double pivot_tol) {
  Frame out{vs.base, {}, true};
  out.vectors.reserve(vs.vectors.size());
  for (const Vec& v : vs.vectors) {
    const double original = norm(g, v);
    if (!(original > 0.0)) {
      throw GeometryError(GeometryError::Kind::degenerate_frame, "gram_schmidt: zero input vector");
    }
    Vec w = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vec& u : out.vectors) w -= inner(g, u, w) * u;
    }
    const double len = norm(g, w);
    if (len < pivot_tol * std::max(1.0, original)) {
      throw GeometryError(GeometryError::Kind::degenerate_frame,
                          "gram_schmidt: input vectors are linearly dependent");
    }
    out.vectors.push_back(w / len);
  }
  return out;
}

Frame extend_frame(const Frame& partial, const Mat& g, std::uint64_t seed) {
  const int n = static_cast<int>(g.rows());
  Frame f = partial;
  Rng rng(seed);
  int attempts = 0;
  while (f.size() < n) {
    if (++attempts > 100 * n) {
      throw GeometryError(GeometryError::Kind::degenerate_frame, "extend_frame: could not complete frame");
    }
    Frame trial = f;
    trial.vectors.push_back(rng.normal_vec(n));
    try {
      f = gram_schmidt(trial, g, 1e-6);
    } catch (const GeometryError&) {
      continue;
    }
  }
  f.orthonormal = true;
  return f;
}

Frame complete_frame(const TangentVector& e1, const Mat& g, std::uint64_t seed) {
  const int n = static_cast<int>(g.rows());
  if (e1.components.size() != n) throw std::invalid_argument("complete_frame: dimension mismatch");
  return extend_frame(gram_schmidt(Frame{e1.base, {e1.components}, false}, g), g, seed);
}

double orthonormality_residual(const Frame& f, const Mat& g) {
  double worst = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    for (int j = 0; j < f.size(); ++j) {
      const double target = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(inner(g, f.vectors[i], f.vectors[j]) - target));
    }
  }
  return worst;
}

// --- randomness ----------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s = a ^ (stream * 0xD1B54A32D192ED03ULL);
  std::uint64_t b = splitmix64(s);
  s = b ^ (index * 0xAEF17502108EF2D9ULL);
  return splitmix64(s);
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t s = seed;
  for (auto& word : s_) word = splitmix64(s);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  // Box-Muller; one value per call keeps the stream layout simple.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Vec Rng::normal_vec(int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = normal();
  return v;
}

}  // namespace kenstat
