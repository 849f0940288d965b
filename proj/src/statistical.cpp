#include "kenstat/statistical.hpp"

#include <algorithm>

namespace kenstat {

DifferenceTensorField DifferenceTensorField::zero(int dim) {
  return {dim, [dim](const Vec&) { return MultiArray({dim, dim, dim}); }};
}

const char* to_string(Connection c) {
  switch (c) {
    case Connection::primal: return "primal";
    case Connection::dual: return "dual";
    case Connection::levi_civita: return "levi-civita";
  }
  return "unknown";
}

Mat StatisticalManifold::metric_at(const ChartPoint& p) const {
  if (!contains(p.coords())) {
    throw GeometryError(GeometryError::Kind::domain_violation, name + ": point outside the domain");
  }
  return metric.eval(p.coords());
}

MultiArray StatisticalManifold::k_at(const ChartPoint& p) const {
  if (!contains(p.coords())) {
    throw GeometryError(GeometryError::Kind::domain_violation, name + ": point outside the domain");
  }
  return ktensor.eval(p.coords());
}

ChartPoint sample_point(const StatisticalManifold& m, Rng& rng) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Vec x(m.dim);
    for (int i = 0; i < m.dim; ++i) x[i] = rng.uniform(m.box.lo[i], m.box.hi[i]);
    if (m.contains(x)) return ChartPoint(x);
  }
  throw GeometryError(GeometryError::Kind::domain_violation, m.name + ": sampling box misses the domain");
}

std::vector<ChartPoint> sample_points(const StatisticalManifold& m, int count, std::uint64_t seed,
                                      std::uint64_t stream) {
  std::vector<ChartPoint> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, stream, static_cast<std::uint64_t>(i)));
    pts.push_back(sample_point(m, rng));
  }
  return pts;
}

Mat inverse_metric(const Mat& g) {
  Eigen::LLT<Mat> llt(0.5 * (g + g.transpose()));
  if (llt.info() != Eigen::Success || !g.allFinite()) {
    throw GeometryError(GeometryError::Kind::singular_metric, "metric is not positive definite");
  }
  return llt.solve(Mat::Identity(g.rows(), g.cols()));
}

MultiArray metric_derivatives(const StatisticalManifold& m, const ChartPoint& p) {
  const int n = m.dim;
  MultiArray dg({n, n, n});
  auto g = [&m](const Vec& x) { return m.metric.eval(x); };
  for (int l = 0; l < n; ++l) {
    const Mat d = richardson_partial(g, p.coords(), l, m.fd.first, m.domain);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dg(l, i, j) = d(i, j);
  }
  return dg;
}

namespace {

MultiArray koszul(const Mat& ginv, const MultiArray& dg) {
  const int n = static_cast<int>(ginv.rows());
  MultiArray first({n, n, n});  // (l, i, j) = Gamma_{l ij}
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) first(l, i, j) = 0.5 * (dg(i, l, j) + dg(j, l, i) - dg(l, i, j));
  MultiArray gamma({n, n, n});
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += ginv(k, l) * first(l, i, j);
        gamma(k, i, j) = s;
      }
  return gamma;
}

}  // namespace

MultiArray levi_civita_christoffels(const StatisticalManifold& m, const ChartPoint& p) {
  const Mat ginv = inverse_metric(m.metric_at(p));
  return koszul(ginv, metric_derivatives(m, p));
}

ChristoffelSet dual_christoffels(const StatisticalManifold& m, const ChartPoint& p) {
  MultiArray lc = levi_civita_christoffels(m, p);
  const MultiArray k = m.k_at(p);
  return {lc, lc + k, lc - k};
}

MultiArray christoffels(const StatisticalManifold& m, const ChartPoint& p, Connection c) {
  MultiArray lc = levi_civita_christoffels(m, p);
  switch (c) {
    case Connection::levi_civita: return lc;
    case Connection::primal: return lc + m.k_at(p);
    case Connection::dual: return lc - m.k_at(p);
  }
  return lc;
}

Vec apply_connection(const MultiArray& gamma, const Vec& x, const Vec& y) {
  const int n = gamma.shape()[0];
  const int a = gamma.shape()[1];
  const int b = gamma.shape()[2];
  Vec out = Vec::Zero(n);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < a; ++i) {
      if (x[i] == 0.0) continue;
      for (int j = 0; j < b; ++j) s += gamma(k, i, j) * x[i] * y[j];
    }
    out[k] = s;
  }
  return out;
}

MultiArray lower_first(const MultiArray& t, const Mat& g) {
  const int n = t.shape()[0];
  MultiArray out({n, n, n});
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += g(k, l) * t(l, i, j);
        out(k, i, j) = s;
      }
  return out;
}

double StatisticalResiduals::max() const {
  return std::max({duality, codazzi, k_symmetry, self_adjointness, torsion});
}

StatisticalResiduals check_statistical(const StatisticalManifold& m, const ChartPoint& p, const Frame& frame) {
  const Mat g = m.metric_at(p);
  const MultiArray dg = metric_derivatives(m, p);
  const MultiArray lc = koszul(inverse_metric(g), dg);
  const MultiArray k = m.k_at(p);
  const MultiArray gam = lc + k;
  const MultiArray gam_star = lc - k;
  const int n = m.dim;

  auto directional_dg = [&](const Vec& c, const Vec& a, const Vec& b) {
    double s = 0.0;
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += c[l] * a[i] * b[j] * dg(l, i, j);
    return s;
  };
  // (nabla_E g)(F, G)
  auto nabla_g = [&](const Vec& e, const Vec& f, const Vec& gg) {
    return directional_dg(e, f, gg) - inner(g, apply_connection(gam, e, f), gg) -
           inner(g, f, apply_connection(gam, e, gg));
  };

  StatisticalResiduals r;
  r.torsion = std::max(gam.symmetry_residual(1, 2), gam_star.symmetry_residual(1, 2));
  const auto& v = frame.vectors;
  for (const Vec& e : v) {
    for (const Vec& f : v) {
      r.k_symmetry = std::max(r.k_symmetry, norm(g, apply_bilinear(k, e, f) - apply_bilinear(k, f, e)));
      for (const Vec& gg : v) {
        const double dual = directional_dg(gg, e, f) - inner(g, apply_connection(gam, gg, e), f) -
                            inner(g, e, apply_connection(gam_star, gg, f));
        r.duality = std::max(r.duality, std::abs(dual));
        r.codazzi = std::max(r.codazzi, std::abs(nabla_g(e, f, gg) - nabla_g(f, e, gg)));
        r.self_adjointness = std::max(
            r.self_adjointness, std::abs(inner(g, apply_bilinear(k, e, f), gg) - inner(g, f, apply_bilinear(k, e, gg))));
      }
    }
  }
  return r;
}

MultiArray dual_by_duality(const MultiArray& gamma, const Mat& g, const MultiArray& dg) {
  const int n = static_cast<int>(g.rows());
  const Mat ginv = inverse_metric(g);
  // g(d_a, nabla'_c d_b) = d_c g_ab - g_lb Gamma^l_ca
  MultiArray lowered({n, n, n});  // (a, c, b)
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int b = 0; b < n; ++b) {
        double s = dg(c, a, b);
        for (int l = 0; l < n; ++l) s -= g(l, b) * gamma(l, c, a);
        lowered(a, c, b) = s;
      }
  MultiArray out({n, n, n});
  for (int k = 0; k < n; ++k)
    for (int c = 0; c < n; ++c)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int a = 0; a < n; ++a) s += ginv(k, a) * lowered(a, c, b);
        out(k, c, b) = s;
      }
  return out;
}

double conjugate_involution_check(const StatisticalManifold& m, const ChartPoint& p) {
  const Mat g = m.metric_at(p);
  const MultiArray dg = metric_derivatives(m, p);
  const MultiArray gam = koszul(inverse_metric(g), dg) + m.k_at(p);
  const MultiArray star = dual_by_duality(gam, g, dg);
  const MultiArray star_star = dual_by_duality(star, g, dg);
  return max_abs_diff(star_star, gam);
}

MultiArray random_admissible_k(const Mat& g, Rng& rng, double scale) {
  const int n = static_cast<int>(g.rows());
  MultiArray c({n, n, n});
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        const double v = scale * rng.uniform(-1.0, 1.0);
        const int perms[6][3] = {{i, j, k}, {i, k, j}, {j, i, k}, {j, k, i}, {k, i, j}, {k, j, i}};
        for (const auto& q : perms) c(q[0], q[1], q[2]) = v;
      }
  const Mat ginv = inverse_metric(g);
  MultiArray out({n, n, n});
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += ginv(k, l) * c(l, i, j);
        out(k, i, j) = s;
      }
  return out;
}

}  // namespace kenstat
