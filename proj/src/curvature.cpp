#include "kenstat/curvature.hpp"

#include <algorithm>

namespace kenstat {

const char* to_string(CurvatureKind k) {
  switch (k) {
    case CurvatureKind::primal: return "primal";
    case CurvatureKind::dual: return "dual";
    case CurvatureKind::levi_civita: return "levi-civita";
    case CurvatureKind::statistical: return "statistical";
  }
  return "unknown";
}

namespace {

CurvatureKind kind_of(Connection c) {
  switch (c) {
    case Connection::primal: return CurvatureKind::primal;
    case Connection::dual: return CurvatureKind::dual;
    case Connection::levi_civita: return CurvatureKind::levi_civita;
  }
  return CurvatureKind::primal;
}

// (w, k, i, j) with w = 0: Levi-Civita, 1: primal, 2: dual
MultiArray christoffel_stack(const StatisticalManifold& m, const Vec& x) {
  const int n = m.dim;
  const ChartPoint p(x);
  const MultiArray lc = levi_civita_christoffels(m, p);
  const MultiArray k = m.k_at(p);
  MultiArray out({3, n, n, n});
  const std::size_t block = lc.size();
  for (std::size_t t = 0; t < block; ++t) {
    out.data()[t] = lc.data()[t];
    out.data()[block + t] = lc.data()[t] + k.data()[t];
    out.data()[2 * block + t] = lc.data()[t] - k.data()[t];
  }
  return out;
}

MultiArray slice(const MultiArray& stack, int w) {
  const int n = stack.shape()[1];
  MultiArray out({n, n, n});
  const std::size_t block = out.size();
  std::copy_n(stack.data().begin() + static_cast<std::ptrdiff_t>(w * block), block, out.data().begin());
  return out;
}

}  // namespace

MultiArray riemann_from(const MultiArray& gamma, const MultiArray& dgamma) {
  const int n = gamma.shape()[0];
  MultiArray r({n, n, n, n});
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = dgamma(i, l, j, k) - dgamma(j, l, i, k);
          for (int m = 0; m < n; ++m) v += gamma(l, i, m) * gamma(m, j, k) - gamma(l, j, m) * gamma(m, i, k);
          r(l, k, i, j) = v;
        }
  return r;
}

MultiArray k_commutator(const MultiArray& k) {
  const int n = k.shape()[0];
  MultiArray c({n, n, n, n});
  for (int l = 0; l < n; ++l)
    for (int kk = 0; kk < n; ++kk)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = 0.0;
          for (int m = 0; m < n; ++m) v += k(l, i, m) * k(m, j, kk) - k(l, j, m) * k(m, i, kk);
          c(l, kk, i, j) = v;
        }
  return c;
}

CurvatureSample curvature_sample(const StatisticalManifold& m, const ChartPoint& p) {
  const int n = m.dim;
  CurvatureSample cs;
  cs.point = p;
  cs.g = m.metric_at(p);
  cs.k = m.k_at(p);
  const MultiArray stack = christoffel_stack(m, p.coords());
  cs.gamma_lc = slice(stack, 0);
  cs.gamma = slice(stack, 1);
  cs.gamma_star = slice(stack, 2);

  auto f = [&m](const Vec& x) { return christoffel_stack(m, x); };
  std::vector<MultiArray> partials;
  partials.reserve(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) partials.push_back(richardson_partial(f, p.coords(), c, m.fd.second, m.domain));

  auto dgamma_of = [&](int w) {
    MultiArray d({n, n, n, n});
    for (int c = 0; c < n; ++c) {
      const MultiArray s = slice(partials[static_cast<std::size_t>(c)], w);
      std::copy(s.data().begin(), s.data().end(), d.data().begin() + static_cast<std::ptrdiff_t>(c * s.size()));
    }
    return d;
  };
  cs.r_lc = riemann_from(cs.gamma_lc, dgamma_of(0));
  cs.r = riemann_from(cs.gamma, dgamma_of(1));
  cs.r_star = riemann_from(cs.gamma_star, dgamma_of(2));
  cs.s = cs.r_lc + k_commutator(cs.k);
  cs.s_average = 0.5 * (cs.r + cs.r_star);
  return cs;
}

const MultiArray& CurvatureSample::tensor(CurvatureKind kind) const {
  switch (kind) {
    case CurvatureKind::primal: return r;
    case CurvatureKind::dual: return r_star;
    case CurvatureKind::levi_civita: return r_lc;
    case CurvatureKind::statistical: return s;
  }
  return s;
}

Vec CurvatureSample::apply(CurvatureKind kind, const Vec& e, const Vec& f, const Vec& gv) const {
  const MultiArray& t = tensor(kind);
  const int n = dim();
  Vec out = Vec::Zero(n);
  for (int l = 0; l < n; ++l) {
    double v = 0.0;
    for (int k = 0; k < n; ++k) {
      if (gv[k] == 0.0) continue;
      for (int i = 0; i < n; ++i) {
        if (e[i] == 0.0) continue;
        for (int j = 0; j < n; ++j) v += t(l, k, i, j) * e[i] * f[j] * gv[k];
      }
    }
    out[l] = v;
  }
  return out;
}

double CurvatureSample::lowered(CurvatureKind kind, const Vec& e, const Vec& f, const Vec& gv,
                                const Vec& h) const {
  return inner(g, apply(kind, e, f, gv), h);
}

double CurvatureSample::dual_path_residual() const { return max_abs_diff(s, s_average); }

MultiArray frame_components(const CurvatureSample& cs, CurvatureKind kind, const Frame& frame) {
  const int n = frame.size();
  MultiArray out({n, n, n, n});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const Vec v = cs.apply(kind, frame.vectors[a], frame.vectors[b], frame.vectors[c]);
        for (int d = 0; d < n; ++d) out(a, b, c, d) = inner(cs.g, v, frame.vectors[d]);
      }
  return out;
}

Vec connection_curvature(const StatisticalManifold& m, Connection c, const ChartPoint& p, const Vec& e,
                         const Vec& f, const Vec& gv) {
  return curvature_sample(m, p).apply(kind_of(c), e, f, gv);
}

StatisticalCurvatureValue statistical_curvature(const StatisticalManifold& m, const ChartPoint& p, const Vec& e,
                                                const Vec& f, const Vec& gv, double tol) {
  const CurvatureSample cs = curvature_sample(m, p);
  StatisticalCurvatureValue out;
  out.value = cs.apply(CurvatureKind::statistical, e, f, gv);
  const Vec other = 0.5 * (cs.apply(CurvatureKind::primal, e, f, gv) + cs.apply(CurvatureKind::dual, e, f, gv));
  out.cross_check = norm(cs.g, out.value - other);
  out.consistent = out.cross_check <= tol;
  return out;
}

double sectional_curvature(const CurvatureSample& cs, const Vec& e, const Vec& f, CurvatureKind kind) {
  Frame plane;
  try {
    plane = gram_schmidt(Frame{cs.point, {e, f}, false}, cs.g, 1e-8);
  } catch (const GeometryError&) {
    throw GeometryError(GeometryError::Kind::degenerate_plane, "sectional curvature: E and F are dependent");
  }
  const Vec& u = plane.vectors[0];
  const Vec& v = plane.vectors[1];
  return cs.lowered(kind, u, v, v, u);
}

double sectional_curvature(const StatisticalManifold& m, const ChartPoint& p, const Vec& e, const Vec& f) {
  return sectional_curvature(curvature_sample(m, p), e, f, CurvatureKind::statistical);
}

double ricci_curvature(const CurvatureSample& cs, const Vec& e, CurvatureKind kind, std::uint64_t seed) {
  const Frame fr = complete_frame({cs.point, e}, cs.g, seed);
  const Vec& e1 = fr.vectors[0];
  double sum = 0.0;
  for (int i = 1; i < fr.size(); ++i) sum += cs.lowered(kind, fr.vectors[i], e1, e1, fr.vectors[i]);
  return sum;
}

double ricci_curvature(const StatisticalManifold& m, const ChartPoint& p, const Vec& e, CurvatureKind kind,
                       std::uint64_t seed) {
  return ricci_curvature(curvature_sample(m, p), e, kind, seed);
}

Vec jacobi_operator(const CurvatureSample& cs, const Vec& anchor, const Vec& f, CurvatureKind kind) {
  return cs.apply(kind, f, anchor, anchor);
}

JacobiParallelism jacobi_parallelism_residual(const StatisticalManifold& m, const VectorFieldFn& xi,
                                              const ChartPoint& p, const Frame& directions, Connection c) {
  const int n = m.dim;
  const CurvatureKind kind = kind_of(c);
  auto op = [&](const Vec& x) {
    const CurvatureSample cs = curvature_sample(m, ChartPoint(x));
    const Vec z = xi(x);
    Mat op_matrix(n, n);
    for (int i = 0; i < n; ++i) op_matrix.col(i) = cs.apply(kind, Vec::Unit(n, i), z, z);
    return op_matrix;
  };
  std::vector<Mat> d_op;
  for (int k = 0; k < n; ++k) d_op.push_back(richardson_partial(op, p.coords(), k, m.fd.third, m.domain));
  const Mat op0 = op(p.coords());
  const MultiArray gamma = christoffels(m, p, c);
  const Mat g = m.metric_at(p);
  const Vec xi0 = xi(p.coords());
  const double xi_len = norm(g, xi0);

  JacobiParallelism out;
  for (const Vec& f : directions.vectors) {
    Mat d_f = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k) d_f += f[k] * d_op[static_cast<std::size_t>(k)];
    for (const Vec& e : directions.vectors) {
      const Vec w = d_f * e + apply_connection(gamma, f, op0 * e) - op0 * apply_connection(gamma, f, e);
      out.residual = std::max(out.residual, norm(g, w));
      if (xi_len > 0.0) {
        const Vec unit = xi0 / xi_len;
        const bool transverse = std::abs(inner(g, e, unit)) < 1e-9 * std::max(1.0, norm(g, e)) &&
                                std::abs(inner(g, f, unit)) < 1e-9 * std::max(1.0, norm(g, f));
        if (transverse) out.transverse = std::max(out.transverse, norm(g, w - inner(g, w, unit) * unit));
      }
    }
  }
  return out;
}

}  // namespace kenstat
