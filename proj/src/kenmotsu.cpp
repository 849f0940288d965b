#include "kenstat/kenmotsu.hpp"

#include <algorithm>

namespace kenstat {

double AlmostContactResiduals::max() const { return std::max({phi_xi, phi_squared, compatibility, unit_xi}); }

double HolomorphicResiduals::max() const { return std::max({j_squared, isometry, holomorphic}); }

AlmostContactResiduals almost_contact_residuals(const StatisticalManifold& m, const AlmostContactData& c,
                                                const ChartPoint& p, const Frame& frame) {
  const Mat g = m.metric_at(p);
  const Mat phi = c.phi(p.coords());
  const Vec xi = c.xi(p.coords());
  AlmostContactResiduals r;
  r.phi_xi = norm(g, phi * xi);
  r.unit_xi = std::abs(inner(g, xi, xi) - 1.0);
  for (const Vec& e : frame.vectors) {
    const double eta_e = inner(g, e, xi);
    r.phi_squared = std::max(r.phi_squared, norm(g, phi * (phi * e) + e - eta_e * xi));
    for (const Vec& f : frame.vectors) {
      const double v = inner(g, phi * e, phi * f) - inner(g, e, f) + eta_e * inner(g, f, xi);
      r.compatibility = std::max(r.compatibility, std::abs(v));
    }
  }
  return r;
}

double kenmotsu_structure_residual(const StatisticalManifold& m, const AlmostContactData& c, const ChartPoint& p,
                                   const Frame& frame) {
  const int n = m.dim;
  const Mat g = m.metric_at(p);
  const MultiArray lc = levi_civita_christoffels(m, p);
  const Mat phi = c.phi(p.coords());
  const Vec xi = c.xi(p.coords());
  std::vector<Mat> dphi;
  std::vector<Vec> dxi;
  for (int k = 0; k < n; ++k) {
    dphi.push_back(richardson_partial(c.phi, p.coords(), k, m.fd.first, m.domain));
    dxi.push_back(richardson_partial(c.xi, p.coords(), k, m.fd.first, m.domain));
  }
  double worst = 0.0;
  for (const Vec& e : frame.vectors) {
    Mat d_e = Mat::Zero(n, n);
    Vec xi_e = apply_connection(lc, e, xi);
    for (int k = 0; k < n; ++k) {
      d_e += e[k] * dphi[static_cast<std::size_t>(k)];
      xi_e += e[k] * dxi[static_cast<std::size_t>(k)];
    }
    const double eta_e = inner(g, e, xi);
    worst = std::max(worst, norm(g, xi_e - (e - eta_e * xi)));
    for (const Vec& f : frame.vectors) {
      const Vec lhs = d_e * f + apply_connection(lc, e, phi * f) - phi * apply_connection(lc, e, f);
      const Vec rhs = inner(g, phi * e, f) * xi - inner(g, f, xi) * (phi * e);
      worst = std::max(worst, norm(g, lhs - rhs));
    }
  }
  return worst;
}

HolomorphicResiduals holomorphic_residuals(const HolomorphicStatisticalManifold& b, const ChartPoint& p,
                                           const Frame& frame) {
  const Mat g = b.base.metric_at(p);
  const MultiArray k = b.base.k_at(p);
  const Mat j = b.j(p.coords());
  HolomorphicResiduals r;
  for (const Vec& e : frame.vectors) {
    r.j_squared = std::max(r.j_squared, norm(g, j * (j * e) + e));
    for (const Vec& f : frame.vectors) {
      r.isometry = std::max(r.isometry, std::abs(inner(g, j * e, j * f) - inner(g, e, f)));
      r.holomorphic =
          std::max(r.holomorphic, norm(g, apply_bilinear(k, e, j * f) + j * apply_bilinear(k, e, f)));
    }
  }
  return r;
}

WarpedContact build_warped_contact(const HolomorphicStatisticalManifold& fiber) {
  const int m = fiber.base.dim;
  const int n = m + 1;
  const MetricFn fiber_metric = fiber.base.metric.eval;
  const MatrixFieldFn fiber_j = fiber.j;
  WarpedContact out;
  out.metric = {n, [=](const Vec& x) {
                  Mat g = Mat::Zero(n, n);
                  g.topLeftCorner(m, m) = std::exp(2.0 * x[m]) * fiber_metric(x.head(m));
                  g(m, m) = 1.0;
                  return g;
                }};
  out.contact.phi = [=](const Vec& x) {
    Mat phi = Mat::Zero(n, n);
    phi.topLeftCorner(m, m) = fiber_j(x.head(m));
    return phi;
  };
  out.contact.xi = [=](const Vec&) { return Vec(Vec::Unit(n, m)); };
  return out;
}

KenmotsuStatisticalManifold lift_statistical_structure(const HolomorphicStatisticalManifold& fiber,
                                                       const ScalarFieldFn& beta, std::optional<double> c_bar,
                                                       double alpha_lo, double alpha_hi, const std::string& name) {
  const int m = fiber.base.dim;
  const int n = m + 1;
  const WarpedContact wc = build_warped_contact(fiber);
  const TensorFn fiber_k = fiber.base.ktensor.eval;
  const DomainPredicate fiber_domain = fiber.base.domain;

  KenmotsuStatisticalManifold out;
  out.s = m / 2;
  out.c_bar = c_bar;
  out.fiber = fiber;
  out.contact = wc.contact;
  StatisticalManifold& b = out.base;
  b.name = name.empty() ? fiber.base.name + "-lift" : name;
  b.dim = n;
  b.metric = wc.metric;
  b.ktensor = {n, [=](const Vec& x) {
                 MultiArray k({n, n, n});
                 const MultiArray kf = fiber_k(x.head(m));
                 for (int a = 0; a < m; ++a)
                   for (int i = 0; i < m; ++i)
                     for (int j = 0; j < m; ++j) k(a, i, j) = kf(a, i, j);
                 k(m, m, m) = beta ? beta(x) : 0.0;
                 return k;
               }};
  if (fiber_domain) b.domain = [=](const Vec& x) { return fiber_domain(x.head(m)); };
  b.box.lo = Vec(n);
  b.box.hi = Vec(n);
  b.box.lo << fiber.base.box.lo, alpha_lo;
  b.box.hi << fiber.base.box.hi, alpha_hi;
  b.fd = fiber.base.fd;
  return out;
}

double kenmotsu_condition_residual(const KenmotsuStatisticalManifold& m, const ChartPoint& p, const Frame& frame) {
  const Mat g = m.base.metric_at(p);
  const MultiArray k = m.base.k_at(p);
  const Mat phi = m.contact.phi(p.coords());
  double worst = 0.0;
  for (const Vec& e : frame.vectors)
    for (const Vec& f : frame.vectors)
      worst = std::max(worst, norm(g, apply_bilinear(k, e, phi * f) + phi * apply_bilinear(k, e, f)));
  return worst;
}

Vec model_curvature(double c_bar, const Mat& g, const Mat& phi, const Vec& xi, const Vec& e, const Vec& f,
                    const Vec& gv) {
  const Vec pe = phi * e, pf = phi * f, pg = phi * gv;
  const double eta_e = inner(g, e, xi), eta_f = inner(g, f, xi), eta_g = inner(g, gv, xi);
  const Vec first = inner(g, f, gv) * e - inner(g, e, gv) * f;
  const Vec second = inner(g, pf, gv) * pe - inner(g, pe, gv) * pf - 2.0 * inner(g, pe, f) * pg -
                     eta_f * eta_g * e + eta_e * eta_g * f + eta_f * inner(g, gv, e) * xi -
                     eta_e * inner(g, gv, f) * xi;
  return (c_bar - 3.0) / 4.0 * first + (c_bar + 1.0) / 4.0 * second;
}

MultiArray model_curvature_tensor(double c_bar, const Mat& g, const Mat& phi, const Vec& xi) {
  const int n = static_cast<int>(g.rows());
  MultiArray r({n, n, n, n});
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Vec v = model_curvature(c_bar, g, phi, xi, Vec::Unit(n, i), Vec::Unit(n, j), Vec::Unit(n, k));
        for (int l = 0; l < n; ++l) r(l, k, i, j) = v[l];
      }
  return r;
}

RicciCoefficients model_ricci_coefficients(double c_bar, int s) {
  return {(c_bar * (s + 1) - 3.0 * s + 1.0) / 2.0, -(c_bar + 1.0) * (s + 1) / 2.0};
}

double model_ricci(double c_bar, int s, const Vec& e, const Vec& f, const Mat& g, const Vec& xi) {
  const RicciCoefficients t = model_ricci_coefficients(c_bar, s);
  return t.t1 * inner(g, e, f) + t.t2 * inner(g, e, xi) * inner(g, f, xi);
}

double model_ricci_trace(double c_bar, const Mat& g, const Mat& phi, const Vec& xi, const Vec& e, const Vec& f) {
  const int n = static_cast<int>(g.rows());
  Frame basis;
  for (int i = 0; i < n; ++i) basis.vectors.push_back(Vec::Unit(n, i));
  const Frame on = gram_schmidt(basis, g);
  double sum = 0.0;
  for (const Vec& ei : on.vectors) sum += inner(g, model_curvature(c_bar, g, phi, xi, ei, e, f), ei);
  return sum;
}

double fiber_ricci_expected(double c_bar, int s, double alpha, double g_fiber_ee) {
  return std::exp(2.0 * alpha) * (c_bar + 1.0) * (s + 1) / 2.0 * g_fiber_ee;
}

FiberRicciCheck fiber_ricci_check(const HolomorphicStatisticalManifold& fiber, double c_bar, double alpha,
                                  const ChartPoint& p, const Vec& e, std::uint64_t seed) {
  const CurvatureSample cs = curvature_sample(fiber.base, p);
  const double len_sq = inner(cs.g, e, e);
  FiberRicciCheck out;
  out.measured = len_sq * ricci_curvature(cs, e, CurvatureKind::statistical, seed);
  out.expected = fiber_ricci_expected(c_bar, fiber.base.dim / 2, alpha, len_sq);
  out.residual = std::abs(out.measured - out.expected);
  return out;
}

const char* SignedResidual::matches(double tol) const {
  const bool a = as_stated <= tol, b = flipped <= tol;
  if (a && b) return "both";
  if (a) return "stated";
  if (b) return "flipped";
  return "neither";
}

StructureCurvatureIdentities structure_curvature_identities(const KenmotsuStatisticalManifold& m,
                                                            const CurvatureSample& cs, const Frame& frame,
                                                            CurvatureKind kind) {
  const Mat& g = cs.g;
  const Vec xi = m.contact.xi(cs.point.coords());
  const Mat phi = m.contact.phi(cs.point.coords());
  auto R = [&](const Vec& a, const Vec& b, const Vec& c) { return cs.apply(kind, a, b, c); };
  auto eta = [&](const Vec& a) { return inner(g, a, xi); };
  auto record = [&](SignedResidual& r, const Vec& lhs, const Vec& rhs) {
    r.as_stated = std::max(r.as_stated, norm(g, lhs - rhs));
    r.flipped = std::max(r.flipped, norm(g, lhs + rhs));
  };

  StructureCurvatureIdentities out;
  for (const Vec& e : frame.vectors) {
    const double sec = inner(g, R(e, xi, xi), e);
    const double sec_rhs = inner(g, e, e) - eta(e) * eta(e);
    out.xi_sectional.as_stated = std::max(out.xi_sectional.as_stated, std::abs(sec - sec_rhs));
    out.xi_sectional.flipped = std::max(out.xi_sectional.flipped, std::abs(sec + sec_rhs));
    for (const Vec& f : frame.vectors) {
      record(out.r_e_f_xi, R(e, f, xi), eta(f) * e - eta(e) * f);
      record(out.r_xi_e_f, R(xi, e, f), inner(g, e, f) * xi - eta(f) * e);
      const Vec pe = phi * e, pf = phi * f;
      record(out.r_phie_xi_f, R(pe, xi, f), eta(f) * pe - inner(g, pe, f) * xi);
      record(out.sum_identity, R(e, pf, xi) + R(xi, e, pf), -R(pf, xi, e));
    }
  }
  return out;
}

HolomorphicStatisticalManifold flat_fiber(int s, double box) {
  const int m = 2 * s;
  HolomorphicStatisticalManifold f;
  f.base.name = "flat-fiber";
  f.base.dim = m;
  f.base.metric = {m, [m](const Vec&) { return Mat(Mat::Identity(m, m)); }};
  f.base.ktensor = DifferenceTensorField::zero(m);
  f.base.box = {Vec::Constant(m, -box), Vec::Constant(m, box)};
  f.j = [m](const Vec&) {
    Mat j = Mat::Zero(m, m);
    for (int a = 0; a < m; a += 2) {
      j(a + 1, a) = 1.0;
      j(a, a + 1) = -1.0;
    }
    return j;
  };
  return f;
}

HolomorphicStatisticalManifold two_dim_fiber(double lambda, bool conformal) {
  HolomorphicStatisticalManifold f;
  f.base.name = conformal ? "half-plane-fiber" : "flat-half-plane-fiber";
  f.base.dim = 2;
  if (conformal) {
    f.base.metric = {2, [](const Vec& x) { return Mat(x[0] * Mat::Identity(2, 2)); }};
  } else {
    f.base.metric = {2, [](const Vec&) { return Mat(Mat::Identity(2, 2)); }};
  }
  f.base.ktensor = {2, [lambda](const Vec&) {
                      MultiArray k({2, 2, 2});
                      k(0, 0, 0) = -lambda;
                      k(1, 0, 1) = lambda;
                      k(1, 1, 0) = lambda;
                      k(0, 1, 1) = lambda;
                      return k;
                    }};
  f.base.domain = [](const Vec& x) { return x[0] > 0.0; };
  f.base.box = {Vec(2), Vec(2)};
  f.base.box.lo << 0.5, -1.0;
  f.base.box.hi << 2.0, 1.0;
  f.j = [](const Vec&) {
    Mat j(2, 2);
    j << 0.0, -1.0, 1.0, 0.0;
    return j;
  };
  return f;
}

StatisticalManifold round_sphere(int n) {
  StatisticalManifold m;
  m.name = "round-sphere";
  m.dim = n;
  m.metric = {n, [n](const Vec& x) {
                const double c = 2.0 / (1.0 + x.squaredNorm());
                return Mat(c * c * Mat::Identity(n, n));
              }};
  m.ktensor = DifferenceTensorField::zero(n);
  m.box = {Vec::Constant(n, -1.0), Vec::Constant(n, 1.0)};
  return m;
}

StatisticalManifold euclidean_space(int n) {
  StatisticalManifold m;
  m.name = "euclidean";
  m.dim = n;
  m.metric = {n, [n](const Vec&) { return Mat(Mat::Identity(n, n)); }};
  m.ktensor = DifferenceTensorField::zero(n);
  m.box = {Vec::Constant(n, -1.0), Vec::Constant(n, 1.0)};
  return m;
}

}  // namespace kenstat
