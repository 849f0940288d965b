#include "kenstat/submanifold.hpp"

#include <algorithm>
#include <limits>

namespace kenstat {

namespace {

// Coefficients of the g_bar-orthogonal projection of v onto the columns of j.
Vec tangent_coefficients(const Mat& j, const Mat& gbar, const Vec& v) {
  const Mat gram = j.transpose() * gbar * j;
  return gram.ldlt().solve(j.transpose() * (gbar * v));
}

}  // namespace

Mat immersion_jacobian(const Immersion& imm, const Vec& u) {
  Mat j(imm.ambient_dim(), imm.src_dim);
  for (int a = 0; a < imm.src_dim; ++a) j.col(a) = richardson_partial(imm.map, u, a, imm.fd.first, imm.src_domain);
  return j;
}

StatisticalManifold induced_manifold(const Immersion& imm) {
  const int k = imm.src_dim;
  StatisticalManifold m;
  m.name = imm.name;
  m.dim = k;
  m.metric = {k, [imm](const Vec& u) {
                const Mat j = immersion_jacobian(imm, u);
                return Mat(j.transpose() * imm.ambient.manifold.metric.eval(imm.map(u)) * j);
              }};
  m.ktensor = {k, [imm, k](const Vec& u) {
                 const Mat j = immersion_jacobian(imm, u);
                 const Vec x = imm.map(u);
                 const Mat gbar = imm.ambient.manifold.metric.eval(x);
                 const MultiArray kbar = imm.ambient.manifold.ktensor.eval(x);
                 MultiArray kn({k, k, k});
                 for (int a = 0; a < k; ++a)
                   for (int b = 0; b < k; ++b) {
                     const Vec c = tangent_coefficients(j, gbar, apply_bilinear(kbar, j.col(a), j.col(b)));
                     for (int d = 0; d < k; ++d) kn(d, a, b) = c[d];
                   }
                 return kn;
               }};
  m.domain = [imm](const Vec& u) {
    if (imm.src_domain && !imm.src_domain(u)) return false;
    return imm.ambient.manifold.contains(imm.map(u));
  };
  m.box = imm.src_box;
  m.fd = imm.fd;
  return m;
}

Vec SubmanifoldGeometry::h(const Vec& x, const Vec& y) const { return apply_bilinear(h_coord, x, y); }
Vec SubmanifoldGeometry::h_star(const Vec& x, const Vec& y) const { return apply_bilinear(h_star_coord, x, y); }
Vec SubmanifoldGeometry::tangential(const Vec& v) const { return tangent_coefficients(jacobian, g_bar, v); }

SubmanifoldGeometry induced_geometry(const Immersion& imm, const ChartPoint& p, std::uint64_t seed,
                                     const Vec& first_direction) {
  const int k = imm.src_dim;
  const int n = imm.ambient_dim();
  const Vec& u = p.coords();
  SubmanifoldGeometry geo;
  geo.point = p;
  geo.ambient_point = ChartPoint(imm.map(u));
  geo.jacobian = immersion_jacobian(imm, u);
  geo.g_bar = imm.ambient.manifold.metric_at(geo.ambient_point);
  geo.induced_g = geo.jacobian.transpose() * geo.g_bar * geo.jacobian;

  Eigen::SelfAdjointEigenSolver<Mat> eig(geo.induced_g);
  const double top = eig.eigenvalues().maxCoeff();
  if (!(eig.eigenvalues().minCoeff() > 1e-10 * std::max(1.0, top))) {
    throw GeometryError(GeometryError::Kind::rank_deficiency, imm.name + ": differential is not injective");
  }

  // nabla-bar_{d_a} (iota_* d_b) = d_a d_b iota + Gamma-bar(d_a iota, d_b iota)
  std::vector<Mat> second(static_cast<std::size_t>(k));
  for (int a = 0; a < k; ++a) {
    auto col = [&imm](const Vec& w) { return immersion_jacobian(imm, w); };
    second[static_cast<std::size_t>(a)] = richardson_partial(col, u, a, imm.fd.second, imm.src_domain);
  }
  const ChristoffelSet gam = dual_christoffels(imm.ambient.manifold, geo.ambient_point);
  geo.h_coord = MultiArray({n, k, k});
  geo.h_star_coord = MultiArray({n, k, k});
  geo.connection = MultiArray({k, k, k});
  geo.connection_star = MultiArray({k, k, k});
  auto split = [&](const MultiArray& gamma, MultiArray& h_out, MultiArray& conn_out) {
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        const Vec v = second[static_cast<std::size_t>(a)].col(b) +
                      apply_connection(gamma, geo.jacobian.col(a), geo.jacobian.col(b));
        const Vec c = geo.tangential(v);
        const Vec normal = v - geo.jacobian * c;
        for (int d = 0; d < k; ++d) conn_out(d, a, b) = c[d];
        for (int A = 0; A < n; ++A) h_out(A, a, b) = normal[A];
        geo.split_residual = std::max(geo.split_residual, (geo.jacobian * c + normal - v).cwiseAbs().maxCoeff());
      }
  };
  split(gam.primal, geo.h_coord, geo.connection);
  split(gam.dual, geo.h_star_coord, geo.connection_star);

  Frame candidates{geo.ambient_point, {}, false};
  if (first_direction.size() == k) candidates.vectors.push_back(geo.jacobian * first_direction);
  for (int a = 0; a < k; ++a) candidates.vectors.push_back(geo.jacobian.col(a));
  Frame tangent{geo.ambient_point, {}, true};
  for (const Vec& v : candidates.vectors) {
    if (tangent.size() == k) break;
    Frame trial = tangent;
    trial.vectors.push_back(v);
    try {
      tangent = gram_schmidt(trial, geo.g_bar, 1e-8);
    } catch (const GeometryError&) {
      if (tangent.size() == 0) throw;
    }
  }
  geo.tangent_frame = tangent;
  geo.tangent_src = Mat(k, k);
  for (int i = 0; i < k; ++i) geo.tangent_src.col(i) = geo.tangential(tangent.vectors[i]);
  const Frame full = extend_frame(tangent, geo.g_bar, seed);
  geo.normal_frame = Frame{geo.ambient_point, {full.vectors.begin() + k, full.vectors.end()}, true};
  return geo;
}

ShapeOperators shape_operators(const Immersion& imm, const SubmanifoldGeometry& geom, const Vec& u, double tol) {
  const int k = geom.src_dim();
  const Mat& gbar = geom.g_bar;
  const double len = norm(gbar, u);
  if (norm(gbar, geom.push(geom.tangential(u))) > tol * std::max(1.0, len)) {
    throw GeometryError(GeometryError::Kind::invalid_normal, "shape operator: U is not normal to the submanifold");
  }
  Mat b(k, k), b_star(k, k);
  for (int a = 0; a < k; ++a)
    for (int c = 0; c < k; ++c) {
      b(a, c) = inner(gbar, geom.h_star(Vec::Unit(k, a), Vec::Unit(k, c)), u);
      b_star(a, c) = inner(gbar, geom.h(Vec::Unit(k, a), Vec::Unit(k, c)), u);
    }
  const Eigen::LDLT<Mat> g_solve(geom.induced_g);
  ShapeOperators out;
  out.a = g_solve.solve(b);
  out.a_star = g_solve.solve(b_star);

  // Extend U as the normal projection of the constant ambient vector.
  auto field = [&imm, u](const Vec& w) {
    const Mat j = immersion_jacobian(imm, w);
    const Mat g = imm.ambient.manifold.metric.eval(imm.map(w));
    return Vec(u - j * tangent_coefficients(j, g, u));
  };
  const ChristoffelSet gam = dual_christoffels(imm.ambient.manifold, geom.ambient_point);
  out.normal_connection = Mat(geom.ambient_dim(), k);
  out.normal_connection_star = Mat(geom.ambient_dim(), k);
  for (int a = 0; a < k; ++a) {
    const Vec du = richardson_partial(field, geom.point.coords(), a, imm.fd.second, imm.src_domain);
    const Vec& ja = geom.jacobian.col(a);
    const Vec d = du + apply_connection(gam.primal, ja, u);
    const Vec d_star = du + apply_connection(gam.dual, ja, u);
    const Vec t = geom.tangential(d), t_star = geom.tangential(d_star);
    out.weingarten = std::max(out.weingarten, norm(gbar, geom.push(t + out.a.col(a))));
    out.weingarten_star = std::max(out.weingarten_star, norm(gbar, geom.push(t_star + out.a_star.col(a))));
    out.normal_connection.col(a) = d - geom.push(t);
    out.normal_connection_star.col(a) = d_star - geom.push(t_star);
  }
  return out;
}

CurvatureSample intrinsic_curvature(const Immersion& imm, const SubmanifoldGeometry& geom) {
  return curvature_sample(induced_manifold(imm), geom.point);
}

GaussResiduals gauss_equation_residual(const Immersion& imm, const SubmanifoldGeometry& geom,
                                       const CurvatureSample& ambient, const CurvatureSample& intrinsic,
                                       const Vec& e, const Vec& f, const Vec& gv, const Vec& hv) {
  const Mat& gbar = geom.g_bar;
  const Vec pe = geom.push(e), pf = geom.push(f), pg = geom.push(gv), ph = geom.push(hv);
  auto hh = [&](const Vec& x, const Vec& y) { return geom.h(x, y); };
  auto hs = [&](const Vec& x, const Vec& y) { return geom.h_star(x, y); };
  GaussResiduals out;
  out.res = std::abs(ambient.lowered(CurvatureKind::primal, pe, pf, pg, ph) -
                     intrinsic.lowered(CurvatureKind::primal, e, f, gv, hv) - inner(gbar, hh(e, gv), hs(f, hv)) +
                     inner(gbar, hs(e, hv), hh(f, gv)));
  out.res_star = std::abs(ambient.lowered(CurvatureKind::dual, pe, pf, pg, ph) -
                          intrinsic.lowered(CurvatureKind::dual, e, f, gv, hv) -
                          inner(gbar, hs(e, gv), hh(f, hv)) + inner(gbar, hh(e, hv), hs(f, gv)));
  if (const auto c = imm.ambient.c_bar()) {
    const AlmostContactData& ct = *imm.ambient.contact();
    const Vec& x = geom.ambient_point.coords();
    const double model = inner(gbar, model_curvature(*c, gbar, ct.phi(x), ct.xi(x), pe, pf, pg), ph);
    const double rhs = model + 0.5 * (inner(gbar, hs(e, hv), hh(f, gv)) + inner(gbar, hh(e, hv), hs(f, gv))) -
                       0.5 * (inner(gbar, hh(e, gv), hs(f, hv)) + inner(gbar, hs(e, gv), hh(f, hv)));
    out.res_model = std::abs(intrinsic.lowered(CurvatureKind::statistical, e, f, gv, hv) - rhs);
  }
  return out;
}

MeanCurvatures mean_curvatures(const SubmanifoldGeometry& geom) {
  const int k = geom.src_dim();
  MeanCurvatures m;
  m.h_mean = Vec::Zero(geom.ambient_dim());
  m.h_star_mean = Vec::Zero(geom.ambient_dim());
  for (int i = 0; i < k; ++i) {
    const Vec t = geom.tangent_src.col(i);
    m.h_mean += geom.h(t, t);
    m.h_star_mean += geom.h_star(t, t);
  }
  m.h_mean /= k;
  m.h_star_mean /= k;
  Vec h0_sum = Vec::Zero(geom.ambient_dim());
  for (int i = 0; i < k; ++i) {
    const Vec t = geom.tangent_src.col(i);
    h0_sum += geom.h0(t, t);
  }
  m.h0_mean = h0_sum / k;
  const Mat& g = geom.g_bar;
  m.h_norm_sq = inner(g, m.h_mean, m.h_mean);
  m.h_star_norm_sq = inner(g, m.h_star_mean, m.h_star_mean);
  m.h0_norm_sq = inner(g, m.h0_mean, m.h0_mean);
  m.g_h_hstar = inner(g, m.h_mean, m.h_star_mean);
  m.polarization_residual = norm(g, 2.0 * m.h0_mean - m.h_mean - m.h_star_mean);
  return m;
}

PcSplit pc_decomposition(const SubmanifoldGeometry& geom, const AlmostContactData& contact, const Vec& e) {
  const Vec v = contact.phi(geom.ambient_point.coords()) * geom.push(e);
  PcSplit out;
  out.p = geom.push(geom.tangential(v));
  out.c = v - out.p;
  out.p_norm_sq = inner(geom.g_bar, out.p, out.p);
  out.c_norm_sq = inner(geom.g_bar, out.c, out.c);
  return out;
}

double p_norm_sq(const SubmanifoldGeometry& geom, const AlmostContactData& contact) {
  const Mat phi = contact.phi(geom.ambient_point.coords());
  double sum = 0.0;
  for (const Vec& ei : geom.tangent_frame.vectors)
    for (const Vec& ej : geom.tangent_frame.vectors) {
      const double v = inner(geom.g_bar, phi * ei, ej);
      sum += v * v;
    }
  return sum;
}

const char* to_string(InvarianceClass c) {
  switch (c) {
    case InvarianceClass::invariant: return "invariant";
    case InvarianceClass::anti_invariant: return "anti_invariant";
    case InvarianceClass::generic: return "generic";
  }
  return "unknown";
}

InvarianceReport classify_invariance(const Immersion& imm, const std::vector<ChartPoint>& samples, double tol) {
  const AlmostContactData* ct = imm.ambient.contact();
  if (!ct) throw GeometryError(GeometryError::Kind::precondition, imm.name + ": ambient carries no phi");
  InvarianceReport r;
  for (const ChartPoint& p : samples) {
    const SubmanifoldGeometry geo = induced_geometry(imm, p);
    for (int i = 0; i < geo.src_dim(); ++i) {
      const PcSplit s = pc_decomposition(geo, *ct, geo.tangent_src.col(i));
      r.max_c = std::max(r.max_c, std::sqrt(s.c_norm_sq));
      r.max_p = std::max(r.max_p, std::sqrt(s.p_norm_sq));
    }
  }
  if (r.max_c < tol) {
    r.kind = InvarianceClass::invariant;
  } else if (r.max_p < tol) {
    r.kind = InvarianceClass::anti_invariant;
  } else {
    r.kind = InvarianceClass::generic;
  }
  return r;
}

ConstantCurvatureReport constant_curvature_check(const Immersion& imm, const std::vector<ChartPoint>& samples,
                                                 double tol) {
  ConstantCurvatureReport rep;
  const auto c = imm.ambient.c_bar();
  const AlmostContactData* ct = imm.ambient.contact();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  rep.preconditions.push_back({"ambient of constant phi-sectional curvature -1", c ? *c : nan,
                               c.has_value() && std::abs(*c + 1.0) < 1e-12});

  double xi_normal = 0.0, c_part = 0.0, umb = 0.0, umb_star = 0.0;
  double kappa_lo = std::numeric_limits<double>::infinity(), kappa_hi = -kappa_lo;
  bool first = true;
  for (const ChartPoint& p : samples) {
    const SubmanifoldGeometry geo = induced_geometry(imm, p);
    const MeanCurvatures mc = mean_curvatures(geo);
    const int k = geo.src_dim();
    const Mat& gb = geo.g_bar;
    if (ct) {
      const Vec xi = ct->xi(geo.ambient_point.coords());
      xi_normal = std::max(xi_normal, norm(gb, geo.normal_part(xi)));
      for (int i = 0; i < k; ++i)
        c_part = std::max(c_part, std::sqrt(pc_decomposition(geo, *ct, geo.tangent_src.col(i)).c_norm_sq));
    }
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        const Vec ti = geo.tangent_src.col(i), tj = geo.tangent_src.col(j);
        const double d = i == j ? 1.0 : 0.0;
        umb = std::max(umb, norm(gb, geo.h(ti, tj) - d * mc.h_mean));
        umb_star = std::max(umb_star, norm(gb, geo.h_star(ti, tj) - d * mc.h_star_mean));
      }
    const double kappa = mc.g_h_hstar - 1.0;
    kappa_lo = std::min(kappa_lo, kappa);
    kappa_hi = std::max(kappa_hi, kappa);
    if (first) rep.curvature_value = kappa;
    first = false;

    const CurvatureSample cs = intrinsic_curvature(imm, geo);
    const Mat& g = geo.induced_g;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        for (int l = 0; l < k; ++l) {
          const Vec e = geo.tangent_src.col(i), f = geo.tangent_src.col(j), gv = geo.tangent_src.col(l);
          const Vec expect = kappa * (inner(g, f, gv) * e - inner(g, e, gv) * f);
          rep.residual = std::max(rep.residual, norm(g, cs.apply(CurvatureKind::primal, e, f, gv) - expect));
        }
  }
  rep.preconditions.push_back({"xi tangent to N", ct ? xi_normal : nan, ct != nullptr && xi_normal < tol});
  rep.preconditions.push_back({"phi(TN) inside TN", ct ? c_part : nan, ct != nullptr && c_part < tol});
  rep.preconditions.push_back({"h = g H", umb, umb < tol});
  rep.preconditions.push_back({"h* = g H*", umb_star, umb_star < tol});
  const double spread = samples.empty() ? 0.0 : kappa_hi - kappa_lo;
  rep.preconditions.push_back({"g(H, H*) constant", spread, spread < tol});
  rep.preconditions_hold =
      std::all_of(rep.preconditions.begin(), rep.preconditions.end(), [](const auto& s) { return s.ok; });
  return rep;
}

std::vector<ChartPoint> sample_source_points(const Immersion& imm, int count, std::uint64_t seed,
                                             std::uint64_t stream) {
  return sample_points(induced_manifold(imm), count, seed, stream);
}

}  // namespace kenstat
