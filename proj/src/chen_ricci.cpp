#include "kenstat/chen_ricci.hpp"

#include <algorithm>
#include <limits>

namespace kenstat {

double kenmotsu_bracket(const RicciBoundInput& inp) {
  const double c1 = inp.c_bar + 1.0;
  return 3.0 * c1 / 4.0 * inp.P_E_norm_sq + inp.k / 4.0 * (c1 * (1.0 - inp.g_E_xi * inp.g_E_xi) - 4.0);
}

namespace {

double mean_term(const RicciBoundInput& inp) {
  const double kp1 = inp.k + 1.0;
  return kp1 * kp1 / 8.0 * (inp.H_norm_sq + inp.H_star_norm_sq);
}

void require(bool ok, BoundVariant v, const char* what) {
  if (!ok) {
    throw GeometryError(GeometryError::Kind::precondition, std::string(to_string(v)) + " bound requires " + what);
  }
}

}  // namespace

double ricci_bound_rhs(const RicciBoundInput& inp) {
  return 2.0 * inp.ric0_E - kenmotsu_bracket(inp) - mean_term(inp);
}

const char* to_string(BoundVariant v) {
  switch (v) {
    case BoundVariant::mean_curvature_form: return "mean_curvature_form";
    case BoundVariant::minimal: return "minimal";
    case BoundVariant::orthogonal_xi: return "orthogonal_xi";
    case BoundVariant::invariant: return "invariant";
    case BoundVariant::anti_invariant: return "anti_invariant";
    case BoundVariant::hyperbolic_literal: return "hyperbolic_literal";
    case BoundVariant::hyperbolic_general: return "hyperbolic_general";
  }
  return "unknown";
}

double corollary_bounds(const RicciBoundInput& inp, BoundVariant variant, double tol) {
  const double kp1 = inp.k + 1.0;
  const double c = inp.c_bar;
  const double k = inp.k;
  switch (variant) {
    case BoundVariant::mean_curvature_form:
      return 2.0 * inp.ric0_E - kenmotsu_bracket(inp) - kp1 * kp1 / 2.0 * inp.H0_norm_sq +
             kp1 * kp1 / 4.0 * inp.g_H_Hstar;
    case BoundVariant::minimal:
      require(inp.H0_norm_sq <= tol, variant, "H0 = 0");
      return 2.0 * inp.ric0_E - kenmotsu_bracket(inp) + kp1 * kp1 / 4.0 * inp.g_H_Hstar;
    case BoundVariant::orthogonal_xi:
      require(std::abs(inp.g_E_xi) <= tol, variant, "E orthogonal to xi");
      return 2.0 * inp.ric0_E - (3.0 * (c + 1.0) / 4.0 * inp.P_E_norm_sq + (c - 3.0) * k / 4.0) - mean_term(inp);
    case BoundVariant::invariant:
      require(std::abs(inp.g_E_xi) <= tol, variant, "E orthogonal to xi");
      require(std::abs(inp.P_E_norm_sq - 1.0) <= tol, variant, "|PE|^2 = 1");
      return 2.0 * inp.ric0_E - (c * (k + 3.0) + 3.0 * (1.0 - k)) / 4.0 - mean_term(inp);
    case BoundVariant::anti_invariant:
      require(std::abs(inp.g_E_xi) <= tol, variant, "E orthogonal to xi");
      require(std::abs(inp.P_E_norm_sq) <= tol, variant, "|PE|^2 = 0");
      return 2.0 * inp.ric0_E - k * (c - 3.0) / 4.0 - mean_term(inp);
    case BoundVariant::hyperbolic_literal:
      require(std::abs(c + 1.0) <= tol, variant, "c = -1");
      return 2.0 * inp.ric0_E + 4.0 - mean_term(inp);
    case BoundVariant::hyperbolic_general:
      require(std::abs(c + 1.0) <= tol, variant, "c = -1");
      return 2.0 * inp.ric0_E + k - mean_term(inp);
  }
  return 0.0;
}

double EqualityResiduals::max() const { return std::max({h_diagonal, h_star_diagonal, h_mixed, h_star_mixed}); }

EqualityResiduals equality_case_check(const SubmanifoldGeometry& geom) {
  const int n = geom.src_dim();
  const MeanCurvatures mc = mean_curvatures(geom);
  const Mat& g = geom.g_bar;
  const Vec e = geom.tangent_src.col(0);
  EqualityResiduals r;
  r.h_diagonal = norm(g, 2.0 * geom.h(e, e) - n * mc.h_mean);
  r.h_star_diagonal = norm(g, 2.0 * geom.h_star(e, e) - n * mc.h_star_mean);
  for (int i = 1; i < n; ++i) {
    const Vec f = geom.tangent_src.col(i);
    r.h_mixed = std::max(r.h_mixed, norm(g, geom.h(e, f)));
    r.h_star_mixed = std::max(r.h_star_mixed, norm(g, geom.h_star(e, f)));
  }
  return r;
}

EqualityResiduals equality_case_check(const std::vector<std::vector<Vec>>& h,
                                      const std::vector<std::vector<Vec>>& hs) {
  const int n = static_cast<int>(h.size());
  Vec hm = Vec::Zero(h[0][0].size()), hsm = Vec::Zero(h[0][0].size());
  for (int i = 0; i < n; ++i) {
    hm += h[i][i];
    hsm += hs[i][i];
  }
  hm /= n;
  hsm /= n;
  EqualityResiduals r;
  r.h_diagonal = (2.0 * h[0][0] - n * hm).norm();
  r.h_star_diagonal = (2.0 * hs[0][0] - n * hsm).norm();
  for (int i = 1; i < n; ++i) {
    r.h_mixed = std::max(r.h_mixed, h[0][i].norm());
    r.h_star_mixed = std::max(r.h_star_mixed, hs[0][i].norm());
  }
  return r;
}

InequalityVerdict verify_inequality(const Immersion& imm, const ChartPoint& p, const Vec& e, std::uint64_t seed,
                                    double equality_tol) {
  const auto c = imm.ambient.c_bar();
  const AlmostContactData* ct = imm.ambient.contact();
  if (!c || !ct) {
    throw GeometryError(GeometryError::Kind::precondition,
                        imm.name + ": the Ricci bound needs an ambient with declared phi-sectional curvature");
  }
  const SubmanifoldGeometry geo = induced_geometry(imm, p, seed, e);
  const Vec unit = geo.tangent_src.col(0);
  const CurvatureSample cs = intrinsic_curvature(imm, geo);
  const MeanCurvatures mc = mean_curvatures(geo);
  const Vec xi = ct->xi(geo.ambient_point.coords());

  InequalityVerdict v;
  RicciBoundInput& in = v.input;
  in.c_bar = *c;
  in.k = geo.src_dim() - 1;
  in.P_E_norm_sq = pc_decomposition(geo, *ct, unit).p_norm_sq;
  in.g_E_xi = inner(geo.g_bar, geo.push(unit), xi);
  in.ric0_E = ricci_curvature(cs, unit, CurvatureKind::levi_civita, seed);
  in.H_norm_sq = mc.h_norm_sq;
  in.H_star_norm_sq = mc.h_star_norm_sq;
  in.H0_norm_sq = mc.h0_norm_sq;
  in.g_H_Hstar = mc.g_h_hstar;

  v.lhs = ricci_curvature(cs, unit, CurvatureKind::statistical, seed);
  v.rhs = ricci_bound_rhs(in);
  v.margin = v.lhs - v.rhs;
  v.ric_levi_civita = in.ric0_E;
  v.equality_conditions = equality_case_check(geo);
  v.equality = v.equality_conditions.holds(equality_tol);

  double quad = 0.0;
  const Vec h0_11 = geo.h0(unit, unit);
  for (int i = 1; i < geo.src_dim(); ++i) {
    const Vec t = geo.tangent_src.col(i);
    const Vec h0_1i = geo.h0(unit, t);
    quad += inner(geo.g_bar, h0_11, geo.h0(t, t)) - inner(geo.g_bar, h0_1i, h0_1i);
  }
  v.chain_residual = std::abs(in.ric0_E - kenmotsu_bracket(in) - quad);
  return v;
}

double theta_form(const Vec& x) { return x[0] * (x.sum() - x[0]); }

QuadraticMax quadratic_form_max(int k_plus_1, double a, double lattice_step) {
  if (k_plus_1 < 2) throw std::invalid_argument("quadratic_form_max: need at least two variables");
  QuadraticMax out;
  out.max_value = a * a / 4.0;
  out.argmax = Vec::Constant(k_plus_1, a / (2.0 * (k_plus_1 - 1)));
  out.argmax[0] = a / 2.0;
  if (lattice_step > 0.0) {
    const int free = k_plus_1 - 1;
    const double radius = lattice_step * std::ceil((std::abs(a) + 1.0) / lattice_step);
    const long per_axis = std::lround(2.0 * radius / lattice_step) + 1;
    double total = 1.0;
    for (int i = 0; i < free; ++i) total *= static_cast<double>(per_axis);
    if (total > 2e7) throw std::invalid_argument("quadratic_form_max: lattice too large");
    std::vector<long> idx(static_cast<std::size_t>(free), 0);
    Vec x(k_plus_1);
    double best = -std::numeric_limits<double>::infinity();
    while (true) {
      double partial = 0.0;
      for (int i = 0; i < free; ++i) {
        x[i] = -radius + static_cast<double>(idx[static_cast<std::size_t>(i)]) * lattice_step;
        partial += x[i];
      }
      x[free] = a - partial;
      best = std::max(best, theta_form(x));
      int pos = 0;
      while (pos < free && ++idx[static_cast<std::size_t>(pos)] == per_axis) idx[static_cast<std::size_t>(pos++)] = 0;
      if (pos == free) break;
    }
    out.lattice_max = best;
  }
  return out;
}

HessianCheck hessian_form_check(int k_plus_1, const Vec& v, double tol) {
  if (v.size() != k_plus_1) throw std::invalid_argument("hessian_form_check: dimension mismatch");
  HessianCheck out;
  Vec w = v;
  if (std::abs(w.sum()) > tol * std::max(1.0, w.cwiseAbs().maxCoeff())) {
    w.array() -= w.mean();
    out.projected = true;
  }
  Mat hess = Mat::Zero(k_plus_1, k_plus_1);
  for (int i = 1; i < k_plus_1; ++i) hess(0, i) = hess(i, 0) = 1.0;
  out.value = w.dot(hess * w);
  out.closed_form = -2.0 * w[0] * w[0];
  return out;
}

}  // namespace kenstat
