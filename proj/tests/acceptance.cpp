// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "json.hpp"
#include "kenstat/chen_ricci.hpp"
#include "kenstat/suite.hpp"

#include <chrono>
#include <cstdio>
#include <regex>
#include <sstream>

using namespace kenstat;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Verdict {
  bool ok = true;
  std::ostringstream detail;

  void need(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [" << what << "]";
    }
  }
};

int failures = 0;

void report(int id, const std::string& title, Verdict& v) {
  if (!v.ok) ++failures;
  std::printf("%s  %2d  %s |%s\n", v.ok ? "PASS" : "FAIL", id, title.c_str(), v.detail.str().c_str());
  std::fflush(stdout);
}

Frame coordinate_frame(const ChartPoint& p) {
  Frame f{p, {}};
  for (int i = 0; i < p.dim(); ++i) f.vectors.push_back(Vec::Unit(p.dim(), i));
  return f;
}

MultiArray lower_curvature(const MultiArray& r, const Mat& g) {
  const int n = static_cast<int>(g.rows());
  MultiArray out({n, n, n, n});
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int m = 0; m < n; ++m) out(l, k, i, j) += g(l, m) * r(m, k, i, j);
  return out;
}

void statistical_axioms() {
  Verdict v;
  const auto t0 = Clock::now();
  for (const auto& spec : {"example_3_4(1,1)", "hyperbolic_kenmotsu(1)", "hyperbolic_kenmotsu(2)"}) {
    AmbientSpace a = make_manifold(spec);
    double duality = 0, codazzi = 0, sym = 0;
    for (const auto& p : sample_points(a.manifold, 100, 7)) {
      StatisticalResiduals r = check_statistical(a.manifold, p, coordinate_frame(p));
      duality = std::max(duality, r.duality);
      codazzi = std::max(codazzi, r.codazzi);
      sym = std::max(sym, r.k_symmetry);
    }
    v.detail << " " << spec << ": " << fmt(std::max({duality, codazzi, sym}));
    v.need(duality < 1e-6 && codazzi < 1e-6 && sym < 1e-6, std::string(spec) + " residual");
  }
  const double secs = seconds_since(t0);
  v.detail << "; " << fmt(secs) << " s";
  v.need(secs < 10, "runtime");
  report(1, "statistical axioms at 100 points", v);
}

void dual_path() {
  Verdict v;
  double worst = 0;
  for (const auto& spec : sweep_manifolds()) {
    AmbientSpace a = make_manifold(spec);
    for (const auto& p : sample_points(a.manifold, 50, 7, 2))
      worst = std::max(worst, curvature_sample(a.manifold, p).dual_path_residual());
  }
  v.detail << " max " << fmt(worst) << " over " << sweep_manifolds().size() << " manifolds";
  v.need(worst < 1e-6, "residual");
  report(2, "statistical curvature along both construction paths", v);
}

void constant_model() {
  Verdict v;
  for (int s : {1, 2}) {
    AmbientSpace a = make_manifold("hyperbolic_kenmotsu(" + std::to_string(s) + ")");
    double comp = 0, sect = 0;
    Rng rng(derive_seed(7, 3, s));
    for (const auto& p : sample_points(a.manifold, 50, 7, 3)) {
      CurvatureSample cs = curvature_sample(a.manifold, p);
      const MultiArray model =
          model_curvature_tensor(-1.0, cs.g, a.contact()->phi(p.coords()), a.contact()->xi(p.coords()));
      comp = std::max(comp, max_abs_diff(lower_curvature(cs.s, cs.g), lower_curvature(model, cs.g)));
      for (int t = 0; t < 5; ++t)
        sect = std::max(sect, std::abs(sectional_curvature(cs, rng.normal_vec(2 * s + 1), rng.normal_vec(2 * s + 1)) + 1));
    }
    v.detail << " s=" << s << ": components " << fmt(comp) << ", sectional " << fmt(sect);
    v.need(comp < 1e-5 && sect < 1e-5, "s=" + std::to_string(s));
  }
  report(3, "constant phi-sectional curvature -1 model", v);
}

void jacobi() {
  Verdict v;
  for (const auto& spec : {"hyperbolic_kenmotsu(1)", "example_3_4(1,1)"}) {
    AmbientSpace a = make_manifold(spec);
    double worst = 0, trans = 0;
    for (const auto& p : sample_points(a.manifold, 20, 7, 4)) {
      Frame fr = complete_frame({p, a.contact()->xi(p.coords())}, a.manifold.metric_at(p), 1);
      JacobiParallelism j = jacobi_parallelism_residual(a.manifold, a.contact()->xi, p, fr);
      worst = std::max(worst, j.residual);
      trans = std::max(trans, j.transverse);
    }
    v.detail << " " << spec << ": " << fmt(worst) << " (part orthogonal to xi " << fmt(trans) << ")";
    v.need(worst < 1e-4, spec);
  }
  report(4, "structure Jacobi operator parallel", v);
}

void ricci() {
  Verdict v;
  double fiber = 0;
  for (int s : {1, 2}) {
    HolomorphicStatisticalManifold f = flat_fiber(s);
    Rng rng(derive_seed(7, 5, s));
    for (const auto& p : sample_points(f.base, 20, 7, 5))
      fiber = std::max(fiber, fiber_ricci_check(f, -1.0, rng.uniform(-0.5, 0.5), p, rng.normal_vec(2 * s)).residual);
  }
  v.detail << " fiber " << fmt(fiber);
  v.need(fiber < 1e-5, "fiber Ricci");

  for (int s : {1, 2}) {
    AmbientSpace a = make_manifold("hyperbolic_kenmotsu(" + std::to_string(s) + ")");
    double e1 = 0, e2 = 0;
    for (const auto& p : sample_points(a.manifold, 20, 7, 6)) {
      CurvatureSample cs = curvature_sample(a.manifold, p);
      const Vec xi = a.contact()->xi(p.coords());
      Frame fr = complete_frame({p, xi}, cs.g, 2);
      // Ric = t1 g + t2 eta (x) eta on unit vectors
      const double t1 = ricci_curvature(cs, fr.vectors[1], CurvatureKind::statistical);
      const double t2 = ricci_curvature(cs, xi, CurvatureKind::statistical) - t1;
      e1 = std::max(e1, std::abs(t1 + 2.0 * s));
      e2 = std::max(e2, std::abs(t2));
    }
    v.detail << "; s=" << s << " |t1+2s| " << fmt(e1) << " |t2| " << fmt(e2);
    v.need(e1 < 1e-5 && e2 < 1e-5, "ambient Ricci s=" + std::to_string(s));
  }
  int zeros = 0;
  for (int s = 1; s <= 4; ++s)
    for (int i = -500; i <= 500; ++i) {
      const auto t = model_ricci_coefficients(0.01 * i, s);
      if (t.t1 == 0.0 && t.t2 == 0.0) ++zeros;
    }
  v.detail << "; Ricci-flat grid points " << zeros;
  v.need(zeros == 0, "Ricci flat on grid");
  report(5, "fiber and ambient Ricci", v);
}

struct Sweep {
  double min_margin = 1e300, max_margin = -1e300, chain = 0, equality = 0;
  int samples = 0;
  std::vector<std::string> violations;
};

Sweep sweep_inequality(const std::string& spec, int count, std::uint64_t stream) {
  Immersion imm = make_immersion(spec);
  Sweep out;
  const auto pts = sample_source_points(imm, count, 7, stream);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Rng rng(derive_seed(7, stream + 100, i));
    const Vec e = rng.normal_vec(imm.src_dim);
    InequalityVerdict v = verify_inequality(imm, pts[i], e, i);
    out.min_margin = std::min(out.min_margin, v.margin);
    out.max_margin = std::max(out.max_margin, v.margin);
    out.chain = std::max(out.chain, v.chain_residual);
    out.equality = std::max(out.equality, v.equality_conditions.max());
    ++out.samples;
    if (v.margin < -1e-5) {
      std::ostringstream s;
      s << spec << " at (";
      for (int k = 0; k < pts[i].dim(); ++k) s << (k ? "," : "") << fmt(pts[i][k]);
      s << ") E=(";
      for (int k = 0; k < e.size(); ++k) s << (k ? "," : "") << fmt(e[k]);
      s << ") lhs=" << fmt(v.lhs) << " rhs=" << fmt(v.rhs) << " margin=" << fmt(v.margin);
      out.violations.push_back(s.str());
    }
  }
  return out;
}

void equality_witnesses() {
  Verdict v;
  for (const auto& spec : {"xalpha_plane(0)", "fiber_slice(1,0,0)"}) {
    Sweep s = sweep_inequality(spec, 50, 7);
    v.detail << " " << spec << ": margin [" << fmt(s.min_margin) << ", " << fmt(s.max_margin) << "] equality "
             << fmt(s.equality);
    v.need(std::abs(s.min_margin) <= 1e-4 && std::abs(s.max_margin) <= 1e-4 && s.equality < 1e-6, spec);
  }
  Sweep g = sweep_inequality("perturbed_graph(0.3,0)", 50, 7);
  v.detail << "; perturbed graph min margin " << fmt(g.min_margin);
  v.need(g.min_margin > 1e-3, "perturbed graph");
  report(6, "Ricci inequality equality witnesses", v);
}

void inequality_sweep(double& chain_worst, int& chain_objects) {
  Verdict v;
  for (const auto& spec : sweep_immersions()) {
    if (!make_immersion(spec).ambient.c_bar()) continue;
    Sweep s = sweep_inequality(spec, 500, 8);
    chain_worst = std::max(chain_worst, s.chain);
    ++chain_objects;
    v.detail << " " << spec << " " << fmt(s.min_margin) << ";";
    for (const auto& line : s.violations) std::printf("      violation: %s\n", line.c_str());
    v.need(s.violations.empty() && s.samples == 500, spec);
  }
  report(7, "Ricci inequality over 500 samples per immersion", v);
}

void quadratic_form() {
  Verdict v;
  double worst = 0;
  const std::vector<std::pair<int, double>> lattice_steps = {{2, 0.01}, {3, 0.01}, {5, 0.25}};
  for (const auto& [n, step] : lattice_steps)
    for (double a : {-2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0}) {
      QuadraticMax q = quadratic_form_max(n, a, step);
      worst = std::max({worst, std::abs(q.max_value - a * a / 4), std::abs(*q.lattice_max - a * a / 4)});
    }
  Rng rng(derive_seed(7, 8, 0));
  double hess = -1e300;
  for (int t = 0; t < 1000; ++t) {
    const int n = 2 + t % 6;
    Vec d = rng.normal_vec(n);
    d.array() -= d.mean();
    hess = std::max(hess, hessian_form_check(n, d).value);
  }
  v.detail << " closed form vs lattice " << fmt(worst) << "; max Hessian value " << fmt(hess);
  v.need(worst < 1e-9, "maximum");
  v.need(hess <= 0, "Hessian sign");
  report(8, "constrained quadratic maximum and Hessian sign", v);
}

void chain(double worst, int objects) {
  Verdict v;
  v.detail << " max " << fmt(worst) << " over " << objects << " immersions";
  v.need(objects > 0 && worst < 1e-5, "residual");
  report(9, "Levi-Civita Gauss identity in the Ricci derivation", v);
}

void corollaries() {
  Verdict v;
  Rng rng(derive_seed(7, 10, 0));
  double rewrite = 0, special = 0;
  for (int t = 0; t < 1000; ++t) {
    RicciBoundInput in;
    in.c_bar = rng.uniform(-4, 4);
    in.k = 1 + t % 6;
    in.ric0_E = rng.uniform(-3, 3);
    in.P_E_norm_sq = rng.uniform();
    in.g_E_xi = rng.uniform(-1, 1);
    const Vec h = rng.normal_vec(3), hs = rng.normal_vec(3), h0 = 0.5 * (h + hs);
    in.H_norm_sq = h.squaredNorm();
    in.H_star_norm_sq = hs.squaredNorm();
    in.H0_norm_sq = h0.squaredNorm();
    in.g_H_Hstar = h.dot(hs);
    rewrite = std::max(rewrite, std::abs(corollary_bounds(in, BoundVariant::mean_curvature_form) - ricci_bound_rhs(in)));
    in.g_E_xi = 0;
    in.P_E_norm_sq = 1;
    special = std::max(special, std::abs(corollary_bounds(in, BoundVariant::invariant) - ricci_bound_rhs(in)));
    in.P_E_norm_sq = 0;
    special = std::max(special, std::abs(corollary_bounds(in, BoundVariant::anti_invariant) - ricci_bound_rhs(in)));
  }
  v.detail << " rewrite " << fmt(rewrite) << "; specializations " << fmt(special);
  v.need(rewrite < 1e-10, "rewrite");
  v.need(special < 1e-10, "specializations");
  report(10, "corollary algebra", v);
}

void determinism() {
  Verdict v;
  auto strip = [](const std::string& s) {
    return std::regex_replace(s, std::regex("\"runtime_ms\":\\s*[0-9.eE+-]+"), "\"runtime_ms\":0");
  };
  SuiteConfig cfg;
  const auto t0 = Clock::now();
  SuiteReport first = run_suite(cfg);
  const double secs = seconds_since(t0);
  const std::string a = strip(emit_report(first, "json"));
  const std::string b = strip(emit_report(run_suite(cfg), "json"));
  const auto s = first.summary();
  v.detail << " identical " << (a == b ? "yes" : "no") << "; all suite " << fmt(secs) << " s (" << s.passed
           << " passed, " << s.failed << " failed, " << s.skipped << " skipped)";
  v.need(a == b, "determinism");
  v.need(secs < 120, "runtime");
  report(11, "deterministic reports and full suite runtime", v);
}

}  // namespace

int main() {
  statistical_axioms();
  dual_path();
  constant_model();
  jacobi();
  ricci();
  equality_witnesses();
  double chain_worst = 0;
  int chain_objects = 0;
  inequality_sweep(chain_worst, chain_objects);
  quadratic_form();
  chain(chain_worst, chain_objects);
  corollaries();
  determinism();
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
