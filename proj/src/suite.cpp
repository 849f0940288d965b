#include "kenstat/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "kenstat/chen_ricci.hpp"
#include "json.hpp"

namespace kenstat {

using json = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void config_error(const std::string& msg) { throw GeometryError(GeometryError::Kind::config, msg); }

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fmt(double v, const char* spec = "%.3e") {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string fmt_vec(const Vec& v) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v[i], "%.4f");
  }
  return out + ")";
}

// Results land at their own index, so the outcome does not depend on scheduling.
template <class T, class F>
std::vector<T> parallel_map(int count, F fn) {
  std::vector<T> out(static_cast<std::size_t>(count));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        out[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(count, static_cast<int>(std::thread::hardware_concurrency())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

struct CheckDef {
  std::string name;
  std::string anchor;
  std::string tier;
  CheckKind kind = CheckKind::residual;
};

// One value per CheckDef; NaN means the check does not apply at this sample.
struct Sample {
  std::vector<double> values;
  std::string where;
};

class Context {
 public:
  Context(const SuiteConfig& cfg, std::vector<CheckRecord>& out) : cfg_(cfg), out_(out) {}

  const SuiteConfig& cfg() const { return cfg_; }

  double tol(const std::string& tier) const {
    auto it = cfg_.tolerances.find(tier);
    if (it == cfg_.tolerances.end()) config_error("no tolerance tier '" + tier + "'");
    return it->second;
  }

  std::uint64_t seed(const std::string& object, const std::string& suite) const {
    return derive_seed(cfg_.seed, fnv1a(suite + "/" + object), 0);
  }

  CheckStatus judge(CheckKind kind, double value, double t) const {
    if (!std::isfinite(value)) return CheckStatus::fail;
    switch (kind) {
      case CheckKind::residual: return value <= t ? CheckStatus::pass : CheckStatus::fail;
      case CheckKind::margin: return value >= -t ? CheckStatus::pass : CheckStatus::fail;
      case CheckKind::nonzero: return value > t ? CheckStatus::pass : CheckStatus::fail;
    }
    return CheckStatus::fail;
  }

  CheckRecord* find(const std::string& name, const std::string& object) {
    for (auto it = out_.rbegin(); it != out_.rend(); ++it)
      if (it->name == name && it->object == object) return &*it;
    return nullptr;
  }

  void record(const std::string& object, const CheckDef& def, double value, std::string detail = "") {
    CheckRecord r{def.name, object, def.anchor, value, tol(def.tier), def.tier, def.kind, CheckStatus::pass,
                  std::move(detail)};
    r.status = judge(def.kind, value, r.tol);
    out_.push_back(std::move(r));
  }

  void skip(const std::string& object, const CheckDef& def, std::string detail, double value = kNaN) {
    out_.push_back(
        {def.name, object, def.anchor, value, tol(def.tier), def.tier, def.kind, CheckStatus::skip, std::move(detail)});
  }

  void error(const std::string& object, const std::string& suite, const std::string& what) {
    out_.push_back({suite + ".evaluation", object, "evaluation completed without a geometry error", kNaN, 0.0, "exact",
                    CheckKind::residual, CheckStatus::fail, what});
  }

  // Worst value over samples per definition; records the location of the worst sample.
  void reduce(const std::string& object, const std::vector<CheckDef>& defs, const std::vector<Sample>& samples) {
    for (std::size_t d = 0; d < defs.size(); ++d) {
      const bool low = defs[d].kind != CheckKind::residual;
      double best = kNaN;
      int applicable = 0;
      const Sample* worst = nullptr;
      for (const Sample& s : samples) {
        const double v = s.values[d];
        if (std::isnan(v)) continue;
        ++applicable;
        if (worst == nullptr || (low ? v < best : v > best)) {
          best = v;
          worst = &s;
        }
      }
      if (applicable == 0) {
        skip(object, defs[d], "not applicable at any sample");
        continue;
      }
      std::string detail = "worst of " + std::to_string(applicable) + " samples at " + worst->where;
      record(object, defs[d], best, detail);
    }
  }

 private:
  const SuiteConfig& cfg_;
  std::vector<CheckRecord>& out_;
};

Frame coordinate_frame(const ChartPoint& p, const Mat& g) {
  Frame basis{p, {}, false};
  for (int i = 0; i < g.rows(); ++i) basis.vectors.push_back(Vec::Unit(g.rows(), i));
  return gram_schmidt(basis, g);
}

Vec random_unit(Rng& rng, const Mat& g) {
  const Vec v = rng.normal_vec(static_cast<int>(g.rows()));
  return v / norm(g, v);
}

double ricci_form(const CurvatureSample& cs, const Frame& onb, const Vec& e, const Vec& f) {
  double sum = 0.0;
  for (const Vec& ei : onb.vectors) sum += cs.lowered(CurvatureKind::statistical, ei, e, f, ei);
  return sum;
}

double lowered_difference(const MultiArray& a, const MultiArray& b, const Mat& g) {
  const int n = static_cast<int>(g.rows());
  double worst = 0.0;
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = 0.0;
          for (int m = 0; m < n; ++m) v += g(l, m) * (a(m, k, i, j) - b(m, k, i, j));
          worst = std::max(worst, std::abs(v));
        }
  return worst;
}

// ---------------------------------------------------------------- axioms

void axioms_suite(Context& ctx, const AmbientSpace& amb) {
  const StatisticalManifold& m = amb.manifold;
  const auto* km = amb.kenmotsu ? &*amb.kenmotsu : nullptr;
  std::vector<CheckDef> defs = {
      {"axioms.duality", "Z g(X,Y) = g(nabla_Z X, Y) + g(X, nabla*_Z Y)", "axiom"},
      {"axioms.codazzi", "(nabla_X g)(Y,Z) symmetric in X, Y", "axiom"},
      {"axioms.k_symmetry", "K(X,Y) = K(Y,X)", "axiom"},
      {"axioms.k_self_adjoint", "g(K(X,Y),Z) = g(Y,K(X,Z))", "axiom"},
      {"axioms.torsion_free", "Gamma and Gamma* symmetric in lower indices", "axiom"},
      {"axioms.dual_involution", "dual of the dual connection is the connection", "axiom"},
      {"axioms.lowered_k_symmetric", "lowered K fully symmetric", "exact"},
  };
  const std::size_t base = defs.size();
  if (km) {
    defs.push_back({"kenmotsu.almost_contact", "phi xi = 0, phi^2 = -I + eta xi, g(phi X, phi Y) = g - eta eta",
                    "exact"});
    defs.push_back({"kenmotsu.levi_civita_structure", "Levi-Civita derivatives of phi and xi of a Kenmotsu manifold",
                    "axiom"});
    defs.push_back({"kenmotsu.k_phi_anticommute", "K(X, phi Y) = -phi K(X, Y)", "axiom"});
    if (km->fiber) defs.push_back({"kenmotsu.fiber_holomorphic", "fiber is holomorphic statistical", "axiom"});
  }

  const auto pts = sample_points(m, ctx.cfg().points, ctx.seed(amb.spec, "axioms"));
  auto samples = parallel_map<Sample>(static_cast<int>(pts.size()), [&](int i) {
    const ChartPoint& p = pts[static_cast<std::size_t>(i)];
    Sample s{std::vector<double>(defs.size(), kNaN), "x=" + fmt_vec(p.coords())};
    const Mat g = m.metric_at(p);
    const Frame frame = coordinate_frame(p, g);
    const StatisticalResiduals r = check_statistical(m, p, frame);
    s.values[0] = r.duality;
    s.values[1] = r.codazzi;
    s.values[2] = r.k_symmetry;
    s.values[3] = r.self_adjointness;
    s.values[4] = r.torsion;
    s.values[5] = conjugate_involution_check(m, p);
    const MultiArray low = lower_first(m.k_at(p), g);
    s.values[6] = std::max({low.symmetry_residual(0, 1), low.symmetry_residual(1, 2), low.symmetry_residual(0, 2)});
    if (km) {
      s.values[base] = almost_contact_residuals(m, km->contact, p, frame).max();
      s.values[base + 1] = kenmotsu_structure_residual(m, km->contact, p, frame);
      s.values[base + 2] = kenmotsu_condition_residual(*km, p, frame);
      if (km->fiber) {
        const int fd = km->fiber->base.dim;
        const ChartPoint fp(Vec(p.coords().head(fd)));
        const Frame ff = coordinate_frame(fp, km->fiber->base.metric_at(fp));
        s.values[base + 3] = holomorphic_residuals(*km->fiber, fp, ff).max();
      }
    }
    return s;
  });
  ctx.reduce(amb.spec, defs, samples);
}

// ------------------------------------------------------------- curvature

void curvature_suite(Context& ctx, const AmbientSpace& amb) {
  const StatisticalManifold& m = amb.manifold;
  const auto* km = amb.kenmotsu ? &*amb.kenmotsu : nullptr;
  const auto c = amb.c_bar();
  const int n = m.dim;

  std::vector<CheckDef> defs = {
      {"curvature.dual_path", "R^g + [K,K] equals the average of R and R*", "axiom"},
      {"curvature.antisymmetry", "R, R*, R^g antisymmetric in the first two slots", "exact"},
  };
  enum Slot { dual_path, antisym, sectional, model, ricci_model, ricci_xi, ricci_phi, ricci_trace, jac, jac_dual,
              jac_trans, fiber_ricci, slots };
  std::vector<int> at(slots, -1);
  at[dual_path] = 0;
  at[antisym] = 1;
  auto add = [&](Slot s, CheckDef d) {
    at[s] = static_cast<int>(defs.size());
    defs.push_back(std::move(d));
  };
  if (amb.constant_sectional) {
    add(sectional, {"curvature.constant_sectional",
                    "statistical sectional curvature equals " + fmt(*amb.constant_sectional, "%g") + " on every plane",
                    "curvature"});
  }
  if (c && km) {
    add(model, {"curvature.model_match", "S equals the constant phi-sectional curvature model, componentwise",
                "curvature"});
    add(ricci_model, {"curvature.ricci_model", "Ric = t1 g + t2 eta (x) eta", "curvature"});
    add(ricci_xi, {"curvature.ricci_xi", "Ric(E, xi) = -2s eta(E)", "curvature"});
    add(ricci_phi, {"curvature.ricci_phi", "Ric(phi E, phi F) = Ric(E,F) + 2s eta(E) eta(F)", "curvature"});
    add(ricci_trace, {"curvature.ricci_trace_algebra", "frame trace of the model tensor gives t1, t2", "exact"});
  }
  if (km) {
    add(jac, {"curvature.jacobi_parallel", "structure Jacobi operator parallel for nabla", "double_fd"});
    add(jac_dual, {"curvature.jacobi_parallel_dual", "structure Jacobi operator parallel for nabla*", "double_fd"});
    add(jac_trans, {"curvature.jacobi_parallel_transverse",
                    "structure Jacobi operator parallel for nabla, tangential part on directions orthogonal to xi",
                    "double_fd"});
    if (c && km->fiber) {
      add(fiber_ricci, {"curvature.fiber_ricci", "fiber Ricci = e^{2 alpha} (c+1)(s+1)/2 g~", "curvature"});
    }
  }

  const bool structure_hyp = km && km->fiber;
  const char* identity_names[5] = {"curvature.structure_r_e_f_xi", "curvature.structure_r_xi_e_f",
                                   "curvature.structure_r_phie_xi_f", "curvature.structure_sum_identity",
                                   "curvature.structure_xi_sectional"};
  const char* identity_anchors[5] = {
      "R(E,F)xi = eta(F)E - eta(E)F", "R(xi,E)F = g(E,F)xi - eta(F)E", "R(phi E, xi)F = eta(F) phi E - g(phi E, F) xi",
      "R(E, phi F)xi + R(xi, E)phi F = -R(phi F, xi)E", "g(R(E,xi)xi, E) = g(E,E) - eta(E)^2"};

  struct Extra {
    double identity[5][2] = {{0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}};
    bool fiber_k_zero = true;
  };
  const auto pts = sample_points(m, ctx.cfg().points, ctx.seed(amb.spec, "curvature"));
  const std::uint64_t seed = ctx.seed(amb.spec, "curvature/vectors");
  std::vector<Extra> extras(pts.size());
  auto samples = parallel_map<Sample>(static_cast<int>(pts.size()), [&](int i) {
    const ChartPoint& p = pts[static_cast<std::size_t>(i)];
    Sample s{std::vector<double>(defs.size(), kNaN), "x=" + fmt_vec(p.coords())};
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i), 0));
    const CurvatureSample cs = curvature_sample(m, p);
    const Mat& g = cs.g;
    const Frame onb = coordinate_frame(p, g);
    s.values[0] = cs.dual_path_residual();
    s.values[1] = std::max({cs.r.antisymmetry_residual(2, 3), cs.r_star.antisymmetry_residual(2, 3),
                            cs.r_lc.antisymmetry_residual(2, 3)});
    if (at[sectional] >= 0) {
      double worst = 0.0;
      for (int t = 0; t < 3; ++t) {
        const Vec e = rng.normal_vec(n), f = rng.normal_vec(n);
        worst = std::max(worst, std::abs(sectional_curvature(cs, e, f) - *amb.constant_sectional));
      }
      s.values[static_cast<std::size_t>(at[sectional])] = worst;
    }
    if (at[model] >= 0) {
      const Vec x = p.coords();
      const Mat phi = km->contact.phi(x);
      const Vec xi = km->contact.xi(x);
      s.values[static_cast<std::size_t>(at[model])] = lowered_difference(cs.s, model_curvature_tensor(*c, g, phi, xi), g);
      const Vec e = random_unit(rng, g), f = random_unit(rng, g);
      const double ef = ricci_form(cs, onb, e, f);
      s.values[static_cast<std::size_t>(at[ricci_model])] = std::abs(ef - model_ricci(*c, km->s, e, f, g, xi));
      s.values[static_cast<std::size_t>(at[ricci_xi])] =
          std::abs(ricci_form(cs, onb, e, xi) + 2.0 * km->s * inner(g, e, xi));
      s.values[static_cast<std::size_t>(at[ricci_phi])] =
          std::abs(ricci_form(cs, onb, phi * e, phi * f) - ef - 2.0 * km->s * inner(g, e, xi) * inner(g, f, xi));
      s.values[static_cast<std::size_t>(at[ricci_trace])] =
          std::abs(model_ricci_trace(*c, g, phi, xi, e, f) - model_ricci(*c, km->s, e, f, g, xi));
    }
    if (at[jac] >= 0) {
      const JacobiParallelism jp = jacobi_parallelism_residual(m, km->contact.xi, p, onb, Connection::primal);
      const JacobiParallelism jd = jacobi_parallelism_residual(m, km->contact.xi, p, onb, Connection::dual);
      s.values[static_cast<std::size_t>(at[jac])] = jp.residual;
      s.values[static_cast<std::size_t>(at[jac_dual])] = jd.residual;
      s.values[static_cast<std::size_t>(at[jac_trans])] = std::max(jp.transverse, jd.transverse);
    }
    if (at[fiber_ricci] >= 0) {
      const int fd = km->fiber->base.dim;
      const ChartPoint fp(Vec(p.coords().head(fd)));
      const Vec e = rng.normal_vec(fd);
      const FiberRicciCheck fr = fiber_ricci_check(*km->fiber, *c, p.coords()[n - 1], fp, e,
                                                   derive_seed(seed, static_cast<std::uint64_t>(i), 1));
      s.values[static_cast<std::size_t>(at[fiber_ricci])] = fr.residual;
    }
    if (structure_hyp) {
      Extra& ex = extras[static_cast<std::size_t>(i)];
      const int fd = km->fiber->base.dim;
      ex.fiber_k_zero = km->fiber->base.k_at(ChartPoint(Vec(p.coords().head(fd)))).max_abs() == 0.0;
      const StructureCurvatureIdentities si = structure_curvature_identities(*km, cs, onb);
      const SignedResidual* items[5] = {&si.r_e_f_xi, &si.r_xi_e_f, &si.r_phie_xi_f, &si.sum_identity,
                                        &si.xi_sectional};
      for (int t = 0; t < 5; ++t) {
        ex.identity[t][0] = items[t]->as_stated;
        ex.identity[t][1] = items[t]->flipped;
      }
    }
    return s;
  });
  ctx.reduce(amb.spec, defs, samples);

  if (c && km) {
    // t1 = t2 = 0 has no solution: report the smallest max(|t1|, |t2|) over a grid of c.
    double smallest = std::numeric_limits<double>::infinity();
    double where = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double cc = -5.0 + 0.01 * i;
      const RicciCoefficients t = model_ricci_coefficients(cc, km->s);
      const double v = std::max(std::abs(t.t1), std::abs(t.t2));
      if (v < smallest) {
        smallest = v;
        where = cc;
      }
    }
    ctx.record(amb.spec, {"curvature.not_ricci_flat", "(t1, t2) != (0, 0) for every c in [-5, 5]", "exact",
                          CheckKind::nonzero},
               smallest, "closest approach at c = " + fmt(where, "%.2f"));
  }

  if (structure_hyp) {
    bool hyp = true;
    for (const Extra& ex : extras) hyp = hyp && ex.fiber_k_zero;
    for (int t = 0; t < 5; ++t) {
      const CheckDef def{identity_names[t], identity_anchors[t], "curvature"};
      double stated = 0.0, flipped = 0.0;
      for (const Extra& ex : extras) {
        stated = std::max(stated, ex.identity[t][0]);
        flipped = std::max(flipped, ex.identity[t][1]);
      }
      const SignedResidual sr{stated, flipped};
      const std::string detail = std::string("sign convention: ") + sr.matches(ctx.tol("curvature")) +
                                 " (stated " + fmt(stated) + ", flipped " + fmt(flipped) + ")";
      if (!hyp) {
        ctx.skip(amb.spec, def, "hypothesis K~ = 0 on the fiber fails; " + detail, std::min(stated, flipped));
      } else {
        ctx.record(amb.spec, def, std::min(stated, flipped), detail);
      }
    }
  }
}

// ----------------------------------------------------------- submanifold

void submanifold_suite(Context& ctx, const Immersion& imm) {
  const auto c = imm.ambient.c_bar();
  const AlmostContactData* ct = imm.ambient.contact();
  const int k = imm.src_dim;
  std::vector<CheckDef> defs = {
      {"submanifold.gauss_split", "tangential and normal parts reassemble the ambient derivative", "exact"},
      {"submanifold.h_symmetry", "h and h* symmetric", "axiom"},
      {"submanifold.frame_orthonormal", "tangent and normal frames jointly orthonormal", "exact"},
      {"submanifold.gauss_equation", "Gauss equation for nabla", "curvature"},
      {"submanifold.gauss_equation_dual", "Gauss equation for nabla*", "curvature"},
      {"submanifold.weingarten", "nabla-bar_E U + A_U E is normal", "curvature"},
      {"submanifold.weingarten_dual", "nabla-bar*_E U + A*_U E is normal", "curvature"},
      {"submanifold.shape_pairing", "g(A*_U E, F) = g(h(E,F), U) and g(A_U E, F) = g(h*(E,F), U)", "exact"},
      {"submanifold.mean_polarization", "2 H0 = H + H*", "exact"},
  };
  const std::size_t model_slot = defs.size();
  if (c) defs.push_back({"submanifold.gauss_equation_model", "Gauss equation in a constant phi-sectional ambient",
                         "curvature"});
  struct Extra {
    double p_norm = 0.0;
    double xi_tangential = 0.0;
  };
  const auto pts = sample_source_points(imm, ctx.cfg().points, ctx.seed(imm.name, "submanifold"));
  const std::uint64_t seed = ctx.seed(imm.name, "submanifold/vectors");
  std::vector<Extra> extras(pts.size());
  auto samples = parallel_map<Sample>(static_cast<int>(pts.size()), [&](int i) {
    const ChartPoint& p = pts[static_cast<std::size_t>(i)];
    Sample s{std::vector<double>(defs.size(), kNaN), "u=" + fmt_vec(p.coords())};
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i), 0));
    const SubmanifoldGeometry geo = induced_geometry(imm, p, derive_seed(seed, static_cast<std::uint64_t>(i), 1));
    const Mat& gbar = geo.g_bar;
    s.values[0] = geo.split_residual;
    double sym = 0.0;
    for (int A = 0; A < geo.ambient_dim(); ++A)
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
          sym = std::max(sym, std::abs(geo.h_coord(A, a, b) - geo.h_coord(A, b, a)));
          sym = std::max(sym, std::abs(geo.h_star_coord(A, a, b) - geo.h_star_coord(A, b, a)));
        }
    s.values[1] = sym;
    Frame joint = geo.tangent_frame;
    joint.vectors.insert(joint.vectors.end(), geo.normal_frame.vectors.begin(), geo.normal_frame.vectors.end());
    s.values[2] = orthonormality_residual(joint, gbar);

    const CurvatureSample amb = curvature_sample(imm.ambient.manifold, geo.ambient_point);
    const CurvatureSample in = intrinsic_curvature(imm, geo);
    auto tangent = [&] {
      const Vec w = geo.tangent_src * rng.normal_vec(k);
      return Vec(w / std::sqrt(w.dot(geo.induced_g * w)));
    };
    double gr = 0.0, grs = 0.0, grm = 0.0;
    for (int t = 0; t < 3; ++t) {
      const Vec e = tangent(), f = tangent(), gv = tangent(), hv = tangent();
      const GaussResiduals r = gauss_equation_residual(imm, geo, amb, in, e, f, gv, hv);
      gr = std::max(gr, r.res);
      grs = std::max(grs, r.res_star);
      if (r.res_model) grm = std::max(grm, *r.res_model);
    }
    s.values[3] = gr;
    s.values[4] = grs;
    if (c) s.values[model_slot] = grm;

    double w = 0.0, ws = 0.0, pair = 0.0;
    for (const Vec& u : geo.normal_frame.vectors) {
      const ShapeOperators so = shape_operators(imm, geo, u);
      w = std::max(w, so.weingarten);
      ws = std::max(ws, so.weingarten_star);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
          const Vec ea = Vec::Unit(k, a), eb = Vec::Unit(k, b);
          pair = std::max(pair, std::abs(ea.dot(geo.induced_g * so.a_star * eb) - inner(gbar, geo.h(ea, eb), u)));
          pair = std::max(pair, std::abs(ea.dot(geo.induced_g * so.a * eb) - inner(gbar, geo.h_star(ea, eb), u)));
        }
    }
    if (!geo.normal_frame.vectors.empty()) {
      s.values[5] = w;
      s.values[6] = ws;
      s.values[7] = pair;
    }
    s.values[8] = mean_curvatures(geo).polarization_residual;
    if (ct) {
      Extra& ex = extras[static_cast<std::size_t>(i)];
      ex.p_norm = p_norm_sq(geo, *ct);
      const Vec xi = ct->xi(geo.ambient_point.coords());
      ex.xi_tangential = norm(gbar, geo.push(geo.tangential(xi)));
    }
    return s;
  });
  ctx.reduce(imm.name, defs, samples);

  if (!ct) return;
  const std::vector<ChartPoint> few(pts.begin(), pts.begin() + std::min<std::size_t>(pts.size(), 8));
  const InvarianceReport inv = classify_invariance(imm, few);
  const CheckDef inv_def{"submanifold.invariance_class", "phi maps tangents to tangents or to normals", "axiom"};
  const std::string inv_detail = std::string(to_string(inv.kind)) + " (max |C| " + fmt(inv.max_c) + ", max |P| " +
                                 fmt(inv.max_p) + ")";
  if (inv.kind == InvarianceClass::generic) {
    ctx.skip(imm.name, inv_def, inv_detail, std::min(inv.max_c, inv.max_p));
  } else {
    ctx.record(imm.name, inv_def, std::min(inv.max_c, inv.max_p), inv_detail);
  }

  double xi_tan = 0.0, p_dev = 0.0;
  for (const Extra& ex : extras) {
    xi_tan = std::max(xi_tan, ex.xi_tangential);
    p_dev = std::max(p_dev, std::abs(ex.p_norm - k));
  }
  const CheckDef p_def{"submanifold.p_norm_invariant", "|P|^2 = dim N on an invariant submanifold normal to xi",
                       "axiom"};
  if (inv.kind == InvarianceClass::invariant && xi_tan < 1e-8) {
    ctx.record(imm.name, p_def, p_dev);
  } else {
    ctx.skip(imm.name, p_def, "requires an invariant submanifold normal to xi");
  }

  if (c) {
    const ConstantCurvatureReport cc = constant_curvature_check(imm, few);
    const CheckDef def{"submanifold.constant_curvature",
                       "umbilical invariant submanifold through xi has constant curvature g(H,H*) - 1", "double_fd"};
    std::string failing;
    for (const PreconditionStatus& st : cc.preconditions) {
      if (!st.ok) failing += (failing.empty() ? "" : "; ") + st.name + " (" + fmt(st.value) + ")";
    }
    const std::string value_note = "curvature value " + fmt(cc.curvature_value, "%.6f");
    if (cc.preconditions_hold) {
      ctx.record(imm.name, def, cc.residual, value_note);
    } else {
      ctx.skip(imm.name, def, "preconditions fail: " + failing + "; residual without them " + fmt(cc.residual),
               cc.residual);
    }
  }
}

// ------------------------------------------------------------ chen_ricci

void chen_ricci_algebra(Context& ctx) {
  const std::uint64_t seed = ctx.seed("", "chen_ricci/algebra");
  {
    double worst = 0.0;
    for (int kp1 : {2, 3, 5})
      for (double a : {-3.0, 0.0, 1.0, 2.5}) {
        const QuadraticMax q = quadratic_form_max(kp1, a, kp1 <= 3 ? 0.01 : 0.25);
        worst = std::max(worst, std::abs(q.max_value - *q.lattice_max));
        worst = std::max(worst, std::max(0.0, *q.lattice_max - q.max_value));
      }
    ctx.record("", {"chen_ricci.quadratic_max", "max of x1 (x2 + ... + xn) on sum x = a is a^2/4", "exact"}, worst,
               "lattice brute force over a in {-3, 0, 1, 2.5}, n in {2, 3, 5}");
  }
  {
    Rng rng(derive_seed(seed, 1, 0));
    double top = -std::numeric_limits<double>::infinity(), closed = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const int kp1 = 2 + static_cast<int>(rng.next() % 6);
      Vec v = rng.normal_vec(kp1);
      v.array() -= v.mean();
      const HessianCheck h = hessian_form_check(kp1, v);
      top = std::max(top, h.value);
      closed = std::max(closed, std::abs(h.value - h.closed_form));
    }
    ctx.record("", {"chen_ricci.hessian_nonpositive", "Hessian form on the constraint plane is <= 0", "exact"},
               std::max(0.0, top), "largest value " + fmt(top) + " over 1000 directions");
    ctx.record("", {"chen_ricci.hessian_closed_form", "Hessian form equals -2 v1^2 on the constraint plane", "exact"},
               closed);
  }
  {
    Rng rng(derive_seed(seed, 2, 0));
    double poly = 0.0, spec = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const int dim = 2 + static_cast<int>(rng.next() % 5);
      const Vec h = rng.normal_vec(dim), hs = rng.normal_vec(dim);
      const Vec h0 = 0.5 * (h + hs);
      RicciBoundInput in;
      in.c_bar = rng.uniform(-3.0, 3.0);
      in.k = 1 + static_cast<int>(rng.next() % 5);
      in.P_E_norm_sq = rng.uniform();
      in.g_E_xi = rng.uniform(-1.0, 1.0);
      in.ric0_E = rng.uniform(-3.0, 3.0);
      in.H_norm_sq = h.squaredNorm();
      in.H_star_norm_sq = hs.squaredNorm();
      in.H0_norm_sq = h0.squaredNorm();
      in.g_H_Hstar = h.dot(hs);
      const double rhs = ricci_bound_rhs(in);
      poly = std::max(poly, std::abs(rhs - corollary_bounds(in, BoundVariant::mean_curvature_form)) /
                                std::max(1.0, std::abs(rhs)));
      in.g_E_xi = 0.0;
      in.P_E_norm_sq = 1.0;
      spec = std::max(spec, std::abs(ricci_bound_rhs(in) - corollary_bounds(in, BoundVariant::invariant)));
      spec = std::max(spec, std::abs(ricci_bound_rhs(in) - corollary_bounds(in, BoundVariant::orthogonal_xi)));
      in.P_E_norm_sq = 0.0;
      spec = std::max(spec, std::abs(ricci_bound_rhs(in) - corollary_bounds(in, BoundVariant::anti_invariant)));
    }
    ctx.record("", {"chen_ricci.mean_curvature_rewrite", "bound rewritten with |H0|^2 and g(H,H*)", "exact"}, poly,
               "1000 random inputs, relative residual");
    ctx.record("", {"chen_ricci.specializations", "orthogonal, invariant and anti-invariant forms of the bound",
                    "exact"},
               spec, "1000 random inputs");
  }
}

void chen_ricci_suite(Context& ctx, const Immersion& imm) {
  const auto c = imm.ambient.c_bar();
  const CheckDef ineq{"chen_ricci.inequality", "Ric(E) >= bound for every unit tangent E", "inequality",
                      CheckKind::margin};
  if (!c) {
    ctx.skip(imm.name, ineq, "ambient has no declared phi-sectional curvature");
    return;
  }
  const std::vector<CheckDef> defs = {
      ineq,
      {"chen_ricci.equality_margin", "equality conditions force equality in the bound", "double_fd"},
      {"chen_ricci.levi_civita_chain", "Ric0(E) - Kenmotsu term = sum of h0 products", "curvature"},
      {"chen_ricci.bound_rewrite", "bound equals its mean-curvature rewrite at measured inputs", "exact"},
      {"chen_ricci.minimal_form", "bound for H0 = 0", "exact"},
      {"chen_ricci.orthogonal_form", "bound for E orthogonal to xi", "exact"},
      {"chen_ricci.invariant_form", "bound for |PE|^2 = 1, E orthogonal to xi", "exact"},
      {"chen_ricci.anti_invariant_form", "bound for PE = 0, E orthogonal to xi", "exact"},
  };
  struct Extra {
    bool equality = false;
    double literal = kNaN, general = kNaN;
    int k = 0;
    double lhs = 0.0, rhs = 0.0;
  };
  const double eq_tol = ctx.tol("equality");
  const double exact = ctx.tol("exact");
  const auto pts = sample_source_points(imm, ctx.cfg().points, ctx.seed(imm.name, "chen_ricci"));
  const std::uint64_t seed = ctx.seed(imm.name, "chen_ricci/vectors");
  std::vector<Extra> extras(pts.size());
  auto samples = parallel_map<Sample>(static_cast<int>(pts.size()), [&](int i) {
    const ChartPoint& p = pts[static_cast<std::size_t>(i)];
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i), 0));
    const Vec e = rng.normal_vec(imm.src_dim);
    const InequalityVerdict v =
        verify_inequality(imm, p, e, derive_seed(seed, static_cast<std::uint64_t>(i), 1), eq_tol);
    const RicciBoundInput& in = v.input;
    Sample s{std::vector<double>(defs.size(), kNaN),
             "u=" + fmt_vec(p.coords()) + ", E=" + fmt_vec(e) + ", lhs=" + fmt(v.lhs, "%.9f") +
                 ", rhs=" + fmt(v.rhs, "%.9f")};
    s.values[0] = v.margin;
    if (v.equality) s.values[1] = std::abs(v.margin);
    s.values[2] = v.chain_residual;
    auto against = [](const InequalityVerdict& w, BoundVariant b) {
      return std::abs(w.rhs - corollary_bounds(w.input, b));
    };
    s.values[3] = against(v, BoundVariant::mean_curvature_form);
    if (in.H0_norm_sq <= exact) s.values[4] = against(v, BoundVariant::minimal);

    // A second direction orthogonal to xi exercises the specialized forms of the bound.
    const SubmanifoldGeometry geo = induced_geometry(imm, p);
    const Vec xi_t = geo.tangential(imm.ambient.contact()->xi(geo.ambient_point.coords()));
    const Mat& gn = geo.induced_g;
    Vec e_perp = e;
    if (xi_t.dot(gn * xi_t) > 1e-12) e_perp -= (e.dot(gn * xi_t) / xi_t.dot(gn * xi_t)) * xi_t;
    if (e_perp.dot(gn * e_perp) > 1e-12) {
      const InequalityVerdict w =
          verify_inequality(imm, p, e_perp, derive_seed(seed, static_cast<std::uint64_t>(i), 2), eq_tol);
      s.values[0] = std::min(s.values[0], w.margin);
      if (std::abs(w.input.g_E_xi) <= exact) {
        s.values[5] = against(w, BoundVariant::orthogonal_xi);
        if (std::abs(w.input.P_E_norm_sq - 1.0) <= exact) s.values[6] = against(w, BoundVariant::invariant);
        if (std::abs(w.input.P_E_norm_sq) <= exact) s.values[7] = against(w, BoundVariant::anti_invariant);
      }
    }
    Extra& ex = extras[static_cast<std::size_t>(i)];
    ex.equality = v.equality;
    ex.k = in.k;
    if (std::abs(in.c_bar + 1.0) <= exact) {
      ex.literal = against(v, BoundVariant::hyperbolic_literal);
      ex.general = against(v, BoundVariant::hyperbolic_general);
    }
    return s;
  });
  ctx.reduce(imm.name, defs, samples);

  int equal = 0;
  for (const Extra& ex : extras) equal += ex.equality ? 1 : 0;
  if (CheckRecord* r = ctx.find("chen_ricci.inequality", imm.name)) {
    r->detail += "; equality conditions hold at " + std::to_string(equal) + " of " + std::to_string(extras.size()) +
                 " samples";
  }

  if (std::abs(*c + 1.0) <= exact && !extras.empty()) {
    double literal = 0.0, general = 0.0;
    for (const Extra& ex : extras) {
      literal = std::max(literal, ex.literal);
      general = std::max(general, ex.general);
    }
    const int k = extras.front().k;
    const double t = ctx.tol("exact");
    std::string which = general <= t && literal <= t ? "both readings" : general <= t ? "additive constant k"
                                                     : literal <= t ? "additive constant 4" : "neither reading";
    ctx.record(imm.name, {"chen_ricci.hyperbolic_constant", "bound at c = -1 with a flat fiber: additive constant",
                          "exact"},
               std::min(literal, general),
               "k = " + std::to_string(k) + ", matches " + which + " (constant k: " + fmt(general) +
                   ", constant 4: " + fmt(literal) + ")");
  }
}

// ----------------------------------------------------------------- driver

std::vector<std::string> manifold_targets(const SuiteConfig& cfg) {
  if (cfg.manifold) return {make_manifold(*cfg.manifold).spec};
  if (cfg.custom_immersion) return {make_manifold(cfg.custom_immersion->ambient).spec};
  if (cfg.immersion) return {make_immersion(*cfg.immersion).ambient.spec};
  return sweep_manifolds();
}

std::vector<Immersion> immersion_targets(const SuiteConfig& cfg) {
  if (cfg.custom_immersion) return {build_custom_immersion(*cfg.custom_immersion)};
  if (cfg.immersion) return {make_immersion(*cfg.immersion)};
  std::vector<Immersion> out;
  const std::optional<std::string> ambient =
      cfg.manifold ? std::optional<std::string>(make_manifold(*cfg.manifold).spec) : std::nullopt;
  for (const std::string& name : sweep_immersions()) {
    Immersion imm = make_immersion(name);
    if (!ambient || imm.ambient.spec == *ambient) out.push_back(std::move(imm));
  }
  return out;
}

template <class F>
void guarded(Context& ctx, const std::string& object, const std::string& suite, F fn) {
  try {
    fn();
  } catch (const GeometryError& e) {
    if (e.kind() == GeometryError::Kind::config || e.kind() == GeometryError::Kind::catalog_miss) throw;
    ctx.error(object, suite, e.what());
  }
}

json config_json(const SuiteConfig& cfg) {
  json j;
  j["suite"] = cfg.suite;
  j["manifold"] = cfg.manifold ? json(*cfg.manifold) : json(nullptr);
  j["immersion"] = cfg.immersion ? json(*cfg.immersion) : json(nullptr);
  if (cfg.custom_immersion) {
    const CustomImmersionSpec& ci = *cfg.custom_immersion;
    json c;
    c["name"] = ci.name;
    c["ambient"] = ci.ambient;
    c["offset"] = ci.offset;
    c["linear"] = ci.linear;
    c["quadratic"] = ci.quadratic;
    c["box"] = {{"lo", ci.lo}, {"hi", ci.hi}};
    j["custom_immersion"] = c;
  }
  j["points"] = cfg.points;
  j["seed"] = cfg.seed;
  json tol = json::object();
  for (const auto& [k, v] : cfg.tolerances) tol[k] = v;
  j["tolerances"] = tol;
  j["format"] = cfg.format;
  return j;
}

const char* kind_name(CheckKind k) {
  switch (k) {
    case CheckKind::residual: return "residual";
    case CheckKind::margin: return "margin";
    case CheckKind::nonzero: return "nonzero";
  }
  return "residual";
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

std::string field_location(const std::string& text, const std::string& source, const std::string& field) {
  const std::size_t at = text.find("\"" + field + "\"");
  std::string where = source;
  if (at != std::string::npos) where += ":" + std::to_string(line_of(text, at));
  return where + ": field '" + field + "'";
}

}  // namespace

ToleranceTiers default_tolerances() {
  return {{"exact", 1e-9}, {"axiom", 1e-6}, {"curvature", 1e-5}, {"double_fd", 1e-4}, {"equality", 1e-6},
          {"inequality", 1e-5}};
}

ToleranceTiers base_tolerances() {
  ToleranceTiers tiers = default_tolerances();
  const char* path = std::getenv(kToleranceFileEnv);
  if (path == nullptr || *path == '\0') return tiers;
  std::ifstream in(path);
  if (!in) config_error(std::string(kToleranceFileEnv) + ": cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string(path) + ":" + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (!j.is_object()) config_error(std::string(path) + ": expected an object of tier values");
  for (const auto& [k, v] : j.items()) {
    if (!tiers.count(k)) config_error(field_location(text, path, k) + ": unknown tolerance tier");
    if (!v.is_number() || v.get<double>() < 0.0) config_error(field_location(text, path, k) + ": expected a number >= 0");
    tiers[k] = v.get<double>();
  }
  return tiers;
}

void apply_tolerance_override(ToleranceTiers& tiers, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos) config_error("--tol-tier '" + assignment + "': expected tier=value");
  const std::string key = assignment.substr(0, eq);
  const std::string val = assignment.substr(eq + 1);
  if (!tiers.count(key)) config_error("--tol-tier: unknown tier '" + key + "'");
  char* end = nullptr;
  const double d = std::strtod(val.c_str(), &end);
  if (val.empty() || end != val.c_str() + val.size() || !(d >= 0.0)) {
    config_error("--tol-tier " + key + ": '" + val + "' is not a non-negative number");
  }
  tiers[key] = d;
}

Immersion build_custom_immersion(const CustomImmersionSpec& ci) {
  const AmbientSpace amb = make_manifold(ci.ambient);
  const int n = amb.manifold.dim;
  const int k = static_cast<int>(ci.lo.size());
  if (k < 1 || static_cast<int>(ci.hi.size()) != k) config_error(ci.name + ": box.lo and box.hi must have equal length");
  if (static_cast<int>(ci.linear.size()) != n) config_error(ci.name + ": linear needs one row per ambient coordinate");
  Mat lin(n, k);
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(ci.linear[static_cast<std::size_t>(r)].size()) != k) {
      config_error(ci.name + ": linear row " + std::to_string(r) + " must have " + std::to_string(k) + " entries");
    }
    for (int a = 0; a < k; ++a) lin(r, a) = ci.linear[static_cast<std::size_t>(r)][static_cast<std::size_t>(a)];
  }
  Vec off = Vec::Zero(n);
  if (!ci.offset.empty()) {
    if (static_cast<int>(ci.offset.size()) != n) config_error(ci.name + ": offset must have one entry per ambient coordinate");
    for (int r = 0; r < n; ++r) off[r] = ci.offset[static_cast<std::size_t>(r)];
  }
  std::vector<Mat> quad;
  for (const auto& q : ci.quadratic) {
    Mat m(k, k);
    if (static_cast<int>(q.size()) != k) config_error(ci.name + ": quadratic matrices must be square in src_dim");
    for (int a = 0; a < k; ++a) {
      if (static_cast<int>(q[static_cast<std::size_t>(a)].size()) != k) {
        config_error(ci.name + ": quadratic matrices must be square in src_dim");
      }
      for (int b = 0; b < k; ++b) m(a, b) = q[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
    quad.push_back(m);
  }
  SamplingBox box{Vec(k), Vec(k)};
  for (int a = 0; a < k; ++a) {
    box.lo[a] = ci.lo[static_cast<std::size_t>(a)];
    box.hi[a] = ci.hi[static_cast<std::size_t>(a)];
    if (!(box.lo[a] < box.hi[a])) config_error(ci.name + ": box.lo must be below box.hi");
  }
  return affine_quadratic_immersion(ci.name, amb, off, lin, quad, box);
}

void merge_config_json(SuiteConfig& cfg, const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(source + ":" + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (!j.is_object()) config_error(source + ": top level must be an object");
  auto where = [&](const std::string& f) { return field_location(text, source, f); };
  auto optional_string = [&](const json& v, const std::string& f) -> std::optional<std::string> {
    if (v.is_null()) return std::nullopt;
    if (!v.is_string()) config_error(where(f) + ": expected a string or null");
    return v.get<std::string>();
  };
  auto numbers = [&](const json& v, const std::string& f) {
    if (!v.is_array()) config_error(where(f) + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) config_error(where(f) + ": expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  };
  auto matrix = [&](const json& v, const std::string& f) {
    if (!v.is_array()) config_error(where(f) + ": expected an array of rows");
    std::vector<std::vector<double>> out;
    for (const auto& row : v) out.push_back(numbers(row, f));
    return out;
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "suite") {
      if (!v.is_string()) config_error(where(key) + ": expected a string");
      cfg.suite = v.get<std::string>();
    } else if (key == "manifold") {
      cfg.manifold = optional_string(v, key);
    } else if (key == "immersion") {
      cfg.immersion = optional_string(v, key);
    } else if (key == "points") {
      if (!v.is_number_integer()) config_error(where(key) + ": expected an integer");
      cfg.points = v.get<int>();
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) config_error(where(key) + ": expected a non-negative integer");
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "tolerances") {
      if (!v.is_object()) config_error(where(key) + ": expected an object of tier values");
      for (const auto& [tier, tv] : v.items()) {
        if (!cfg.tolerances.count(tier)) config_error(where(tier) + ": unknown tolerance tier");
        if (!tv.is_number() || tv.get<double>() < 0.0) config_error(where(tier) + ": expected a number >= 0");
        cfg.tolerances[tier] = tv.get<double>();
      }
    } else if (key == "format") {
      if (!v.is_string()) config_error(where(key) + ": expected a string");
      cfg.format = v.get<std::string>();
    } else if (key == "out") {
      if (!v.is_string()) config_error(where(key) + ": expected a string");
      cfg.out = v.get<std::string>();
    } else if (key == "custom_immersion") {
      if (v.is_null()) {
        cfg.custom_immersion.reset();
        continue;
      }
      if (!v.is_object()) config_error(where(key) + ": expected an object");
      CustomImmersionSpec ci;
      for (const auto& [ck, cv] : v.items()) {
        if (ck == "name") {
          if (!cv.is_string()) config_error(where(ck) + ": expected a string");
          ci.name = cv.get<std::string>();
        } else if (ck == "ambient") {
          if (!cv.is_string()) config_error(where(ck) + ": expected a catalog manifold");
          ci.ambient = cv.get<std::string>();
        } else if (ck == "offset") {
          ci.offset = numbers(cv, ck);
        } else if (ck == "linear") {
          ci.linear = matrix(cv, ck);
        } else if (ck == "quadratic") {
          if (!cv.is_array()) config_error(where(ck) + ": expected an array of matrices");
          for (const auto& q : cv) ci.quadratic.push_back(matrix(q, ck));
        } else if (ck == "box") {
          if (!cv.is_object() || !cv.contains("lo") || !cv.contains("hi")) {
            config_error(where(ck) + ": expected {\"lo\": [...], \"hi\": [...]}");
          }
          ci.lo = numbers(cv["lo"], ck);
          ci.hi = numbers(cv["hi"], ck);
        } else {
          config_error(where(ck) + ": unknown custom_immersion field");
        }
      }
      if (ci.name.empty()) ci.name = "custom";
      if (ci.ambient.empty()) config_error(where(key) + ": 'ambient' is required");
      if (ci.linear.empty()) config_error(where(key) + ": 'linear' is required");
      cfg.custom_immersion = ci;
    } else {
      config_error(where(key) + ": unknown field");
    }
  }
}

void validate_config(const SuiteConfig& cfg) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), cfg.suite) == names.end()) {
    config_error("unknown suite '" + cfg.suite + "' (expected axioms, curvature, submanifold, chen_ricci or all)");
  }
  if (cfg.points < 1) config_error("points must be at least 1, got " + std::to_string(cfg.points));
  if (cfg.format != "text" && cfg.format != "json") config_error("format must be text or json, got '" + cfg.format + "'");
  if (cfg.immersion && cfg.custom_immersion) config_error("give either immersion or custom_immersion, not both");
  for (const auto& [k, v] : default_tolerances()) {
    (void)v;
    if (!cfg.tolerances.count(k)) config_error("tolerance tier '" + k + "' missing");
  }
  if (cfg.manifold) make_manifold(*cfg.manifold);
  if (cfg.immersion) make_immersion(*cfg.immersion);
  if (cfg.custom_immersion) build_custom_immersion(*cfg.custom_immersion);
}

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skip: return "skip";
  }
  return "fail";
}

SuiteSummary SuiteReport::summary() const {
  SuiteSummary s;
  for (const CheckRecord& r : checks) {
    switch (r.status) {
      case CheckStatus::pass: ++s.passed; break;
      case CheckStatus::fail: ++s.failed; break;
      case CheckStatus::skip: ++s.skipped; break;
    }
  }
  return s;
}

SuiteReport run_suite(const SuiteConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  validate_config(cfg);
  SuiteReport report;
  report.config = cfg;
  Context ctx(cfg, report.checks);
  const bool all = cfg.suite == "all";
  if (all || cfg.suite == "axioms" || cfg.suite == "curvature") {
    for (const std::string& spec : manifold_targets(cfg)) {
      const AmbientSpace amb = make_manifold(spec);
      if (all || cfg.suite == "axioms") guarded(ctx, spec, "axioms", [&] { axioms_suite(ctx, amb); });
      if (all || cfg.suite == "curvature") guarded(ctx, spec, "curvature", [&] { curvature_suite(ctx, amb); });
    }
  }
  if (all || cfg.suite == "submanifold" || cfg.suite == "chen_ricci") {
    const auto targets = immersion_targets(cfg);
    for (const Immersion& imm : targets) {
      if (all || cfg.suite == "submanifold") {
        guarded(ctx, imm.name, "submanifold", [&] { submanifold_suite(ctx, imm); });
      }
      if (all || cfg.suite == "chen_ricci") guarded(ctx, imm.name, "chen_ricci", [&] { chen_ricci_suite(ctx, imm); });
    }
    if (all || cfg.suite == "chen_ricci") guarded(ctx, "", "chen_ricci", [&] { chen_ricci_algebra(ctx); });
  }
  report.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string emit_report(const SuiteReport& report, const std::string& format) {
  const SuiteSummary sum = report.summary();
  if (format == "json") {
    json j;
    j["config"] = config_json(report.config);
    json checks = json::array();
    for (const CheckRecord& r : report.checks) {
      json c;
      c["name"] = r.name;
      c["object"] = r.object;
      c["anchor"] = r.anchor;
      c["value"] = std::isfinite(r.value) ? json(r.value) : json(nullptr);
      c["tol"] = r.tol;
      c["tier"] = r.tier;
      c["kind"] = kind_name(r.kind);
      c["pass"] = r.status == CheckStatus::pass;
      c["status"] = to_string(r.status);
      c["detail"] = r.detail;
      checks.push_back(std::move(c));
    }
    j["checks"] = std::move(checks);
    j["summary"] = {{"passed", sum.passed}, {"failed", sum.failed}, {"skipped", sum.skipped}};
    j["runtime_ms"] = std::round(report.runtime_ms);
    return j.dump(2) + "\n";
  }
  if (format != "text") config_error("unknown report format '" + format + "'");
  std::ostringstream os;
  for (const CheckRecord& r : report.checks) {
    const char* tag = r.status == CheckStatus::pass ? "PASS" : r.status == CheckStatus::fail ? "FAIL" : "SKIP";
    os << tag << "  " << r.name;
    if (!r.object.empty()) os << " [" << r.object << "]";
    os << "  value=" << fmt(r.value) << " tol=" << fmt(r.tol, "%.0e") << " (" << r.tier << ", " << kind_name(r.kind)
       << ")  " << r.anchor;
    if (!r.detail.empty()) os << "  | " << r.detail;
    os << "\n";
  }
  os << "summary: " << sum.passed << " passed, " << sum.failed << " failed, " << sum.skipped << " skipped ("
     << fmt(report.runtime_ms, "%.0f") << " ms)\n";
  return os.str();
}

void write_report(const SuiteReport& report) {
  const std::string bytes = emit_report(report, report.config.format);
  if (report.config.out.empty()) {
    std::cout << bytes << std::flush;
    return;
  }
  std::ofstream out(report.config.out, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + report.config.out + "' for writing");
  out << bytes;
  out.flush();
  if (!out) throw std::runtime_error("write to '" + report.config.out + "' failed");
}

}  // namespace kenstat
