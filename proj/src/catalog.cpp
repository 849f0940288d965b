#include "kenstat/catalog.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace kenstat {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw GeometryError(GeometryError::Kind::config, msg); }

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Fills defaults for missing trailing arguments.
std::vector<double> with_defaults(const CatalogSpec& spec, const std::vector<double>& defaults) {
  if (spec.args.size() > defaults.size()) {
    config_error(spec.name + " takes at most " + std::to_string(defaults.size()) + " argument(s), got " +
                 std::to_string(spec.args.size()));
  }
  std::vector<double> out = defaults;
  std::copy(spec.args.begin(), spec.args.end(), out.begin());
  return out;
}

int integer_arg(const std::string& name, const char* what, double v, int lo, int hi) {
  if (v != std::floor(v) || v < lo || v > hi) {
    config_error(name + ": " + what + " must be an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                 "], got " + format_catalog_spec("", {v}).substr(1));
  }
  return static_cast<int>(v);
}

ScalarFieldFn constant(double b) {
  return [b](const Vec&) { return b; };
}

}  // namespace

CatalogSpec parse_catalog_spec(const std::string& text) {
  const std::string t = trim(text);
  CatalogSpec out;
  const std::size_t open = t.find('(');
  if (open == std::string::npos) {
    out.name = t;
  } else {
    if (t.back() != ')') config_error("catalog spec '" + t + "': missing closing parenthesis");
    out.name = trim(t.substr(0, open));
    const std::string inside = t.substr(open + 1, t.size() - open - 2);
    if (!trim(inside).empty()) {
      std::stringstream ss(inside);
      std::string item;
      int position = 0;
      while (std::getline(ss, item, ',')) {
        ++position;
        const std::string v = trim(item);
        char* end = nullptr;
        const double d = std::strtod(v.c_str(), &end);
        if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(d)) {
          config_error("catalog spec '" + t + "': argument " + std::to_string(position) + " ('" + v +
                       "') is not a number");
        }
        out.args.push_back(d);
      }
    }
  }
  if (out.name.empty()) config_error("catalog spec '" + t + "': empty name");
  for (char c : out.name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
      config_error("catalog spec '" + t + "': invalid character in name");
    }
  }
  return out;
}

std::string format_catalog_spec(const std::string& name, const std::vector<double>& args) {
  std::string out = name + "(";
  char buf[32];
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", args[i]);
    // shortest representation that round-trips
    for (int prec = 1; prec <= 17; ++prec) {
      char tmp[32];
      std::snprintf(tmp, sizeof tmp, "%.*g", prec, args[i]);
      if (std::strtod(tmp, nullptr) == args[i]) {
        std::snprintf(buf, sizeof buf, "%s", tmp);
        break;
      }
    }
    if (i) out += ",";
    out += buf;
  }
  return out + ")";
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"euclidean", "n=3", "n", "flat reference space, K = 0", false},
      {"round_sphere_test", "n=2", "n", "unit sphere in stereographic chart, sectional curvature +1", false},
      {"hyperbolic_kenmotsu", "s=1, beta=0", "2s+1",
       "c = -1 model: warped lift of flat C^s, K = beta eta(x)eta(x)xi", false},
      {"example_3_4", "lambda=1, beta=1", "3",
       "lifted half-plane example: fiber g = x(dx^2+dy^2), warped metric e^{2a} g + da^2", false},
      {"example_3_4_literal", "lambda=1, beta=1", "3",
       "half-plane example with the unwarped fiber metric: e^{2a}(dx^2+dy^2) + da^2", false},
      {"fiber_slice", "s=1, alpha0=0, beta=0", "2s in 2s+1",
       "level set of alpha in hyperbolic_kenmotsu(s): invariant, umbilical, h = -g xi", true},
      {"xalpha_plane", "beta=0", "2 in 3", "plane y = 0 in hyperbolic_kenmotsu(1): anti-invariant, totally geodesic",
       true},
      {"tilted_plane", "theta=0.7, beta=0", "2 in 5", "affine plane in hyperbolic_kenmotsu(2), generic w.r.t. phi",
       true},
      {"perturbed_graph", "amp=0.3, beta=0", "2 in 3",
       "graph alpha = amp x^2 in hyperbolic_kenmotsu(1): strict Ricci inequality", true},
      {"invariant_slice", "beta=0", "3 in 5",
       "x2 = y2 = 0 in hyperbolic_kenmotsu(2): invariant, xi tangent, totally geodesic", true},
      {"euclidean_plane", "", "2 in 3", "coordinate plane in euclidean(3)", true},
  };
  return entries;
}

AmbientSpace make_manifold(const std::string& text) {
  const CatalogSpec spec = parse_catalog_spec(text);
  AmbientSpace out;
  if (spec.name == "euclidean") {
    const auto a = with_defaults(spec, {3});
    const int n = integer_arg(spec.name, "n", a[0], 1, 9);
    out.spec = format_catalog_spec(spec.name, a);
    out.manifold = euclidean_space(n);
    out.constant_sectional = 0.0;
  } else if (spec.name == "round_sphere_test") {
    const auto a = with_defaults(spec, {2});
    const int n = integer_arg(spec.name, "n", a[0], 2, 9);
    out.spec = format_catalog_spec(spec.name, a);
    out.manifold = round_sphere(n);
    out.constant_sectional = 1.0;
  } else if (spec.name == "hyperbolic_kenmotsu") {
    const auto a = with_defaults(spec, {1, 0});
    const int s = integer_arg(spec.name, "s", a[0], 1, 4);
    out.spec = format_catalog_spec(spec.name, a);
    out.kenmotsu = lift_statistical_structure(flat_fiber(s), constant(a[1]), -1.0, -0.5, 0.5, out.spec);
    out.manifold = out.kenmotsu->base;
    out.constant_sectional = -1.0;
  } else if (spec.name == "example_3_4" || spec.name == "example_3_4_literal") {
    const auto a = with_defaults(spec, {1, 1});
    out.spec = format_catalog_spec(spec.name, a);
    out.kenmotsu = lift_statistical_structure(two_dim_fiber(a[0], spec.name == "example_3_4"), constant(a[1]),
                                              std::nullopt, -1.0, 1.0, out.spec);
    out.manifold = out.kenmotsu->base;
  } else {
    throw GeometryError(GeometryError::Kind::catalog_miss, "unknown manifold '" + spec.name + "'");
  }
  out.manifold.name = out.spec;
  return out;
}

Immersion affine_quadratic_immersion(const std::string& name, const AmbientSpace& ambient, const Vec& offset,
                                     const Mat& linear, const std::vector<Mat>& quadratic, const SamplingBox& box) {
  const int n = ambient.manifold.dim;
  const int k = static_cast<int>(linear.cols());
  if (offset.size() != n || linear.rows() != n) config_error(name + ": offset/linear do not match ambient dimension");
  if (!quadratic.empty() && static_cast<int>(quadratic.size()) != n) {
    config_error(name + ": quadratic needs one matrix per ambient coordinate");
  }
  for (const Mat& q : quadratic) {
    if (q.rows() != k || q.cols() != k) config_error(name + ": quadratic matrices must be src_dim x src_dim");
  }
  if (box.lo.size() != k || box.hi.size() != k) config_error(name + ": source box does not match src_dim");
  Immersion imm;
  imm.name = name;
  imm.src_dim = k;
  imm.ambient = ambient;
  imm.src_box = box;
  imm.map = [offset, linear, quadratic](const Vec& u) {
    Vec x = offset + linear * u;
    for (std::size_t a = 0; a < quadratic.size(); ++a) x[static_cast<Eigen::Index>(a)] += 0.5 * u.dot(quadratic[a] * u);
    return x;
  };
  return imm;
}

Immersion make_immersion(const std::string& text) {
  const CatalogSpec spec = parse_catalog_spec(text);
  auto box = [](std::initializer_list<std::pair<double, double>> r) {
    SamplingBox b{Vec(static_cast<Eigen::Index>(r.size())), Vec(static_cast<Eigen::Index>(r.size()))};
    Eigen::Index i = 0;
    for (const auto& [lo, hi] : r) {
      b.lo[i] = lo;
      b.hi[i++] = hi;
    }
    return b;
  };
  auto hyperbolic = [](int s, double beta) {
    return make_manifold(format_catalog_spec("hyperbolic_kenmotsu", {static_cast<double>(s), beta}));
  };
  Immersion imm;
  if (spec.name == "fiber_slice") {
    const auto a = with_defaults(spec, {1, 0, 0});
    const int s = integer_arg(spec.name, "s", a[0], 1, 4);
    if (std::abs(a[1]) > 0.5) config_error("fiber_slice: alpha0 must lie in [-0.5, 0.5]");
    const int n = 2 * s + 1;
    Mat lin = Mat::Zero(n, 2 * s);
    lin.topRows(2 * s).setIdentity();
    Vec off = Vec::Zero(n);
    off[n - 1] = a[1];
    imm = affine_quadratic_immersion("", hyperbolic(s, a[2]), off, lin, {},
                                     {Vec::Constant(2 * s, -1.0), Vec::Constant(2 * s, 1.0)});
    imm.name = format_catalog_spec(spec.name, a);
  } else if (spec.name == "xalpha_plane") {
    const auto a = with_defaults(spec, {0});
    Mat lin = Mat::Zero(3, 2);
    lin(0, 0) = 1.0;
    lin(2, 1) = 1.0;
    imm = affine_quadratic_immersion("", hyperbolic(1, a[0]), Vec::Zero(3), lin, {}, box({{-1, 1}, {-0.45, 0.45}}));
    imm.name = format_catalog_spec(spec.name, a);
  } else if (spec.name == "tilted_plane") {
    const auto a = with_defaults(spec, {0.7, 0});
    const double th = a[0];
    Mat lin = Mat::Zero(5, 2);
    lin.col(0) << 1.0, 1.0, 0.0, 0.0, 0.0;
    lin.col(1) << -std::sin(th), std::sin(th), 0.5, 0.0, std::cos(th);
    imm = affine_quadratic_immersion("", hyperbolic(2, a[1]), Vec::Zero(5), lin, {}, box({{-0.4, 0.4}, {-0.4, 0.4}}));
    imm.name = format_catalog_spec(spec.name, a);
  } else if (spec.name == "perturbed_graph") {
    const auto a = with_defaults(spec, {0.3, 0});
    if (std::abs(a[0]) > 0.45) config_error("perturbed_graph: |amp| must be at most 0.45");
    Mat lin = Mat::Zero(3, 2);
    lin(0, 0) = 1.0;
    lin(1, 1) = 1.0;
    std::vector<Mat> quad(3, Mat::Zero(2, 2));
    quad[2](0, 0) = 2.0 * a[0];
    imm = affine_quadratic_immersion("", hyperbolic(1, a[1]), Vec::Zero(3), lin, quad, box({{-1, 1}, {-1, 1}}));
    imm.name = format_catalog_spec(spec.name, a);
  } else if (spec.name == "invariant_slice") {
    const auto a = with_defaults(spec, {0});
    Mat lin = Mat::Zero(5, 3);
    lin(0, 0) = 1.0;
    lin(1, 1) = 1.0;
    lin(4, 2) = 1.0;
    imm = affine_quadratic_immersion("", hyperbolic(2, a[0]), Vec::Zero(5), lin, {},
                                     box({{-1, 1}, {-1, 1}, {-0.45, 0.45}}));
    imm.name = format_catalog_spec(spec.name, a);
  } else if (spec.name == "euclidean_plane") {
    with_defaults(spec, {});
    Mat lin = Mat::Zero(3, 2);
    lin(0, 0) = 1.0;
    lin(1, 1) = 1.0;
    imm = affine_quadratic_immersion("", make_manifold("euclidean(3)"), Vec::Zero(3), lin, {},
                                     box({{-1, 1}, {-1, 1}}));
    imm.name = "euclidean_plane()";
  } else {
    throw GeometryError(GeometryError::Kind::catalog_miss, "unknown immersion '" + spec.name + "'");
  }
  return imm;
}

std::vector<std::string> sweep_manifolds() {
  return {"euclidean(3)",       "round_sphere_test(2)",    "hyperbolic_kenmotsu(1,0)", "hyperbolic_kenmotsu(2,0)",
          "hyperbolic_kenmotsu(1,1)", "example_3_4(1,1)", "example_3_4_literal(1,1)"};
}

std::vector<std::string> sweep_immersions() {
  return {"fiber_slice(1,0,0)",    "fiber_slice(2,0.2,0)",  "xalpha_plane(0)",    "xalpha_plane(1)",
          "tilted_plane(0.7,0)", "perturbed_graph(0.3,0)", "perturbed_graph(0.3,1)", "invariant_slice(0)",
          "euclidean_plane()"};
}

std::string list_catalog() {
  std::ostringstream os;
  for (const CatalogEntry& e : catalog()) {
    os << (e.immersion ? "immersion " : "manifold  ") << e.name << "(" << e.params << ")  dim " << e.dims << "  - "
       << e.anchor << "\n";
  }
  return os.str();
}

}  // namespace kenstat
