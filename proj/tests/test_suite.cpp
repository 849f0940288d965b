#include "doctest.h"

#include "json.hpp"
#include "kenstat/suite.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>

using namespace kenstat;
using nlohmann::json;

namespace {

SuiteConfig config(const std::string& suite, const std::string& manifold, int points) {
  SuiteConfig c;
  c.suite = suite;
  if (!manifold.empty()) c.manifold = manifold;
  c.points = points;
  return c;
}

std::string strip_runtime(std::string s) {
  return std::regex_replace(s, std::regex("\"runtime_ms\":\\s*[0-9.eE+-]+"), "\"runtime_ms\":0");
}

template <class F>
std::string config_error(F&& f) {
  try {
    f();
  } catch (const GeometryError& e) {
    CHECK(e.kind() == GeometryError::Kind::config);
    return e.what();
  }
  FAIL("expected a config error");
  return {};
}

}  // namespace

TEST_CASE("catalog listing") {
  const std::string text = list_catalog();
  CHECK(text.find("example_3_4(") != std::string::npos);
  CHECK(text.find("hyperbolic_kenmotsu(") != std::string::npos);
  CHECK(text.find("c = -1 model") != std::string::npos);
  CHECK(text == list_catalog());
}

TEST_CASE("catalog spec parsing") {
  CatalogSpec s = parse_catalog_spec("hyperbolic_kenmotsu(2, 0.5)");
  CHECK(s.name == "hyperbolic_kenmotsu");
  REQUIRE(s.args.size() == 2);
  CHECK(s.args[1] == 0.5);
  CHECK(parse_catalog_spec("euclidean").args.empty());
  CHECK(format_catalog_spec("hyperbolic_kenmotsu", {1, 0}) == "hyperbolic_kenmotsu(1,0)");
  config_error([] { parse_catalog_spec("euclidean(3"); });
  config_error([] { parse_catalog_spec("euclidean(x)"); });
  try {
    make_manifold("nowhere(1)");
    FAIL("expected catalog miss");
  } catch (const GeometryError& e) {
    CHECK(e.kind() == GeometryError::Kind::catalog_miss);
  }
  AmbientSpace h = make_manifold("hyperbolic_kenmotsu(1)");
  CHECK(h.manifold.dim == 3);
  CHECK(h.c_bar() == -1.0);
  CHECK(make_manifold("example_3_4(1,1)").manifold.dim == 3);
}

TEST_CASE("empty report") {
  SuiteReport r;
  const json j = json::parse(emit_report(r, "json"));
  CHECK(j["summary"]["passed"] == 0);
  CHECK(j["summary"]["failed"] == 0);
  CHECK(j["summary"]["skipped"] == 0);
  CHECK(j["checks"].empty());
  config_error([&] { emit_report(r, "yaml"); });
}

TEST_CASE("axioms on the half-plane example") {
  SuiteReport r = run_suite(config("axioms", "example_3_4(1,1)", 100));
  const SuiteSummary s = r.summary();
  CHECK(s.failed == 0);
  CHECK(s.passed > 0);
  const json j = json::parse(emit_report(r, "json"));
  REQUIRE_FALSE(j["checks"].empty());
  for (const auto& c : j["checks"]) {
    CHECK(c.contains("name"));
    CHECK(c.contains("anchor"));
    CHECK(c.contains("tier"));
    CHECK(c["pass"] == (c["status"] != "fail"));
  }
  CHECK(j["config"]["seed"] == 7);
}

TEST_CASE("flat curvature") {
  SuiteReport r = run_suite(config("curvature", "euclidean(3)", 10));
  CHECK(r.summary().failed == 0);
  for (const auto& c : r.checks)
    if (c.kind == CheckKind::residual && c.status == CheckStatus::pass) CHECK(c.value < 1e-9);
}

TEST_CASE("fiber slice equality records") {
  SuiteConfig c = config("chen_ricci", "", 10);
  c.immersion = "fiber_slice(1,0,0)";
  SuiteReport r = run_suite(c);
  bool found = false;
  for (const auto& rec : r.checks)
    if (rec.name == "chen_ricci.inequality") {
      found = true;
      CHECK(std::abs(rec.value) < 1e-5);
      CHECK(rec.status == CheckStatus::pass);
    }
  CHECK(found);
}

TEST_CASE("reports are deterministic") {
  SuiteConfig c = config("all", "", 5);
  const std::string a = strip_runtime(emit_report(run_suite(c), "json"));
  const std::string b = strip_runtime(emit_report(run_suite(c), "json"));
  CHECK(a == b);
  c.seed = 8;
  CHECK(strip_runtime(emit_report(run_suite(c), "json")) != a);
}

TEST_CASE("config files") {
  SuiteConfig c;
  merge_config_json(c, R"j({"suite": "curvature", "manifold": "euclidean(3)", "points": 4, "seed": 11,
                           "tolerances": {"axiom": 1e-7}})j",
                    "cfg.json");
  CHECK(c.suite == "curvature");
  CHECK(c.points == 4);
  CHECK(c.seed == 11);
  CHECK(c.tolerances.at("axiom") == 1e-7);
  validate_config(c);

  const std::string e1 = config_error([] {
    SuiteConfig d;
    merge_config_json(d, "{\n  \"points\": \"many\"\n}", "bad.json");
  });
  CHECK(e1.find("bad.json:2") != std::string::npos);
  CHECK(e1.find("points") != std::string::npos);

  const std::string e2 = config_error([] {
    SuiteConfig d;
    merge_config_json(d, "{\n  \"suite\": \"axioms\",\n  oops\n}", "broken.json");
  });
  CHECK(e2.find("broken.json:3") != std::string::npos);

  config_error([] {
    SuiteConfig d;
    merge_config_json(d, R"({"tolerances": {"nonsense": 1}})", "t.json");
  });
  config_error([] { validate_config(config("everything", "", 5)); });
  config_error([] { validate_config(config("axioms", "", 0)); });

  ToleranceTiers t = default_tolerances();
  apply_tolerance_override(t, "curvature=3e-5");
  CHECK(t.at("curvature") == 3e-5);
  config_error([&] { apply_tolerance_override(t, "curvature"); });
  config_error([&] { apply_tolerance_override(t, "curvature=abc"); });
}

TEST_CASE("custom immersion from a config") {
  SuiteConfig c;
  merge_config_json(c, R"j({"suite": "submanifold", "points": 3,
    "custom_immersion": {"name": "my_slice", "ambient": "hyperbolic_kenmotsu(1)",
      "offset": [0, 0, 0.1], "linear": [[1, 0], [0, 1], [0, 0]],
      "box": {"lo": [-0.5, -0.5], "hi": [0.5, 0.5]}}})j",
                    "custom.json");
  validate_config(c);
  SuiteReport r = run_suite(c);
  CHECK_FALSE(r.checks.empty());
  CHECK(r.summary().failed == 0);
  CHECK(r.checks.front().object.find("my_slice") != std::string::npos);
}

TEST_CASE("tolerance file named by the environment") {
  const std::string path = "kenstat_tiers_test.json";
  {
    std::ofstream f(path);
    f << R"({"axiom": 2e-8})";
  }
  ::setenv(kToleranceFileEnv, path.c_str(), 1);
  const ToleranceTiers t = base_tolerances();
  CHECK(t.at("axiom") == 2e-8);
  CHECK(t.at("curvature") == default_tolerances().at("curvature"));
  ::setenv(kToleranceFileEnv, "/nonexistent/tiers.json", 1);
  CHECK_THROWS(base_tolerances());
  ::unsetenv(kToleranceFileEnv);
  std::remove(path.c_str());
}
