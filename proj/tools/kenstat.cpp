#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "kenstat/suite.hpp"

using namespace kenstat;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GeometryError(GeometryError::Kind::config, "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kenstat: numerical checks for Kenmotsu statistical manifolds and their submanifolds"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a verification suite and print a report");
  std::string config_path, suite, manifold, immersion, format, out;
  int points = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> tiers;
  run->add_option("--config", config_path, "JSON config; flags override its fields");
  run->add_option("--suite", suite, "axioms, curvature, submanifold, chen_ricci or all");
  run->add_option("--manifold", manifold, "catalog manifold, e.g. 'hyperbolic_kenmotsu(1,0)'");
  run->add_option("--immersion", immersion, "catalog immersion, e.g. 'fiber_slice(1,0,0)'");
  run->add_option("--points", points, "sample points per object");
  run->add_option("--seed", seed, "base seed");
  run->add_option("--tol-tier", tiers, "override a tolerance tier, tier=value (repeatable)");
  run->add_option("--format", format, "text or json");
  run->add_option("--out", out, "write the report here instead of stdout");

  app.add_subcommand("list", "list catalog manifolds and immersions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (app.got_subcommand("list")) {
    std::cout << list_catalog();
    return 0;
  }

  SuiteConfig cfg;
  try {
    cfg.tolerances = base_tolerances();
    if (!config_path.empty()) merge_config_json(cfg, read_file(config_path), config_path);
    if (run->count("--suite")) cfg.suite = suite;
    if (run->count("--manifold")) cfg.manifold = manifold;
    if (run->count("--immersion")) {
      cfg.immersion = immersion;
      cfg.custom_immersion.reset();
    }
    if (run->count("--points")) cfg.points = points;
    if (run->count("--seed")) cfg.seed = seed;
    if (run->count("--format")) cfg.format = format;
    if (run->count("--out")) cfg.out = out;
    for (const std::string& t : tiers) apply_tolerance_override(cfg.tolerances, t);
    validate_config(cfg);
  } catch (const GeometryError& e) {
    std::cerr << "kenstat: " << e.what() << "\n";
    return 2;
  }

  try {
    const SuiteReport report = run_suite(cfg);
    write_report(report);
    return report.summary().failed == 0 ? 0 : 1;
  } catch (const GeometryError& e) {
    std::cerr << "kenstat: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "kenstat: " << e.what() << "\n";
    return 3;
  }
}
