#pragma once

#include <map>

#include "kenstat/catalog.hpp"

namespace kenstat {

/// Named tolerance tiers; every check record names the tier it uses.
using ToleranceTiers = std::map<std::string, double>;

ToleranceTiers default_tolerances();

/// Environment variable naming a JSON file {"tier": value, ...} that replaces
/// the built-in defaults.
inline constexpr const char* kToleranceFileEnv = "KENSTAT_TOLERANCE_FILE";

/// Defaults, then the file named by the environment variable if set.
ToleranceTiers base_tolerances();

/// Parses "tier=value"; throws config on unknown tiers or bad numbers.
void apply_tolerance_override(ToleranceTiers& tiers, const std::string& assignment);

/// Affine plus quadratic immersion described in a config file:
/// iota(u) = offset + linear u + 1/2 sum_A e_A u^T quadratic[A] u.
struct CustomImmersionSpec {
  std::string name = "custom";
  std::string ambient;  // catalog manifold
  std::vector<double> offset;
  std::vector<std::vector<double>> linear;  // ambient_dim rows of src_dim entries
  std::vector<std::vector<std::vector<double>>> quadratic;
  std::vector<double> lo, hi;  // source box
};

Immersion build_custom_immersion(const CustomImmersionSpec& spec);

struct SuiteConfig {
  std::string suite = "all";
  std::optional<std::string> manifold;
  std::optional<std::string> immersion;
  std::optional<CustomImmersionSpec> custom_immersion;
  int points = 20;
  std::uint64_t seed = 7;
  ToleranceTiers tolerances = default_tolerances();
  std::string format = "text";
  std::string out;  // empty: stdout
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"axioms", "curvature", "submanifold", "chen_ricci", "all"};
  return names;
}

/// Merges a JSON config document into `cfg`. Errors carry the source name,
/// the line of the offending field where it can be located, and the field.
void merge_config_json(SuiteConfig& cfg, const std::string& text, const std::string& source);

/// Throws config if the configuration cannot run.
void validate_config(const SuiteConfig& cfg);

enum class CheckKind {
  residual,  // pass iff value <= tol
  margin,    // pass iff value >= -tol
  nonzero,   // pass iff value > tol
};

enum class CheckStatus { pass, fail, skip };
const char* to_string(CheckStatus s);

struct CheckRecord {
  std::string name;
  std::string object;  // catalog spec the check ran on; empty for object-free checks
  std::string anchor;
  double value = 0.0;
  double tol = 0.0;
  std::string tier;
  CheckKind kind = CheckKind::residual;
  CheckStatus status = CheckStatus::pass;
  std::string detail;
};

struct SuiteSummary {
  int passed = 0;
  int failed = 0;
  int skipped = 0;
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<CheckRecord> checks;
  double runtime_ms = 0.0;

  SuiteSummary summary() const;
};

SuiteReport run_suite(const SuiteConfig& cfg);

/// "text" or "json"; throws config otherwise.
std::string emit_report(const SuiteReport& report, const std::string& format);

/// Writes to cfg.out or stdout. Throws std::runtime_error with the path on I/O failure.
void write_report(const SuiteReport& report);

}  // namespace kenstat
