#pragma once

#include "kenstat/submanifold.hpp"

namespace kenstat {

/// "name(a, b, ...)" split into name and numeric arguments.
struct CatalogSpec {
  std::string name;
  std::vector<double> args;
};

/// Throws config on malformed text.
CatalogSpec parse_catalog_spec(const std::string& text);
std::string format_catalog_spec(const std::string& name, const std::vector<double>& args);

struct CatalogEntry {
  std::string name;
  std::string params;   // "s=1, beta=0"
  std::string dims;     // "2s+1"
  std::string anchor;   // what the entry exhibits
  bool immersion = false;
};

const std::vector<CatalogEntry>& catalog();

/// Throws catalog_miss for unknown names and config for bad arguments.
AmbientSpace make_manifold(const std::string& spec);
Immersion make_immersion(const std::string& spec);

/// iota(u) = offset + linear u + 1/2 sum_A e_A u^T quadratic[A] u over the
/// source box; `quadratic` may be empty.
Immersion affine_quadratic_immersion(const std::string& name, const AmbientSpace& ambient, const Vec& offset,
                                     const Mat& linear, const std::vector<Mat>& quadratic, const SamplingBox& box);

/// Entries swept by the `all` suite when no object is named.
std::vector<std::string> sweep_manifolds();
std::vector<std::string> sweep_immersions();

/// One line per entry in a stable order.
std::string list_catalog();

}  // namespace kenstat
