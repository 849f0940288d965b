#pragma once

#include "kenstat/submanifold.hpp"

namespace kenstat {

struct RicciBoundInput {
  double c_bar = -1.0;
  int k = 1;  // dim N - 1
  double P_E_norm_sq = 0.0;
  double g_E_xi = 0.0;
  double ric0_E = 0.0;
  double H_norm_sq = 0.0;
  double H_star_norm_sq = 0.0;
  double H0_norm_sq = 0.0;
  double g_H_Hstar = 0.0;
};

/// The curly-braced ambient term 3(c+1)/4 |PE|^2 + k/4 [(c+1)(1 - g(E,xi)^2) - 4].
double kenmotsu_bracket(const RicciBoundInput& inp);

/// 2 Ric0(E) - bracket - (k+1)^2/8 (|H|^2 + |H*|^2).
double ricci_bound_rhs(const RicciBoundInput& inp);

enum class BoundVariant {
  mean_curvature_form,  // |H0|^2 and g(H,H*) instead of |H|^2 + |H*|^2
  minimal,              // mean_curvature_form with H0 = 0
  orthogonal_xi,        // g(E, xi) = 0
  invariant,            // g(E, xi) = 0 and |PE|^2 = 1
  anti_invariant,       // g(E, xi) = 0 and |PE|^2 = 0
  hyperbolic_literal,   // c = -1 with the additive constant fixed at 4
  hyperbolic_general,   // c = -1 with the additive constant k
};
const char* to_string(BoundVariant v);

/// Throws precondition when the variant's hypotheses are not met by `inp`.
double corollary_bounds(const RicciBoundInput& inp, BoundVariant variant, double tol = 1e-9);

struct EqualityResiduals {
  double h_diagonal = 0.0;       // |2h(E,E) - (k+1)H|
  double h_star_diagonal = 0.0;  // |2h*(E,E) - (k+1)H*|
  double h_mixed = 0.0;          // max_{F perp E} |h(E,F)|
  double h_star_mixed = 0.0;     // max_{F perp E} |h*(E,F)|
  double max() const;
  bool holds(double tol) const { return max() <= tol; }
};

/// Uses the geometry's tangent frame; its first vector must be E.
EqualityResiduals equality_case_check(const SubmanifoldGeometry& geom);

/// Same predicate from raw second fundamental form data in an orthonormal
/// frame: h[i][j] and hs[i][j] are normal vectors in orthonormal normal
/// coordinates, E = e_1.
EqualityResiduals equality_case_check(const std::vector<std::vector<Vec>>& h,
                                      const std::vector<std::vector<Vec>>& hs);

struct InequalityVerdict {
  double lhs = 0.0;  // statistical Ricci of N in direction E
  double rhs = 0.0;
  double margin = 0.0;
  bool equality = false;
  EqualityResiduals equality_conditions;
  RicciBoundInput input;
  double ric_levi_civita = 0.0;
  /// Ric0(E) - bracket - sum_{r, i>=2} (h0_11 h0_ii - |h0_1i|^2)
  double chain_residual = 0.0;
};

/// Measures every input of the bound at p for unit E (source components;
/// normalized internally). Requires a declared c on the ambient.
InequalityVerdict verify_inequality(const Immersion& imm, const ChartPoint& p, const Vec& e, std::uint64_t seed = 0,
                                    double equality_tol = 1e-6);

struct QuadraticMax {
  double max_value = 0.0;
  Vec argmax;
  std::optional<double> lattice_max;
};

/// max of x_1 (x_2 + ... + x_n) subject to x_1 + ... + x_n = a, n = k_plus_1.
/// With `lattice_step` > 0 also brute-forces the maximum over a lattice on
/// the constraint plane.
QuadraticMax quadratic_form_max(int k_plus_1, double a, double lattice_step = 0.0);

/// theta(x) = x_1 (x_2 + ... + x_n).
double theta_form(const Vec& x);

struct HessianCheck {
  double value = 0.0;         // Hess(v, v)
  double closed_form = 0.0;   // -2 v_1^2
  bool projected = false;     // input was off the constraint plane
};

/// Hessian of theta on the tangent plane of sum x_i = a along v; v is
/// projected onto sum v_i = 0 (and flagged) when needed.
HessianCheck hessian_form_check(int k_plus_1, const Vec& v, double tol = 1e-12);

}  // namespace kenstat
