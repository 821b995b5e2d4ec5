#pragma once

#include <functional>
#include <optional>
#include <string>

#include "bernaudit/bernstein.hpp"
#include "bernaudit/functions.hpp"
#include "bernaudit/numerics.hpp"

namespace bernaudit {

/// θ(p) = √(p(1-p)); throws DomainError outside [0, 1].
double theta(double p);

/// Relative-plus-absolute slack used by every pass flag: Δ <= B + tol·(1 + B).
inline constexpr double kPassTolerance = 1e-12;

/// One sweep cell.
struct BoundRecord {
  std::string label;
  double x = 0.0;
  std::optional<double> y;
  Degree n1 = Degree(1);
  std::optional<Degree> n2;
  double delta = 0.0;
  double j = 0.0;
  double bound = 0.0;
  /// Δ/J; empty when J = 0 (endpoints), which keeps the cell out of suprema.
  std::optional<double> ratio;
  bool pass = true;
  /// False when the quadrature hit its interval budget; j and bound then
  /// hold the best available estimate.
  bool converged = true;
};

/// Fills ratio and pass from delta, j and bound.
void finalize_record(BoundRecord& r);

/// J_n[ω](x) = ∫₀^∞ ω(z·θ(x)/√n) z e^{-z²/2} dz, truncated at cfg.truncation_z.
/// Exactly 0 when θ(x) = 0.
double j_functional(const ModulusSpec& m, int n, double x, const QuadratureConfig& cfg);

/// ∫₀^∞ ω(z·scale) z e^{-z²/2} dz; the scale-parametrised core of j_functional.
double j_scaled(const ModulusSpec& m, double scale, const QuadratureConfig& cfg);

/// Unclamped closed form of J for ω(δ) = H δ^α: 2^{α/2} Γ(1+α/2) H θ^α n^{-α/2}.
double j_hoelder_closed_form(double alpha, double h, int n, double x);

/// Side-by-side Hölder constants at one (n, x).
struct HoelderComparison {
  double alpha = 0.0;
  double h = 0.0;
  int n = 1;
  double x = 0.0;
  double quadrature_j = 0.0;
  double closed_form_j = 0.0;
  /// 2 × closed_form_j, the bound implied by Δ <= 2J.
  double derived_bound = 0.0;
  /// 2 H [2x(1-x)/n]^{α/2} Γ(α/2), the classical Gamma-function Hölder form.
  double classic_hoelder = 0.0;
  /// 2 L [2πx(1-x)/n]^{1/2}, the classical Lipschitz form (α = 1 only).
  std::optional<double> classic_lipschitz;
};

HoelderComparison hoelder_comparison(double alpha, double h, int n, double x, const QuadratureConfig& cfg);

/// What to do when a function carries no modulus.
struct EmpiricalPolicy {
  bool enabled = true;
  double grid_step = 1e-3;
};

/// f's exact modulus, or an empirical one when allowed; ConfigError otherwise.
ModulusSpec resolve_modulus(const ScalarFunction& f, const EmpiricalPolicy& policy = {});

/// Δ_n[f](x) against 2·J_n[f](x).
BoundRecord upper_bound(const ScalarFunction& f, int n, double x, const QuadratureConfig& cfg,
                        const EmpiricalPolicy& policy = {});

/// 2 ∫₀^∞ ω(y/(2√n)) y e^{-y²} dy, the x-free variant.
double uniform_bound(const ModulusSpec& m, int n, const QuadratureConfig& cfg);

/// 2·J_n with θ = 1/2 substituted, for comparison with uniform_bound.
double uniform_companion(const ModulusSpec& m, int n, const QuadratureConfig& cfg);

/// |B'_n[f](x) - f'(x)| against (3/2)ω[f'](1/n) + 2 J_{n-1}[f'](x); n >= 2.
BoundRecord derivative_bound(const ScalarFunction& f, int n, double x, const QuadratureConfig& cfg,
                             const EmpiricalPolicy& policy = {});

/// J_{n1,n2}[ω](x, y): double integral with weight z1 z2 e^{-(z1²+z2²)/2}.
/// A coordinate with INF degree or θ = 0 is pinned at δ = 0 and its weight
/// integrates to 1.
double j2_functional(const Modulus2& m, Degree n1, Degree n2, double x, double y, const QuadratureConfig& cfg);

/// Δ_{n1,n2}[f](x, y) against 4·J_{n1,n2}[f](x, y).
BoundRecord bivariate_bound(const BivariateFunction& f, Degree n1, Degree n2, double x, double y,
                            const QuadratureConfig& cfg);

enum class PlaneNorm { euclidean, max, sum };

/// Parses "euclidean" | "max" | "sum"; ConfigError otherwise.
PlaneNorm parse_plane_norm(const std::string& name);

/// 4 ∫∫ γ(‖(z1 θ(x)/√n1, z2 θ(y)/√n2)‖) z1 z2 e^{-(z1²+z2²)/2} dz1 dz2, each
/// displacement component clamped to 1.
double general_norm_bound(const std::function<double(double)>& gamma, PlaneNorm norm, Degree n1, Degree n2, double x,
                          double y, const QuadratureConfig& cfg);

}  // namespace bernaudit
