#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bernaudit/errors.hpp"

namespace bernaudit {

// ---------------------------------------------------------------------------
// Modulus of continuity models
// ---------------------------------------------------------------------------

/// ω(δ) = H·δ^α, α ∈ (0, 1].
struct Hoelder {
  double alpha;
  double h;
};

/// ω(δ) = L·δ.
struct Lipschitz {
  double l;
};

/// Piecewise-linear curve through (0, 0) and the given (δ, ω) knots, constant
/// after the last knot.
struct Tabulated {
  std::vector<std::pair<double, double>> knots;
};

class ScalarFunction;

/// Grid estimate sup{|f(x_i) - f(x_j)| : |x_i - x_j| <= δ}. It never exceeds
/// the true modulus, so bounds built on it can under-cover by up to about
/// ω(grid_step).
class Empirical {
 public:
  Empirical(const ScalarFunction& source, double grid_step);
  /// Builds directly from samples f(i·step), i = 0..N-1, with (N-1)·step = 1.
  explicit Empirical(const std::vector<double>& samples);

  double grid_step() const noexcept { return step_; }
  double operator()(double delta) const;
  /// Lag table: entry k is the estimate at δ = k·grid_step (prefix-maximised).
  const std::vector<double>& lags() const noexcept { return *lags_; }

 private:
  void build(const std::vector<double>& samples);

  double step_ = 0.0;
  std::shared_ptr<const std::vector<double>> lags_;
};

/// First-order modulus of continuity ω[f](δ) on the unit interval. Evaluation
/// clamps δ to [0, 1], the diameter of the domain.
class ModulusSpec {
 public:
  using Variant = std::variant<Hoelder, Lipschitz, Tabulated, Empirical>;

  ModulusSpec(Hoelder m);
  ModulusSpec(Lipschitz m);
  ModulusSpec(Tabulated m);
  ModulusSpec(Empirical m);

  double operator()(double delta) const;

  /// δ values in (0, 1] where ω is not smooth; quadrature uses them as cuts.
  std::vector<double> kinks() const;

  const Variant& variant() const noexcept { return variant_; }
  std::string describe() const;

 private:
  Variant variant_;
};

/// Same as m(delta); throws DomainError for negative or NaN delta.
double modulus_eval(const ModulusSpec& m, double delta);

// ---------------------------------------------------------------------------
// Functions on [0,1] and [0,1]²
// ---------------------------------------------------------------------------

using UnivariateMap = std::function<double(double)>;

class ScalarFunction {
 public:
  /// Throws ConfigError when `exact_modulus` fails the 1001-point check.
  ScalarFunction(std::string label, UnivariateMap eval, std::optional<ModulusSpec> exact_modulus = std::nullopt);

  /// Attaches f' and (optionally) a modulus of f'. The derivative modulus is
  /// checked against f' on the same grid.
  ScalarFunction& with_derivative(UnivariateMap derivative, std::optional<ModulusSpec> derivative_modulus = std::nullopt);

  double operator()(double x) const { return eval_(x); }

  const std::string& label() const noexcept { return label_; }
  const UnivariateMap& eval() const noexcept { return eval_; }
  const std::optional<ModulusSpec>& exact_modulus() const noexcept { return modulus_; }
  bool has_derivative() const noexcept { return static_cast<bool>(derivative_); }
  const UnivariateMap& derivative() const noexcept { return derivative_; }
  const std::optional<ModulusSpec>& derivative_modulus() const noexcept { return derivative_modulus_; }

  /// f' as a ScalarFunction carrying the derivative modulus. Throws
  /// ConfigError when no derivative is attached.
  ScalarFunction derivative_function() const;

  /// Copy with a different modulus, skipping verification (used to attach
  /// empirical estimates).
  ScalarFunction with_modulus_unchecked(ModulusSpec m) const;

 private:
  ScalarFunction() = default;

  std::string label_;
  UnivariateMap eval_;
  std::optional<ModulusSpec> modulus_;
  UnivariateMap derivative_;
  std::optional<ModulusSpec> derivative_modulus_;
};

/// Largest excess max(|f(x)-f(y)| - ω(|x-y|)) over all pairs of an
/// `points`-point uniform grid on [0,1].
double modulus_excess(const UnivariateMap& f, const ModulusSpec& m, int points = 1001);

/// Bivariate modulus ω(δ1, δ2), clamped to [0,1]² on evaluation. Kink lists
/// are optional quadrature hints per coordinate.
struct Modulus2 {
  std::function<double(double, double)> eval;
  std::vector<double> kinks1;
  std::vector<double> kinks2;

  double operator()(double d1, double d2) const;
};

struct BivariateFunction {
  std::string label;
  std::function<double(double, double)> eval;
  std::optional<Modulus2> exact_modulus2;

  double operator()(double x, double y) const { return eval(x, y); }
};

/// Lag-table estimate of ω(δ1, δ2) from an N×N grid with the given step.
Modulus2 empirical_modulus2(const BivariateFunction& f, double grid_step);

// ---------------------------------------------------------------------------
// Trial functions and corpora
// ---------------------------------------------------------------------------

/// g_t(x) = |t - x| with ω(δ) = min(δ, max(t, 1-t)).
ScalarFunction trial_g(double t);

/// G_t(x) = ∫₀^x |t - y| dy, with derivative g_t attached.
ScalarFunction trial_G(double t);

/// identity, square, g_t (t = 0.25, 0.5, 0.75), x^0.25, x^0.5, sin(πx), √x.
std::vector<ScalarFunction> corpus_standard();

/// Functions with derivative and derivative modulus: x², sin(πx), G_0.5.
std::vector<ScalarFunction> corpus_derivative();

/// Products g(x)·h(y) with known moduli.
std::vector<BivariateFunction> corpus_factorable();

/// Looks up a corpus_standard entry by label; throws ConfigError if absent.
ScalarFunction corpus_lookup(const std::string& label);

// ---------------------------------------------------------------------------
// CSV input
// ---------------------------------------------------------------------------

/// Two-column numeric CSV; an optional non-numeric header line is skipped.
/// The first column must be strictly increasing.
std::vector<std::pair<double, double>> read_two_column_csv(const std::filesystem::path& path);

/// Tabulated modulus from (δ, ω) rows.
ModulusSpec load_tabulated_modulus(const std::filesystem::path& path);

/// Piecewise-linear function from (x, f(x)) rows covering [0, 1].
ScalarFunction load_sampled_function(const std::filesystem::path& path);

}  // namespace bernaudit
