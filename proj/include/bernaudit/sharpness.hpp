#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bernaudit/bounds.hpp"

namespace bernaudit {

struct TraceRow {
  int n = 1;
  double delta = 0.0;
  double j = 0.0;
  std::optional<double> ratio;
  std::optional<double> asymptote;
  std::optional<double> residual_times_n;
};

/// Per-n error/functional ratios at a fixed point, in increasing n.
struct RatioTrace {
  std::string label;
  double x = 0.0;
  std::vector<TraceRow> rows;
  std::optional<double> extrapolated_limit;
  /// Named scalar findings (observed direction counts, coincidence gaps, ...).
  std::vector<std::pair<std::string, double>> metrics;

  std::vector<int> n_values() const;
  std::vector<double> ratios() const;
  std::vector<double> asymptote_residuals() const;
  std::optional<double> metric(const std::string& name) const;
};

/// 2^lo, 2^(lo+1), ..., 2^hi.
std::vector<int> geometric_n(int lo_exp, int hi_exp);

/// Limit at n → ∞ of r(n) = L + a/√n + b/n through the last three samples
/// (two when only two exist). Empty when fewer than one sample.
std::optional<double> richardson_limit(std::span<const int> n_values, std::span<const double> values);

/// Leading term √(2x(1-x)/(πn)) of Δ_n[g_x](x); x in (0, 1).
double bojanic_asymptote(double x, int n);

/// Δ_n[g_x](x) against the asymptote; residual_times_n = n·(Δ - asymptote).
RatioTrace bojanic_residual_trace(double x, std::span<const int> n_values, const QuadratureConfig& cfg);

/// Δ_n[f](x)/J_n[f](x) per n with a Richardson estimate of the limit.
RatioTrace ratio_trace(const ScalarFunction& f, double x, std::span<const int> n_values, const QuadratureConfig& cfg);

/// Factorable trial g_{t1}(x)·1 at degrees (n1, INF). Records the largest
/// per-n gap to the univariate trace of g_{t1} as metric "max_gap_to_univariate".
RatioTrace bivariate_ratio_check(double t1, double x, double y, std::span<const int> n_values,
                                 const QuadratureConfig& cfg);

/// Δ¹_n[G_t](x) against J_n[g_t](x). The observed direction is recorded as
/// metrics "n_delta_ge_j" and "n_delta_lt_j"; nothing is asserted.
RatioTrace derivative_trial_check(double t, double x, std::span<const int> n_values, const QuadratureConfig& cfg);

}  // namespace bernaudit
