#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bernaudit/errors.hpp"

namespace bernaudit {

/// Settings for the adaptive rule used on the half-line integrals.
///
/// The Gaussian-type weights z·exp(-z²/2) are negligible beyond z = 8, so the
/// half-line is truncated at `truncation_z` (default 10, tail < 2e-21).
struct QuadratureConfig {
  double truncation_z = 10.0;
  double rel_tol = 1e-10;
  std::size_t max_subdivisions = std::size_t{1} << 20;

  /// Throws ConfigError unless truncation_z >= 8 and rel_tol in (0, 1e-4].
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 15-point Gauss-Kronrod integration of g over [a, b].
///
/// `breakpoints` (any order, points outside (a, b) are ignored) seed the
/// initial partition; pass the locations of known kinks or jumps so the rule
/// never has to hunt for them. Stops once the summed error estimate is at most
/// rel_tol·|I|. Throws ConvergenceError carrying the best estimate when the
/// interval budget is exhausted.
QuadratureResult integrate(const Integrand& g, double a, double b, const QuadratureConfig& cfg,
                           std::span<const double> breakpoints = {});

/// ∫₀^{truncation_z} g(z) dz. The caller supplies the full integrand,
/// weight included.
double gauss_halfline(const Integrand& g, const QuadratureConfig& cfg,
                      std::span<const double> breakpoints = {});

/// ln Γ(x) for x > 0.
double log_gamma(double x);

/// ln C(n, k), accurate to a few ulp relative for n up to 10^6.
double log_binomial(std::int64_t n, std::int64_t k);

/// ln[C(n,k) p^k (1-p)^(n-k)] by the saddle-point expansion (Loader), which
/// keeps full relative accuracy of the mass even where it underflows in the
/// naive product. p may be 0 or 1 (returns 0 / -inf as appropriate).
double log_binomial_pmf(std::int64_t n, std::int64_t k, double p);

/// Stirling series remainder ln n! - [(n+½)ln n - n + ½ln 2π].
double stirling_error(std::int64_t n);

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// log(Σ exp(v_i)); returns -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> values);

}  // namespace bernaudit
