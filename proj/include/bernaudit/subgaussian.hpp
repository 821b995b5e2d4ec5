#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bernaudit/numerics.hpp"

namespace bernaudit {

/// Bin(n, p), n >= 1, p in (0, 1). All expectations are exact sums over the
/// n + 1 support points.
class BinomialModel {
 public:
  BinomialModel(int n, double p);

  int n() const noexcept { return n_; }
  double p() const noexcept { return p_; }
  double mean() const noexcept { return n_ * p_; }
  double variance() const noexcept { return n_ * p_ * (1.0 - p_); }
  double sd() const noexcept { return std::sqrt(variance()); }

  const std::vector<double>& log_pmf() const noexcept { return log_pmf_; }
  const std::vector<double>& pmf() const noexcept { return pmf_; }
  /// E(μ - np)^k.
  double central_moment(int k) const;
  /// η_m = (m - np)/σ for m = 0..n.
  std::vector<double> normalized_support() const;

 private:
  int n_;
  double p_;
  std::vector<double> log_pmf_;
  std::vector<double> pmf_;
};

/// One audited cell: named parameters, both sides of the inequality and the
/// margin lhs - rhs (positive means violated).
struct AuditCell {
  std::vector<std::pair<std::string, double>> parameters;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
};

struct GridAxis {
  std::string name;
  std::vector<double> values;
};

/// Outcome of auditing one inequality over a parameter grid. A cell counts as
/// violating when margin > tolerance·(1 + |rhs|).
struct ViolationReport {
  std::string inequality_id;
  std::vector<GridAxis> grid;
  std::size_t cells_total = 0;
  std::size_t cells_violating = 0;
  AuditCell worst;
  std::vector<AuditCell> all_margins;
  std::vector<std::pair<std::string, std::string>> metadata;
  double tolerance = 1e-12;

  void add(AuditCell cell);
  /// Folds another report of the same inequality into this one.
  void absorb(const ViolationReport& other);
  bool clean() const noexcept { return cells_violating == 0; }
};

/// T(u) = max(P(η > u), P(η < -u)) for η = (μ - np)/σ.
double tail_function(const BinomialModel& b, double u);

/// ln E cosh(λη) <= λ²/2, compared in the log domain so large λ cannot overflow.
ViolationReport cosh_mgf_check(const BinomialModel& b, std::span<const double> lambdas);

/// E η^{2m} <= (2m-1)!! for m = 1..m_max (m_max <= 20), η normalised by the
/// pmf-computed variance.
ViolationReport moment_check(const BinomialModel& b, int m_max);

/// T(u) <= 2 exp(-u²/2).
ViolationReport tail_bound_check(const BinomialModel& b, std::span<const double> u_grid);

/// ln[(1-p)e^{-λp} + p e^{λ(1-p)}] <= p(1-p)λ²/2 for p in [1/2, 1), λ >= 0.
ViolationReport bk_check(double p, std::span<const double> lambdas);

/// Grid supremum of √(2 max(0, ln mgf(λ)))/|λ|; a lower estimate of the
/// subgaussian norm. λ = 0 or a non-finite mgf value throws DomainError.
double sub_norm_estimate(const std::function<double(double)>& mgf, std::span<const double> lambda_grid);

// Sweeps over (n, p) grids, one merged report per inequality.
ViolationReport cosh_mgf_audit(std::span<const int> ns, std::span<const double> ps, std::span<const double> lambdas);
ViolationReport moment_audit(std::span<const int> ns, std::span<const double> ps, int m_max);
ViolationReport tail_bound_audit(std::span<const int> ns, std::span<const double> ps, std::span<const double> us);
ViolationReport bk_audit(std::span<const double> ps, std::span<const double> lambdas);

std::vector<int> default_n_grid();          // 1, 2, 4, ..., 256
std::vector<double> default_p_grid();       // 0.01 ... 0.5 and mirror images
std::vector<double> default_lambda_grid();  // 201 points on [-10, 10]
std::vector<double> linspace(double lo, double hi, int count);

/// Density ((α+1)/(2α))(1 - |x|^α) on [-1, 1], α > 0.
struct PolyDensity {
  double alpha;

  explicit PolyDensity(double a);
  double operator()(double x) const;
  double variance_closed_form() const;
  double fourth_moment_closed_form() const;
  double excess_kurtosis_closed_form() const;
};

struct PolyDensityStats {
  double normalization = 0.0;
  double variance = 0.0;
  double variance_closed_form = 0.0;
  double fourth_moment = 0.0;
  double excess_kurtosis = 0.0;
  double max_abs_odd_moment = 0.0;
  /// E e^{λζ} <= e^{λ²σ²/2} over the λ grid, MGF by quadrature.
  ViolationReport ssub_margin_report;
};

PolyDensityStats poly_density_stats(const PolyDensity& d, std::span<const double> lambdas);
PolyDensityStats poly_density_stats(const PolyDensity& d);

/// Bisection root of the excess kurtosis of PolyDensity on (lo, hi).
double excess_kurtosis_root(double lo = 1e-6, double hi = 1.0, double tol = 1e-13);

}  // namespace bernaudit
