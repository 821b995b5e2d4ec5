#include "bernaudit/sharpness.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace bernaudit {

std::vector<int> RatioTrace::n_values() const {
  std::vector<int> out;
  for (const auto& r : rows) out.push_back(r.n);
  return out;
}

std::vector<double> RatioTrace::ratios() const {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.ratio.value_or(std::nan("")));
  return out;
}

std::vector<double> RatioTrace::asymptote_residuals() const {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.residual_times_n.value_or(std::nan("")));
  return out;
}

std::optional<double> RatioTrace::metric(const std::string& name) const {
  for (const auto& [k, v] : metrics) {
    if (k == name) return v;
  }
  return std::nullopt;
}

std::vector<int> geometric_n(int lo_exp, int hi_exp) {
  if (lo_exp < 0 || hi_exp > 30 || lo_exp > hi_exp) throw DomainError("geometric_n: need 0 <= lo <= hi <= 30");
  std::vector<int> out;
  for (int e = lo_exp; e <= hi_exp; ++e) out.push_back(1 << e);
  return out;
}

std::optional<double> richardson_limit(std::span<const int> n_values, std::span<const double> values) {
  if (n_values.size() != values.size()) throw DomainError("richardson_limit: size mismatch");
  const std::size_t count = std::min<std::size_t>(3, values.size());
  if (count == 0) return std::nullopt;
  // Neville's scheme in h = n^{-1/2}, evaluated at h = 0.
  std::vector<double> h(count);
  std::vector<double> p(count);
  const std::size_t base = values.size() - count;
  for (std::size_t i = 0; i < count; ++i) {
    h[i] = 1.0 / std::sqrt(static_cast<double>(n_values[base + i]));
    p[i] = values[base + i];
  }
  for (std::size_t level = 1; level < count; ++level) {
    for (std::size_t i = 0; i + level < count; ++i) {
      p[i] = (h[i] * p[i + 1] - h[i + level] * p[i]) / (h[i] - h[i + level]);
    }
  }
  return p[0];
}

namespace {

void check_open_unit(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError(fmt::format("{}: point must lie in (0,1), got {}", what, x));
}

void check_n_values(std::span<const int> n_values, int min_n, const char* what) {
  if (n_values.empty()) throw DomainError(fmt::format("{}: n_values is empty", what));
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < min_n || (i > 0 && n_values[i] <= n_values[i - 1])) {
      throw DomainError(fmt::format("{}: n_values must be strictly increasing integers >= {}", what, min_n));
    }
  }
}

void finish(RatioTrace& trace) {
  std::vector<int> ns;
  std::vector<double> rs;
  for (const auto& row : trace.rows) {
    if (row.ratio) {
      ns.push_back(row.n);
      rs.push_back(*row.ratio);
    }
  }
  trace.extrapolated_limit = richardson_limit(ns, rs);
}

std::optional<double> safe_ratio(double delta, double j) {
  return j > 0.0 ? std::optional<double>(delta / j) : std::nullopt;
}

}  // namespace

double bojanic_asymptote(double x, int n) {
  check_open_unit(x, "bojanic_asymptote");
  if (n < 1) throw DomainError(fmt::format("bojanic_asymptote: n must be >= 1, got {}", n));
  return std::sqrt(2.0 * x * (1.0 - x) / (std::numbers::pi * n));
}

RatioTrace bojanic_residual_trace(double x, std::span<const int> n_values, const QuadratureConfig& cfg) {
  check_open_unit(x, "bojanic_residual_trace");
  check_n_values(n_values, 1, "bojanic_residual_trace");
  const ScalarFunction g = trial_g(x);
  const ModulusSpec& m = *g.exact_modulus();
  RatioTrace trace;
  trace.label = fmt::format("bojanic:{}", g.label());
  trace.x = x;
  double worst = 0.0;
  for (int n : n_values) {
    TraceRow row;
    row.n = n;
    row.delta = error_exact(g, Degree(n), x);
    row.j = j_functional(m, n, x, cfg);
    row.ratio = safe_ratio(row.delta, row.j);
    row.asymptote = bojanic_asymptote(x, n);
    row.residual_times_n = n * (row.delta - *row.asymptote);
    worst = std::max(worst, std::abs(*row.residual_times_n));
    trace.rows.push_back(row);
  }
  trace.metrics.emplace_back("max_abs_residual_times_n", worst);
  finish(trace);
  return trace;
}

RatioTrace ratio_trace(const ScalarFunction& f, double x, std::span<const int> n_values, const QuadratureConfig& cfg) {
  check_open_unit(x, "ratio_trace");
  check_n_values(n_values, 1, "ratio_trace");
  if (!f.exact_modulus()) throw ConfigError(fmt::format("ratio_trace: '{}' carries no exact modulus", f.label()));
  RatioTrace trace;
  trace.label = f.label();
  trace.x = x;
  for (int n : n_values) {
    TraceRow row;
    row.n = n;
    row.delta = error_exact(f, Degree(n), x);
    row.j = j_functional(*f.exact_modulus(), n, x, cfg);
    row.ratio = safe_ratio(row.delta, row.j);
    trace.rows.push_back(row);
  }
  finish(trace);
  return trace;
}

RatioTrace bivariate_ratio_check(double t1, double x, double y, std::span<const int> n_values,
                                 const QuadratureConfig& cfg) {
  check_open_unit(t1, "bivariate_ratio_check");
  check_open_unit(x, "bivariate_ratio_check");
  if (!(y >= 0.0 && y <= 1.0)) throw DomainError("bivariate_ratio_check: y must lie in [0,1]");
  check_n_values(n_values, 1, "bivariate_ratio_check");

  const ScalarFunction g = trial_g(t1);
  const ModulusSpec omega = *g.exact_modulus();
  BivariateFunction f0{fmt::format("{}(x)*1", g.label()), [t1](double u, double) { return std::abs(t1 - u); },
                       Modulus2{[omega](double d1, double) { return omega(d1); }, omega.kinks(), {}}};
  const RatioTrace univariate = ratio_trace(g, x, n_values, cfg);

  RatioTrace trace;
  trace.label = f0.label;
  trace.x = x;
  double gap = 0.0;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    const int n = n_values[i];
    TraceRow row;
    row.n = n;
    row.delta = error2_exact(f0, Degree(n), Degree::inf(), x, y);
    row.j = j2_functional(*f0.exact_modulus2, Degree(n), Degree::inf(), x, y, cfg);
    row.ratio = safe_ratio(row.delta, row.j);
    if (row.ratio && univariate.rows[i].ratio) gap = std::max(gap, std::abs(*row.ratio - *univariate.rows[i].ratio));
    trace.rows.push_back(row);
  }
  trace.metrics.emplace_back("y", y);
  trace.metrics.emplace_back("max_gap_to_univariate", gap);
  finish(trace);
  return trace;
}

RatioTrace derivative_trial_check(double t, double x, std::span<const int> n_values, const QuadratureConfig& cfg) {
  check_open_unit(t, "derivative_trial_check");
  check_open_unit(x, "derivative_trial_check");
  check_n_values(n_values, 2, "derivative_trial_check");
  const ScalarFunction big = trial_G(t);
  const ScalarFunction small = big.derivative_function();
  RatioTrace trace;
  trace.label = fmt::format("derivative:{}", big.label());
  trace.x = x;
  int ge = 0;
  int lt = 0;
  for (int n : n_values) {
    TraceRow row;
    row.n = n;
    row.delta = std::abs(bernstein_derivative_eval(big, n, x) - small(x));
    row.j = j_functional(*small.exact_modulus(), n, x, cfg);
    row.ratio = safe_ratio(row.delta, row.j);
    (row.delta >= row.j ? ge : lt) += 1;
    trace.rows.push_back(row);
  }
  trace.metrics.emplace_back("n_delta_ge_j", ge);
  trace.metrics.emplace_back("n_delta_lt_j", lt);
  finish(trace);
  return trace;
}

}  // namespace bernaudit
