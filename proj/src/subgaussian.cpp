#include "bernaudit/subgaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

namespace bernaudit {

BinomialModel::BinomialModel(int n, double p) : n_(n), p_(p) {
  if (n < 1) throw DomainError(fmt::format("BinomialModel: n must be >= 1, got {}", n));
  if (!(p > 0.0 && p < 1.0)) throw DomainError(fmt::format("BinomialModel: p must lie in (0,1), got {}", p));
  log_pmf_.resize(static_cast<std::size_t>(n) + 1);
  pmf_.resize(log_pmf_.size());
  for (int m = 0; m <= n; ++m) {
    const auto i = static_cast<std::size_t>(m);
    log_pmf_[i] = log_binomial_pmf(n, m, p);
    pmf_[i] = std::exp(log_pmf_[i]);
  }
}

double BinomialModel::central_moment(int k) const {
  if (k < 0) throw DomainError("central_moment: order must be >= 0");
  const double mu = mean();
  CompensatedSum acc;
  for (int m = 0; m <= n_; ++m) acc += pmf_[static_cast<std::size_t>(m)] * std::pow(m - mu, k);
  return acc.value();
}

std::vector<double> BinomialModel::normalized_support() const {
  std::vector<double> eta(pmf_.size());
  const double mu = mean();
  const double s = sd();
  for (int m = 0; m <= n_; ++m) eta[static_cast<std::size_t>(m)] = (m - mu) / s;
  return eta;
}

// ---------------------------------------------------------------------------

void ViolationReport::add(AuditCell cell) {
  const bool first = cells_total == 0;
  ++cells_total;
  if (cell.margin > tolerance * (1.0 + std::abs(cell.rhs))) ++cells_violating;
  if (first || cell.margin > worst.margin) worst = cell;
  all_margins.push_back(std::move(cell));
}

void ViolationReport::absorb(const ViolationReport& other) {
  for (const auto& cell : other.all_margins) add(cell);
}

namespace {

double log_cosh(double t) {
  const double a = std::abs(t);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

std::vector<double> as_doubles(std::span<const int> v) { return {v.begin(), v.end()}; }

}  // namespace

double tail_function(const BinomialModel& b, double u) {
  if (!(u >= 0.0)) throw DomainError(fmt::format("tail_function: u must be >= 0, got {}", u));
  const auto eta = b.normalized_support();
  CompensatedSum upper;
  CompensatedSum lower;
  for (std::size_t m = 0; m < eta.size(); ++m) {
    if (eta[m] > u) upper += b.pmf()[m];
    if (eta[m] < -u) lower += b.pmf()[m];
  }
  return std::max(upper.value(), lower.value());
}

ViolationReport cosh_mgf_check(const BinomialModel& b, std::span<const double> lambdas) {
  ViolationReport r;
  r.inequality_id = "ln E cosh(lambda*eta) <= lambda^2/2";
  r.grid = {{"n", {static_cast<double>(b.n())}}, {"p", {b.p()}}, {"lambda", {lambdas.begin(), lambdas.end()}}};
  r.metadata = {{"scale", "lhs and rhs are natural logarithms of E cosh(lambda*eta) and exp(lambda^2/2)"}};
  const auto eta = b.normalized_support();
  std::vector<double> terms(eta.size());
  for (double lambda : lambdas) {
    if (!std::isfinite(lambda)) throw DomainError("cosh_mgf_check: lambda must be finite");
    for (std::size_t m = 0; m < eta.size(); ++m) terms[m] = b.log_pmf()[m] + log_cosh(lambda * eta[m]);
    AuditCell c;
    c.parameters = {{"n", b.n()}, {"p", b.p()}, {"lambda", lambda}};
    c.lhs = log_sum_exp(terms);
    c.rhs = 0.5 * lambda * lambda;
    c.margin = c.lhs - c.rhs;
    r.add(std::move(c));
  }
  return r;
}

ViolationReport moment_check(const BinomialModel& b, int m_max) {
  if (m_max < 1 || m_max > 20) throw DomainError(fmt::format("moment_check: m_max must lie in [1, 20], got {}", m_max));
  ViolationReport r;
  r.inequality_id = "E eta^(2m) <= (2m-1)!!";
  std::vector<double> orders;
  for (int m = 1; m <= m_max; ++m) orders.push_back(m);
  r.grid = {{"n", {static_cast<double>(b.n())}}, {"p", {b.p()}}, {"m", orders}};

  const double m2 = b.central_moment(2);
  const double th = std::sqrt(b.p() * (1.0 - b.p()));
  double gaussian = 1.0;  // (2m-1)!!
  std::size_t reference_violations = 0;
  for (int m = 1; m <= m_max; ++m) {
    gaussian *= 2.0 * m - 1.0;
    const double raw = b.central_moment(2 * m);
    AuditCell c;
    c.parameters = {{"n", b.n()}, {"p", b.p()}, {"m", m}};
    c.lhs = raw / std::pow(m2, m);
    c.rhs = gaussian;
    c.margin = c.lhs - c.rhs;
    r.add(std::move(c));
    // Reference form: E(μ-np)^{2m} <= n^{-m} (2m)!/(2^m m!) θ^m.
    const double reference_rhs = std::pow(static_cast<double>(b.n()), -m) * gaussian * std::pow(th, m);
    if (raw > reference_rhs * (1.0 + r.tolerance)) ++reference_violations;
  }
  r.metadata = {
      {"implemented_form", "E eta^(2m) <= (2m)!/(2^m m!), eta = (mu - np)/sqrt(Var), Var from the pmf"},
      {"reference_form", "E(mu - np)^(2m) <= n^(-m) (2m)!/(2^m m!) theta^m, theta = sqrt(p(1-p))"},
      {"reference_form_cells_violating", std::to_string(reference_violations)},
  };
  return r;
}

ViolationReport tail_bound_check(const BinomialModel& b, std::span<const double> u_grid) {
  ViolationReport r;
  r.inequality_id = "T(u) <= 2 exp(-u^2/2)";
  r.grid = {{"n", {static_cast<double>(b.n())}}, {"p", {b.p()}}, {"u", {u_grid.begin(), u_grid.end()}}};
  for (double u : u_grid) {
    AuditCell c;
    c.parameters = {{"n", b.n()}, {"p", b.p()}, {"u", u}};
    c.lhs = tail_function(b, u);
    c.rhs = 2.0 * std::exp(-0.5 * u * u);
    c.margin = c.lhs - c.rhs;
    r.add(std::move(c));
  }
  return r;
}

ViolationReport bk_check(double p, std::span<const double> lambdas) {
  if (!(p >= 0.5 && p < 1.0)) throw DomainError(fmt::format("bk_check: p must lie in [1/2, 1), got {}", p));
  ViolationReport r;
  r.inequality_id = "ln[(1-p)e^(-lambda p) + p e^(lambda(1-p))] <= p(1-p)lambda^2/2";
  r.grid = {{"p", {p}}, {"lambda", {lambdas.begin(), lambdas.end()}}};
  for (double lambda : lambdas) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
      throw DomainError(fmt::format("bk_check: lambda must be finite and >= 0, got {}", lambda));
    }
    AuditCell c;
    c.parameters = {{"p", p}, {"lambda", lambda}};
    // λ(1-p) + ln(p + (1-p)e^{-λ}) is the same quantity without overflow.
    c.lhs = lambda * (1.0 - p) + std::log(p + (1.0 - p) * std::exp(-lambda));
    c.rhs = p * (1.0 - p) * lambda * lambda / 2.0;
    c.margin = c.lhs - c.rhs;
    r.add(std::move(c));
  }
  return r;
}

double sub_norm_estimate(const std::function<double(double)>& mgf, std::span<const double> lambda_grid) {
  double best = 0.0;
  for (double lambda : lambda_grid) {
    if (lambda == 0.0 || !std::isfinite(lambda)) throw DomainError("sub_norm_estimate: lambda must be finite and nonzero");
    const double v = mgf(lambda);
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw DomainError(fmt::format("sub_norm_estimate: mgf({}) = {} is not finite and positive", lambda, v));
    }
    best = std::max(best, std::sqrt(2.0 * std::max(0.0, std::log(v))) / std::abs(lambda));
  }
  return best;
}

namespace {

template <typename PerModel>
ViolationReport audit_models(std::span<const int> ns, std::span<const double> ps, PerModel per_model) {
  ViolationReport total;
  bool first = true;
  for (int n : ns) {
    for (double p : ps) {
      ViolationReport one = per_model(BinomialModel(n, p));
      if (first) {
        total.inequality_id = one.inequality_id;
        total.grid = one.grid;
        total.metadata = one.metadata;
        first = false;
      }
      total.absorb(one);
    }
  }
  if (!first) {
    total.grid[0].values = as_doubles(ns);
    total.grid[1].values.assign(ps.begin(), ps.end());
  }
  return total;
}

}  // namespace

ViolationReport cosh_mgf_audit(std::span<const int> ns, std::span<const double> ps, std::span<const double> lambdas) {
  return audit_models(ns, ps, [&](const BinomialModel& b) { return cosh_mgf_check(b, lambdas); });
}

ViolationReport moment_audit(std::span<const int> ns, std::span<const double> ps, int m_max) {
  std::size_t reference = 0;
  auto report = audit_models(ns, ps, [&](const BinomialModel& b) {
    auto one = moment_check(b, m_max);
    reference += std::stoul(one.metadata.back().second);
    return one;
  });
  if (!report.metadata.empty()) report.metadata.back().second = std::to_string(reference);
  return report;
}

ViolationReport tail_bound_audit(std::span<const int> ns, std::span<const double> ps, std::span<const double> us) {
  return audit_models(ns, ps, [&](const BinomialModel& b) { return tail_bound_check(b, us); });
}

ViolationReport bk_audit(std::span<const double> ps, std::span<const double> lambdas) {
  ViolationReport total;
  for (double p : ps) total.absorb(bk_check(p, lambdas));
  total.inequality_id = bk_check(0.5, {}).inequality_id;
  total.grid = {{"p", {ps.begin(), ps.end()}}, {"lambda", {lambdas.begin(), lambdas.end()}}};
  return total;
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw DomainError("linspace: count must be >= 1");
  if (count == 1) return {lo};
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  return v;
}

std::vector<int> default_n_grid() { return {1, 2, 4, 8, 16, 32, 64, 128, 256}; }

std::vector<double> default_p_grid() {
  return {0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99};
}

std::vector<double> default_lambda_grid() { return linspace(-10.0, 10.0, 201); }

// ---------------------------------------------------------------------------
// PolyDensity
// ---------------------------------------------------------------------------

PolyDensity::PolyDensity(double a) : alpha(a) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError(fmt::format("PolyDensity: alpha must be > 0, got {}", a));
}

double PolyDensity::operator()(double x) const {
  const double ax = std::abs(x);
  if (ax > 1.0) return 0.0;
  return (alpha + 1.0) / (2.0 * alpha) * (1.0 - std::pow(ax, alpha));
}

double PolyDensity::variance_closed_form() const { return (alpha + 1.0) / (3.0 * (alpha + 3.0)); }

double PolyDensity::fourth_moment_closed_form() const { return (alpha + 1.0) / (5.0 * (alpha + 5.0)); }

double PolyDensity::excess_kurtosis_closed_form() const {
  const double v = variance_closed_form();
  return fourth_moment_closed_form() / (v * v) - 3.0;
}

namespace {

QuadratureConfig density_quadrature() {
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-13;
  return cfg;
}

double integrate_unit(const PolyDensity& d, const std::function<double(double)>& weight) {
  return integrate([&](double x) { return weight(x) * d(x); }, 0.0, 1.0, density_quadrature()).value;
}

}  // namespace

PolyDensityStats poly_density_stats(const PolyDensity& d, std::span<const double> lambdas) {
  PolyDensityStats s;
  s.normalization = 2.0 * integrate_unit(d, [](double) { return 1.0; });
  s.variance = 2.0 * integrate_unit(d, [](double x) { return x * x; });
  s.variance_closed_form = d.variance_closed_form();
  s.fourth_moment = 2.0 * integrate_unit(d, [](double x) { return x * x * x * x; });
  s.excess_kurtosis = s.fourth_moment / (s.variance * s.variance) - 3.0;
  const std::vector<double> cut{0.0};
  for (int k : {1, 3, 5}) {
    const double odd = integrate([&](double x) { return std::pow(x, k) * d(x); }, -1.0, 1.0, density_quadrature(), cut).value;
    s.max_abs_odd_moment = std::max(s.max_abs_odd_moment, std::abs(odd));
  }

  ViolationReport& r = s.ssub_margin_report;
  r.inequality_id = "E exp(lambda*zeta) <= exp(lambda^2 sigma^2/2)";
  r.grid = {{"alpha", {d.alpha}}, {"lambda", {lambdas.begin(), lambdas.end()}}};
  r.metadata = {{"mgf", "2*integral_0^1 cosh(lambda x) f(x) dx by adaptive Gauss-Kronrod"}};
  const double sigma2 = s.variance_closed_form;
  for (double lambda : lambdas) {
    AuditCell c;
    c.parameters = {{"alpha", d.alpha}, {"lambda", lambda}};
    c.lhs = 2.0 * integrate_unit(d, [lambda](double x) { return std::cosh(lambda * x); });
    c.rhs = std::exp(0.5 * lambda * lambda * sigma2);
    c.margin = c.lhs - c.rhs;
    r.add(std::move(c));
  }
  return s;
}

PolyDensityStats poly_density_stats(const PolyDensity& d) { return poly_density_stats(d, default_lambda_grid()); }

double excess_kurtosis_root(double lo, double hi, double tol) {
  auto k = [](double a) { return PolyDensity(a).excess_kurtosis_closed_form(); };
  double klo = k(lo);
  if (klo * k(hi) > 0.0) throw DomainError("excess_kurtosis_root: no sign change on the bracket");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double km = k(mid);
    if ((km > 0.0) == (klo > 0.0)) {
      lo = mid;
      klo = km;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace bernaudit
