#include "bernaudit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <fmt/format.h>

namespace bernaudit {

double theta(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(fmt::format("theta: p must lie in [0,1], got {}", p));
  return std::sqrt(p * (1.0 - p));
}

void finalize_record(BoundRecord& r) {
  r.ratio = r.j > 0.0 ? std::optional<double>(r.delta / r.j) : std::nullopt;
  r.pass = r.delta <= r.bound + kPassTolerance * (1.0 + r.bound);
}

namespace {

double gaussian_weight(double z) { return z * std::exp(-0.5 * z * z); }

// Kinks of ω mapped into z through δ = z·scale.
std::vector<double> z_cuts(const std::vector<double>& delta_kinks, double scale, double z_max) {
  std::vector<double> cuts;
  for (double d : delta_kinks) {
    const double z = d / scale;
    if (z < z_max) cuts.push_back(z);
  }
  return cuts;
}

double coordinate_scale(Degree n, double p) {
  if (n.is_inf()) return 0.0;
  return theta(p) / std::sqrt(static_cast<double>(n.value()));
}

void check_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(fmt::format("{}: point must lie in [0,1], got {}", what, x));
}

// ∫∫ h(z1, z2) z1 z2 e^{-(z1²+z2²)/2} over [0, T]², with degenerate
// coordinates (scale 0) collapsed analytically.
double tensor_halfline(const std::function<double(double, double)>& h, double s1, double s2,
                       const std::vector<double>& cuts1, const std::vector<double>& cuts2,
                       const QuadratureConfig& cfg) {
  if (s1 == 0.0 && s2 == 0.0) return h(0.0, 0.0);
  if (s2 == 0.0) {
    return gauss_halfline([&](double z) { return h(z * s1, 0.0) * gaussian_weight(z); }, cfg, cuts1);
  }
  if (s1 == 0.0) {
    return gauss_halfline([&](double z) { return h(0.0, z * s2) * gaussian_weight(z); }, cfg, cuts2);
  }
  auto inner = [&](double z1) {
    const double w1 = gaussian_weight(z1);
    if (w1 == 0.0) return 0.0;
    const double d1 = z1 * s1;
    return w1 * gauss_halfline([&](double z2) { return h(d1, z2 * s2) * gaussian_weight(z2); }, cfg, cuts2);
  };
  return gauss_halfline(inner, cfg, cuts1);
}

}  // namespace

double j_scaled(const ModulusSpec& m, double scale, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(scale >= 0.0)) throw DomainError(fmt::format("j_scaled: scale must be >= 0, got {}", scale));
  if (scale == 0.0) return 0.0;
  const auto cuts = z_cuts(m.kinks(), scale, cfg.truncation_z);
  return gauss_halfline([&](double z) { return m(z * scale) * gaussian_weight(z); }, cfg, cuts);
}

double j_functional(const ModulusSpec& m, int n, double x, const QuadratureConfig& cfg) {
  if (n < 1) throw DomainError(fmt::format("j_functional: n must be >= 1, got {}", n));
  check_unit(x, "j_functional");
  return j_scaled(m, theta(x) / std::sqrt(static_cast<double>(n)), cfg);
}

double j_hoelder_closed_form(double alpha, double h, int n, double x) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("j_hoelder_closed_form: alpha must lie in (0,1]");
  if (n < 1) throw DomainError("j_hoelder_closed_form: n must be >= 1");
  const double th = theta(x);
  if (th == 0.0) return 0.0;
  return std::pow(2.0, alpha / 2.0) * std::exp(log_gamma(1.0 + alpha / 2.0)) * h * std::pow(th, alpha) *
         std::pow(static_cast<double>(n), -alpha / 2.0);
}

HoelderComparison hoelder_comparison(double alpha, double h, int n, double x, const QuadratureConfig& cfg) {
  HoelderComparison c;
  c.alpha = alpha;
  c.h = h;
  c.n = n;
  c.x = x;
  c.quadrature_j = j_functional(ModulusSpec(Hoelder{alpha, h}), n, x, cfg);
  c.closed_form_j = j_hoelder_closed_form(alpha, h, n, x);
  c.derived_bound = 2.0 * c.closed_form_j;
  const double spread = 2.0 * x * (1.0 - x) / n;
  c.classic_hoelder = 2.0 * h * std::pow(spread, alpha / 2.0) * std::exp(log_gamma(alpha / 2.0));
  if (alpha == 1.0) c.classic_lipschitz = 2.0 * h * std::sqrt(std::numbers::pi * spread);
  return c;
}

ModulusSpec resolve_modulus(const ScalarFunction& f, const EmpiricalPolicy& policy) {
  if (f.exact_modulus()) return *f.exact_modulus();
  if (!policy.enabled) {
    throw ConfigError(fmt::format("function '{}' has no modulus and empirical estimation is disabled", f.label()));
  }
  return ModulusSpec(Empirical(f, policy.grid_step));
}

BoundRecord upper_bound(const ScalarFunction& f, int n, double x, const QuadratureConfig& cfg,
                        const EmpiricalPolicy& policy) {
  const ModulusSpec m = resolve_modulus(f, policy);
  BoundRecord r;
  r.label = f.label();
  r.x = x;
  r.n1 = Degree(n);
  r.delta = error_exact(f, r.n1, x);
  try {
    r.j = j_functional(m, n, x, cfg);
  } catch (const ConvergenceError& e) {
    r.j = e.estimate();
    r.converged = false;
  }
  r.bound = 2.0 * r.j;
  finalize_record(r);
  return r;
}

double uniform_bound(const ModulusSpec& m, int n, const QuadratureConfig& cfg) {
  cfg.validate();
  if (n < 1) throw DomainError(fmt::format("uniform_bound: n must be >= 1, got {}", n));
  const double scale = 1.0 / (2.0 * std::sqrt(static_cast<double>(n)));
  const auto cuts = z_cuts(m.kinks(), scale, cfg.truncation_z);
  return 2.0 * gauss_halfline([&](double y) { return m(y * scale) * y * std::exp(-y * y); }, cfg, cuts);
}

double uniform_companion(const ModulusSpec& m, int n, const QuadratureConfig& cfg) {
  if (n < 1) throw DomainError(fmt::format("uniform_companion: n must be >= 1, got {}", n));
  return 2.0 * j_scaled(m, 0.5 / std::sqrt(static_cast<double>(n)), cfg);
}

BoundRecord derivative_bound(const ScalarFunction& f, int n, double x, const QuadratureConfig& cfg,
                             const EmpiricalPolicy& policy) {
  if (n < 2) throw DomainError(fmt::format("derivative_bound: n must be >= 2, got {}", n));
  check_unit(x, "derivative_bound");
  const ScalarFunction df = f.derivative_function();
  const ModulusSpec m = resolve_modulus(df, policy);
  BoundRecord r;
  r.label = f.label();
  r.x = x;
  r.n1 = Degree(n);
  r.delta = std::abs(bernstein_derivative_eval(f, n, x) - df(x));
  try {
    r.j = j_functional(m, n - 1, x, cfg);
  } catch (const ConvergenceError& e) {
    r.j = e.estimate();
    r.converged = false;
  }
  r.bound = 1.5 * m(1.0 / n) + 2.0 * r.j;
  finalize_record(r);
  return r;
}

double j2_functional(const Modulus2& m, Degree n1, Degree n2, double x, double y, const QuadratureConfig& cfg) {
  cfg.validate();
  check_unit(x, "j2_functional");
  check_unit(y, "j2_functional");
  const double s1 = coordinate_scale(n1, x);
  const double s2 = coordinate_scale(n2, y);
  auto k1 = m.kinks1;
  auto k2 = m.kinks2;
  k1.push_back(1.0);
  k2.push_back(1.0);
  const auto cuts1 = s1 > 0.0 ? z_cuts(k1, s1, cfg.truncation_z) : std::vector<double>{};
  const auto cuts2 = s2 > 0.0 ? z_cuts(k2, s2, cfg.truncation_z) : std::vector<double>{};
  return tensor_halfline([&](double d1, double d2) { return m(d1, d2); }, s1, s2, cuts1, cuts2, cfg);
}

BoundRecord bivariate_bound(const BivariateFunction& f, Degree n1, Degree n2, double x, double y,
                            const QuadratureConfig& cfg) {
  if (!f.exact_modulus2) throw ConfigError(fmt::format("bivariate function '{}' has no modulus", f.label));
  BoundRecord r;
  r.label = f.label;
  r.x = x;
  r.y = y;
  r.n1 = n1;
  r.n2 = n2;
  r.delta = error2_exact(f, n1, n2, x, y);
  try {
    r.j = j2_functional(*f.exact_modulus2, n1, n2, x, y, cfg);
  } catch (const ConvergenceError& e) {
    r.j = e.estimate();
    r.converged = false;
  }
  r.bound = 4.0 * r.j;
  finalize_record(r);
  return r;
}

PlaneNorm parse_plane_norm(const std::string& name) {
  if (name == "euclidean") return PlaneNorm::euclidean;
  if (name == "max") return PlaneNorm::max;
  if (name == "sum") return PlaneNorm::sum;
  throw ConfigError(fmt::format("unknown plane norm '{}' (expected euclidean, max or sum)", name));
}

double general_norm_bound(const std::function<double(double)>& gamma, PlaneNorm norm, Degree n1, Degree n2, double x,
                          double y, const QuadratureConfig& cfg) {
  cfg.validate();
  check_unit(x, "general_norm_bound");
  check_unit(y, "general_norm_bound");
  const double s1 = coordinate_scale(n1, x);
  const double s2 = coordinate_scale(n2, y);
  auto h = [&](double d1, double d2) {
    const double a = std::min(d1, 1.0);
    const double b = std::min(d2, 1.0);
    switch (norm) {
      case PlaneNorm::euclidean:
        return gamma(std::hypot(a, b));
      case PlaneNorm::max:
        return gamma(std::max(a, b));
      case PlaneNorm::sum:
        break;
    }
    return gamma(a + b);
  };
  const std::vector<double> clamp{1.0};
  const auto cuts1 = s1 > 0.0 ? z_cuts(clamp, s1, cfg.truncation_z) : std::vector<double>{};
  const auto cuts2 = s2 > 0.0 ? z_cuts(clamp, s2, cfg.truncation_z) : std::vector<double>{};
  return 4.0 * tensor_halfline(h, s1, s2, cuts1, cuts2, cfg);
}

}  // namespace bernaudit
