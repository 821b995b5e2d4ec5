#include "bernaudit/bernstein.hpp"

#include <cmath>

#include <fmt/format.h>

#include "bernaudit/numerics.hpp"

namespace bernaudit {

Degree::Degree(int n) : value_(n) {
  if (n < 1) throw DomainError(fmt::format("degree must be >= 1, got {}", n));
}

int Degree::value() const {
  if (!value_) throw DomainError("degree is INF");
  return *value_;
}

std::string Degree::to_string() const { return value_ ? std::to_string(*value_) : std::string("inf"); }

namespace {

constexpr int kAnchorStride = 16;
constexpr double kWeightFloor = 1e-300;

void check_unit_point(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(fmt::format("{}: point must lie in [0,1], got {}", what, x));
}

}  // namespace

std::vector<double> bernstein_weights(int n, double x) {
  if (n < 0) throw DomainError("bernstein_weights: n must be >= 0");
  check_unit_point(x, "bernstein_weights");
  std::vector<double> w(static_cast<std::size_t>(n) + 1, 0.0);
  if (x == 0.0 || x == 1.0) {
    w[x == 0.0 ? 0 : static_cast<std::size_t>(n)] = 1.0;
    return w;
  }
  // Walk outward from the mode with the term ratio, re-anchoring on the
  // saddle-point pmf every kAnchorStride terms so rounding cannot accumulate.
  const double r = x / (1.0 - x);
  const int mode = std::min(n, static_cast<int>(std::floor((n + 1) * x)));
  auto exact = [&](int m) { return std::exp(log_binomial_pmf(n, m, x)); };
  const double peak = exact(mode);
  double v = peak;
  for (int m = mode; m <= n; ++m) {
    if (m > mode) v = (m - mode) % kAnchorStride == 0 ? exact(m) : v * (static_cast<double>(n - m + 1) / m) * r;
    if (v < kWeightFloor) break;
    w[static_cast<std::size_t>(m)] = v;
  }
  v = peak;
  for (int m = mode - 1; m >= 0; --m) {
    v = (mode - m) % kAnchorStride == 0 ? exact(m) : v * (static_cast<double>(m + 1) / (n - m)) / r;
    if (v < kWeightFloor) break;
    w[static_cast<std::size_t>(m)] = v;
  }
  return w;
}

double bernstein_eval(const UnivariateMap& f, Degree n, double x) {
  check_unit_point(x, "bernstein_eval");
  if (n.is_inf()) return f(x);
  const int deg = n.value();
  if (x == 0.0) return f(0.0);
  if (x == 1.0) return f(1.0);
  const auto w = bernstein_weights(deg, x);
  CompensatedSum acc;
  for (int m = 0; m <= deg; ++m) {
    const double wm = w[static_cast<std::size_t>(m)];
    if (wm != 0.0) acc += wm * f(static_cast<double>(m) / deg);
  }
  return acc.value();
}

double bernstein_eval(const ScalarFunction& f, Degree n, double x) { return bernstein_eval(f.eval(), n, x); }

double error_exact(const ScalarFunction& f, Degree n, double x) { return std::abs(bernstein_eval(f, n, x) - f(x)); }

double bernstein_derivative_eval(const UnivariateMap& f, int n, double x) {
  if (n < 2) throw DomainError(fmt::format("bernstein_derivative_eval: n must be >= 2, got {}", n));
  check_unit_point(x, "bernstein_derivative_eval");
  std::vector<double> values(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) values[static_cast<std::size_t>(j)] = f(static_cast<double>(j) / n);
  const auto w = bernstein_weights(n - 1, x);
  CompensatedSum acc;
  for (int j = 0; j < n; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    if (w[idx] != 0.0) acc += w[idx] * (values[idx + 1] - values[idx]);
  }
  return n * acc.value();
}

double bernstein_derivative_eval(const ScalarFunction& f, int n, double x) {
  return bernstein_derivative_eval(f.eval(), n, x);
}

double bernstein2_eval(const BivariateFunction& f, Degree n1, Degree n2, double x, double y) {
  check_unit_point(x, "bernstein2_eval");
  check_unit_point(y, "bernstein2_eval");
  if (n1.is_inf() && n2.is_inf()) return f(x, y);
  if (n2.is_inf()) return bernstein_eval([&](double u) { return f(u, y); }, n1, x);
  if (n1.is_inf()) return bernstein_eval([&](double v) { return f(x, v); }, n2, y);

  const int d1 = n1.value();
  const int d2 = n2.value();
  const auto w1 = bernstein_weights(d1, x);
  const auto w2 = bernstein_weights(d2, y);

  CompensatedSum acc;
  for (int k1 = 0; k1 <= d1; ++k1) {
    const double a = w1[static_cast<std::size_t>(k1)];
    if (a == 0.0) continue;
    for (int k2 = 0; k2 <= d2; ++k2) {
      const double w = a * w2[static_cast<std::size_t>(k2)];
      if (w < kWeightFloor) continue;
      acc += w * f(static_cast<double>(k1) / d1, static_cast<double>(k2) / d2);
    }
  }
  return acc.value();
}

double error2_exact(const BivariateFunction& f, Degree n1, Degree n2, double x, double y) {
  return std::abs(bernstein2_eval(f, n1, n2, x, y) - f(x, y));
}

}  // namespace bernaudit
