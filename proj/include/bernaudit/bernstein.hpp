#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "bernaudit/functions.hpp"

namespace bernaudit {

/// Polynomial degree, or INF meaning "exact in this coordinate" (B_∞[f] = f).
class Degree {
 public:
  /// Throws DomainError for n < 1.
  explicit Degree(int n);
  static Degree inf() { return Degree(); }

  bool is_inf() const noexcept { return !value_; }
  /// Finite degree; throws DomainError for INF.
  int value() const;
  std::string to_string() const;

  friend bool operator==(const Degree&, const Degree&) = default;
  /// INF orders after every finite degree.
  friend std::strong_ordering operator<=>(const Degree& a, const Degree& b) {
    if (a.is_inf() != b.is_inf()) return a.is_inf() ? std::strong_ordering::greater : std::strong_ordering::less;
    if (a.is_inf()) return std::strong_ordering::equal;
    return *a.value_ <=> *b.value_;
  }

 private:
  Degree() = default;
  std::optional<int> value_;
};

/// Basis weights C(n,m) x^m (1-x)^(n-m), m = 0..n, evaluated in the log
/// domain; weights below 1e-300 are returned as 0.
std::vector<double> bernstein_weights(int n, double x);

/// B_n[f](x); B_INF[f](x) = f(x).
double bernstein_eval(const UnivariateMap& f, Degree n, double x);
double bernstein_eval(const ScalarFunction& f, Degree n, double x);

/// Δ_n[f](x) = |B_n[f](x) - f(x)|.
double error_exact(const ScalarFunction& f, Degree n, double x);

/// d/dx B_n[f](x) via forward differences f((j+1)/n) - f(j/n); n >= 2.
double bernstein_derivative_eval(const UnivariateMap& f, int n, double x);
double bernstein_derivative_eval(const ScalarFunction& f, int n, double x);

/// Tensor-product operator B_{n1,n2}[f](x, y) with INF in either coordinate
/// leaving that argument exact.
double bernstein2_eval(const BivariateFunction& f, Degree n1, Degree n2, double x, double y);

/// |B_{n1,n2}[f](x, y) - f(x, y)|.
double error2_exact(const BivariateFunction& f, Degree n1, Degree n2, double x, double y);

}  // namespace bernaudit
