#include "bernaudit/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

namespace bernaudit {

void QuadratureConfig::validate() const {
  if (!(truncation_z >= 8.0) || !std::isfinite(truncation_z)) {
    throw ConfigError(fmt::format("truncation_z must be >= 8, got {}", truncation_z));
  }
  if (!(rel_tol > 0.0 && rel_tol <= 1e-4)) {
    throw ConfigError(fmt::format("rel_tol must lie in (0, 1e-4], got {}", rel_tol));
  }
  if (max_subdivisions < 1) {
    throw ConfigError("max_subdivisions must be positive");
  }
}

namespace {

// Kronrod abscissae on [-1,1] (descending, last is the centre) and weights;
// the odd-indexed abscissae are the 7-point Gauss nodes.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double abs_value;
};

Panel kronrod15(const Integrand& g, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double tiny = std::numeric_limits<double>::min();
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::abs(half);

  std::array<double, 7> f_left{};
  std::array<double, 7> f_right{};
  const double f_centre = g(centre);
  double gauss = f_centre * kGaussWeights[3];
  double kronrod = f_centre * kKronrodWeights[7];
  double abs_sum = std::abs(kronrod);

  for (int j = 0; j < 3; ++j) {
    const int idx = 2 * j + 1;
    const double dx = half * kKronrodNodes[idx];
    const double f1 = g(centre - dx);
    const double f2 = g(centre + dx);
    f_left[idx] = f1;
    f_right[idx] = f2;
    gauss += kGaussWeights[j] * (f1 + f2);
    kronrod += kKronrodWeights[idx] * (f1 + f2);
    abs_sum += kKronrodWeights[idx] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 4; ++j) {
    const int idx = 2 * j;
    const double dx = half * kKronrodNodes[idx];
    const double f1 = g(centre - dx);
    const double f2 = g(centre + dx);
    f_left[idx] = f1;
    f_right[idx] = f2;
    kronrod += kKronrodWeights[idx] * (f1 + f2);
    abs_sum += kKronrodWeights[idx] * (std::abs(f1) + std::abs(f2));
  }

  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(f_centre - mean);
  for (int j = 0; j < 7; ++j) {
    asc += kKronrodWeights[j] * (std::abs(f_left[j] - mean) + std::abs(f_right[j] - mean));
  }

  Panel p{a, b, kronrod * half, std::abs((kronrod - gauss) * half), abs_sum * abs_half};
  asc *= abs_half;
  if (asc != 0.0 && p.error != 0.0) {
    p.error = asc * std::min(1.0, std::pow(200.0 * p.error / asc, 1.5));
  }
  if (p.abs_value > tiny / (50.0 * eps)) {
    p.error = std::max(50.0 * eps * p.abs_value, p.error);
  }
  if (!std::isfinite(p.value)) {
    p.error = std::numeric_limits<double>::infinity();
  }
  return p;
}

bool panel_less(const Panel& x, const Panel& y) { return x.error < y.error; }

}  // namespace

QuadratureResult integrate(const Integrand& g, double a, double b, const QuadratureConfig& cfg,
                           std::span<const double> breakpoints) {
  if (!(b > a)) {
    if (a == b) return {};
    throw DomainError(fmt::format("integrate: empty interval [{}, {}]", a, b));
  }

  std::vector<double> cuts;
  cuts.reserve(breakpoints.size() + 2);
  cuts.push_back(a);
  for (double c : breakpoints) {
    if (c > a && c < b) cuts.push_back(c);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Panel> heap;
  std::vector<Panel> frozen;
  heap.reserve(cuts.size() * 2);
  double total = 0.0;
  double total_err = 0.0;
  double total_abs = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    heap.push_back(kronrod15(g, cuts[i], cuts[i + 1]));
    total += heap.back().value;
    total_err += heap.back().error;
    total_abs += heap.back().abs_value;
  }
  std::make_heap(heap.begin(), heap.end(), panel_less);
  std::size_t intervals = heap.size();
  const double min_width = 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));

  auto converged = [&] {
    return total_err <= std::max(cfg.rel_tol * std::abs(total), 1e-13 * total_abs);
  };

  while (!converged()) {
    if (heap.empty() || intervals >= cfg.max_subdivisions) {
      throw ConvergenceError(
          fmt::format("adaptive quadrature did not reach rel_tol {} within {} intervals (estimate {}, error {})",
                      cfg.rel_tol, intervals, total, total_err),
          total, total_err);
    }
    std::pop_heap(heap.begin(), heap.end(), panel_less);
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.b - worst.a <= min_width || mid <= worst.a || mid >= worst.b) {
      // Cannot be resolved further; its error stays in the budget.
      frozen.push_back(worst);
      continue;
    }
    const Panel left = kronrod15(g, worst.a, mid);
    const Panel right = kronrod15(g, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), panel_less);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), panel_less);
    ++intervals;
  }

  // Re-sum from the final partition, ordered by position, so the result does
  // not depend on the heap's internal layout.
  heap.insert(heap.end(), frozen.begin(), frozen.end());
  std::sort(heap.begin(), heap.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  CompensatedSum value;
  CompensatedSum error;
  for (const Panel& p : heap) {
    value += p.value;
    error += p.error;
  }
  return {value.value(), error.value(), heap.size()};
}

double gauss_halfline(const Integrand& g, const QuadratureConfig& cfg, std::span<const double> breakpoints) {
  return integrate(g, 0.0, cfg.truncation_z, cfg, breakpoints).value;
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(fmt::format("log_gamma: argument must be positive and finite, got {}", x));
  }
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double stirling_error(std::int64_t n) {
  if (n < 1) throw DomainError("stirling_error: n must be >= 1");
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  if (n <= 15) {
    // Extended precision absorbs the cancellation between ln n! and its
    // Stirling approximation.
    const long double nn = static_cast<long double>(n);
    int sign = 0;
    const long double ln_fact = ::lgammal_r(nn + 1.0L, &sign);
    const long double stirling =
        (nn + 0.5L) * std::log(nn) - nn + 0.5L * std::log(2.0L * std::numbers::pi_v<long double>);
    return static_cast<double>(ln_fact - stirling);
  }
  const double nd = static_cast<double>(n);
  const double nn = nd * nd;
  if (n > 500) return (s0 - s1 / nn) / nd;
  if (n > 80) return (s0 - (s1 - s2 / nn) / nn) / nd;
  if (n > 35) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / nd;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / nd;
}

double log_binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) {
    throw DomainError(fmt::format("log_binomial: need 0 <= k <= n, got n={}, k={}", n, k));
  }
  if (k == 0 || k == n) return 0.0;
  const std::int64_t lo = std::min(k, n - k);
  const std::int64_t hi = n - lo;
  const double nd = static_cast<double>(n);
  const double lod = static_cast<double>(lo);
  const double hid = static_cast<double>(hi);
  // lo·ln(n/lo) + hi·ln(n/hi) - ½ln(2π·lo·hi/n) + Stirling remainders;
  // the log1p forms keep every term positive and well conditioned.
  const double main = lod * std::log1p(hid / lod) + hid * std::log1p(lod / hid);
  const double scale = 0.5 * (std::log(2.0 * std::numbers::pi) + std::log(lod) + std::log1p(-lod / nd));
  return main - scale + (stirling_error(n) - stirling_error(lo) - stirling_error(hi));
}

namespace {

// x·ln(x/np) + np - x without cancellation when x ≈ np.
double deviance_term(double x, double np) {
  if (std::abs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / np) + np - x;
}

}  // namespace

double log_binomial_pmf(std::int64_t n, std::int64_t k, double p) {
  if (n < 0 || !(p >= 0.0 && p <= 1.0)) {
    throw DomainError(fmt::format("log_binomial_pmf: bad parameters n={}, p={}", n, p));
  }
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  if (k < 0 || k > n) return neg_inf;
  const double q = 1.0 - p;
  if (p == 0.0) return k == 0 ? 0.0 : neg_inf;
  if (q == 0.0) return k == n ? 0.0 : neg_inf;
  if (n == 0) return 0.0;
  const double nd = static_cast<double>(n);
  if (k == 0) return p < 0.1 ? -deviance_term(nd, nd * q) - nd * p : nd * std::log1p(-p);
  if (k == n) return q < 0.1 ? -deviance_term(nd, nd * p) - nd * q : nd * std::log(p);
  const double kd = static_cast<double>(k);
  const double rest = nd - kd;
  const double lc = stirling_error(n) - stirling_error(k) - stirling_error(n - k) -
                    deviance_term(kd, nd * p) - deviance_term(rest, nd * q);
  const double lf = std::log(2.0 * std::numbers::pi) + std::log(kd) + std::log1p(-kd / nd);
  return lc - 0.5 * lf;
}

double log_sum_exp(std::span<const double> values) {
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : values) peak = std::max(peak, v);
  if (!std::isfinite(peak)) return peak;
  CompensatedSum acc;
  for (double v : values) acc += std::exp(v - peak);
  return peak + std::log(acc.value());
}

}  // namespace bernaudit
