#include "bernaudit/functions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

namespace bernaudit {

namespace {

constexpr double kVerifyTolerance = 1e-12;

double clamp_delta(double delta) {
  if (!(delta >= 0.0)) throw DomainError(fmt::format("modulus argument must be >= 0, got {}", delta));
  return std::min(delta, 1.0);
}

struct VariantEval {
  double d;
  double operator()(const Hoelder& m) const { return d == 0.0 ? 0.0 : m.h * std::pow(d, m.alpha); }
  double operator()(const Lipschitz& m) const { return m.l * d; }
  double operator()(const Tabulated& m) const {
    const auto& k = m.knots;
    auto it = std::upper_bound(k.begin(), k.end(), d, [](double v, const auto& knot) { return v < knot.first; });
    if (it == k.end()) return k.back().second;
    const double x0 = it == k.begin() ? 0.0 : std::prev(it)->first;
    const double y0 = it == k.begin() ? 0.0 : std::prev(it)->second;
    const double w = (d - x0) / (it->first - x0);
    return y0 + w * (it->second - y0);
  }
  double operator()(const Empirical& m) const { return m(d); }
};

void validate_tabulated(const Tabulated& t) {
  if (t.knots.empty()) throw ConfigError("tabulated modulus needs at least one knot");
  double prev_d = 0.0;
  double prev_w = 0.0;
  for (std::size_t i = 0; i < t.knots.size(); ++i) {
    const auto [d, w] = t.knots[i];
    if (!(d > prev_d || (i == 0 && d == 0.0)) || d > 1.0) {
      throw ConfigError(fmt::format("tabulated modulus knots must be strictly increasing within (0, 1]; bad δ = {}", d));
    }
    if (!(w >= prev_w) || !std::isfinite(w)) {
      throw ConfigError(fmt::format("tabulated modulus must be nonnegative and nondecreasing; bad ω = {} at δ = {}", w, d));
    }
    if (d == 0.0 && w != 0.0) throw ConfigError("tabulated modulus must vanish at δ = 0");
    prev_d = d;
    prev_w = w;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Empirical
// ---------------------------------------------------------------------------

Empirical::Empirical(const ScalarFunction& source, double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.5)) {
    throw ConfigError(fmt::format("empirical modulus grid_step must lie in (0, 0.5], got {}", grid_step));
  }
  const double cells = std::round(1.0 / grid_step);
  if (std::abs(cells * grid_step - 1.0) > 1e-9) {
    throw ConfigError(fmt::format("empirical modulus grid_step {} does not divide [0,1]", grid_step));
  }
  const auto n = static_cast<std::size_t>(cells) + 1;
  std::vector<double> samples(n);
  for (std::size_t i = 0; i < n; ++i) samples[i] = source(static_cast<double>(i) / cells);
  build(samples);
}

Empirical::Empirical(const std::vector<double>& samples) {
  if (samples.size() < 2) throw ConfigError("empirical modulus needs at least two samples");
  build(samples);
}

void Empirical::build(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  step_ = 1.0 / static_cast<double>(n - 1);
  std::vector<double> lag(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    double best = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) best = std::max(best, std::abs(samples[i + k] - samples[i]));
    lag[k] = std::max(best, lag[k - 1]);
  }
  lags_ = std::make_shared<const std::vector<double>>(std::move(lag));
}

double Empirical::operator()(double delta) const {
  const double d = clamp_delta(delta);
  const auto& lag = *lags_;
  const auto k = static_cast<std::size_t>(std::floor(d / step_ + 1e-9));
  return lag[std::min(k, lag.size() - 1)];
}

// ---------------------------------------------------------------------------
// ModulusSpec
// ---------------------------------------------------------------------------

ModulusSpec::ModulusSpec(Hoelder m) : variant_(m) {
  if (!(m.alpha > 0.0 && m.alpha <= 1.0)) throw ConfigError(fmt::format("Hoelder alpha must lie in (0,1], got {}", m.alpha));
  if (!(m.h > 0.0) || !std::isfinite(m.h)) throw ConfigError(fmt::format("Hoelder constant must be positive, got {}", m.h));
}

ModulusSpec::ModulusSpec(Lipschitz m) : variant_(m) {
  if (!(m.l > 0.0) || !std::isfinite(m.l)) throw ConfigError(fmt::format("Lipschitz constant must be positive, got {}", m.l));
}

ModulusSpec::ModulusSpec(Tabulated m) : variant_(std::move(m)) { validate_tabulated(std::get<Tabulated>(variant_)); }

ModulusSpec::ModulusSpec(Empirical m) : variant_(std::move(m)) {}

double ModulusSpec::operator()(double delta) const { return std::visit(VariantEval{clamp_delta(delta)}, variant_); }

std::vector<double> ModulusSpec::kinks() const {
  std::vector<double> out;
  if (const auto* t = std::get_if<Tabulated>(&variant_)) {
    for (const auto& knot : t->knots) {
      if (knot.first > 0.0) out.push_back(knot.first);
    }
  } else if (const auto* e = std::get_if<Empirical>(&variant_)) {
    const std::size_t n = e->lags().size();
    for (std::size_t k = 1; k < n; ++k) out.push_back(static_cast<double>(k) * e->grid_step());
  }
  if (out.empty() || out.back() < 1.0) out.push_back(1.0);
  return out;
}

std::string ModulusSpec::describe() const {
  struct Describe {
    std::string operator()(const Hoelder& m) const { return fmt::format("hoelder(alpha={}, H={})", m.alpha, m.h); }
    std::string operator()(const Lipschitz& m) const { return fmt::format("lipschitz(L={})", m.l); }
    std::string operator()(const Tabulated& m) const { return fmt::format("tabulated({} knots)", m.knots.size()); }
    std::string operator()(const Empirical& m) const { return fmt::format("empirical(grid_step={})", m.grid_step()); }
  };
  return std::visit(Describe{}, variant_);
}

double modulus_eval(const ModulusSpec& m, double delta) { return m(delta); }

double modulus_excess(const UnivariateMap& f, const ModulusSpec& m, int points) {
  if (points < 2) throw ConfigError("modulus_excess needs at least two grid points");
  const auto n = static_cast<std::size_t>(points);
  const double cells = static_cast<double>(n - 1);
  std::vector<double> values(n);
  std::vector<double> omega(n);
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = f(static_cast<double>(i) / cells);
    omega[i] = m(static_cast<double>(i) / cells);
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      worst = std::max(worst, std::abs(values[j] - values[i]) - omega[j - i]);
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// ScalarFunction
// ---------------------------------------------------------------------------

namespace {

void check_total(const std::string& label, const UnivariateMap& f) {
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    if (!std::isfinite(f(x))) {
      throw ConfigError(fmt::format("function '{}' is not finite at x = {}", label, x));
    }
  }
}

void check_modulus(const std::string& label, const UnivariateMap& f, const ModulusSpec& m) {
  if (std::holds_alternative<Empirical>(m.variant())) return;
  const double excess = modulus_excess(f, m);
  if (excess > kVerifyTolerance) {
    throw ConfigError(fmt::format("modulus {} does not dominate the increments of '{}' (excess {:.3e})", m.describe(),
                                  label, excess));
  }
}

}  // namespace

ScalarFunction::ScalarFunction(std::string label, UnivariateMap eval, std::optional<ModulusSpec> exact_modulus)
    : label_(std::move(label)), eval_(std::move(eval)), modulus_(std::move(exact_modulus)) {
  if (!eval_) throw ConfigError("function evaluator is empty");
  check_total(label_, eval_);
  if (modulus_) check_modulus(label_, eval_, *modulus_);
}

ScalarFunction& ScalarFunction::with_derivative(UnivariateMap derivative, std::optional<ModulusSpec> derivative_modulus) {
  if (!derivative) throw ConfigError("derivative evaluator is empty");
  check_total(label_ + "'", derivative);
  if (derivative_modulus) check_modulus(label_ + "'", derivative, *derivative_modulus);
  derivative_ = std::move(derivative);
  derivative_modulus_ = std::move(derivative_modulus);
  return *this;
}

ScalarFunction ScalarFunction::derivative_function() const {
  if (!derivative_) throw ConfigError(fmt::format("function '{}' has no derivative attached", label_));
  ScalarFunction d;
  d.label_ = label_ + "'";
  d.eval_ = derivative_;
  d.modulus_ = derivative_modulus_;
  return d;
}

ScalarFunction ScalarFunction::with_modulus_unchecked(ModulusSpec m) const {
  ScalarFunction copy = *this;
  copy.modulus_ = std::move(m);
  return copy;
}

// ---------------------------------------------------------------------------
// Bivariate
// ---------------------------------------------------------------------------

double Modulus2::operator()(double d1, double d2) const {
  if (!(d1 >= 0.0) || !(d2 >= 0.0)) {
    throw DomainError(fmt::format("bivariate modulus arguments must be >= 0, got ({}, {})", d1, d2));
  }
  return eval(std::min(d1, 1.0), std::min(d2, 1.0));
}

Modulus2 empirical_modulus2(const BivariateFunction& f, double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.5)) {
    throw ConfigError(fmt::format("bivariate empirical grid_step must lie in (0, 0.5], got {}", grid_step));
  }
  const double cells = std::round(1.0 / grid_step);
  if (std::abs(cells * grid_step - 1.0) > 1e-9 || cells > 256) {
    throw ConfigError(fmt::format("bivariate empirical grid_step {} must divide [0,1] into at most 256 cells", grid_step));
  }
  const auto n = static_cast<std::size_t>(cells) + 1;
  std::vector<double> v(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) v[i * n + j] = f(i / cells, j / cells);
  }
  auto table = std::make_shared<std::vector<double>>(n * n, 0.0);
  auto& lag = *table;
  for (std::size_t l1 = 0; l1 < n; ++l1) {
    for (std::size_t l2 = 0; l2 < n; ++l2) {
      double best = 0.0;
      for (std::size_t i = 0; i + l1 < n; ++i) {
        for (std::size_t j = 0; j + l2 < n; ++j) {
          best = std::max(best, std::abs(v[(i + l1) * n + j + l2] - v[i * n + j]));
          best = std::max(best, std::abs(v[(i + l1) * n + j] - v[i * n + j + l2]));
        }
      }
      lag[l1 * n + l2] = best;
    }
  }
  for (std::size_t l1 = 0; l1 < n; ++l1) {
    for (std::size_t l2 = 0; l2 < n; ++l2) {
      double& cell = lag[l1 * n + l2];
      if (l1 > 0) cell = std::max(cell, lag[(l1 - 1) * n + l2]);
      if (l2 > 0) cell = std::max(cell, lag[l1 * n + l2 - 1]);
    }
  }
  Modulus2 m;
  m.eval = [table, n, cells](double d1, double d2) {
    const auto k1 = std::min(static_cast<std::size_t>(std::floor(d1 * cells + 1e-9)), n - 1);
    const auto k2 = std::min(static_cast<std::size_t>(std::floor(d2 * cells + 1e-9)), n - 1);
    return (*table)[k1 * n + k2];
  };
  for (std::size_t k = 1; k < n; ++k) {
    m.kinks1.push_back(k / cells);
    m.kinks2.push_back(k / cells);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Trial functions and corpora
// ---------------------------------------------------------------------------

namespace {

void check_unit(double t, const char* what) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError(fmt::format("{}: t must lie in [0,1], got {}", what, t));
}

ModulusSpec saturating_identity(double cap) {
  if (cap >= 1.0) return Lipschitz{1.0};
  return Tabulated{{{cap, cap}, {1.0, cap}}};
}

ModulusSpec zero_modulus() { return Tabulated{{{1.0, 0.0}}}; }

}  // namespace

ScalarFunction trial_g(double t) {
  check_unit(t, "trial_g");
  return ScalarFunction(fmt::format("g_{}", t), [t](double x) { return std::abs(t - x); },
                        saturating_identity(std::max(t, 1.0 - t)));
}

ScalarFunction trial_G(double t) {
  check_unit(t, "trial_G");
  const double slope = std::max(t, 1.0 - t);
  ScalarFunction big(
      fmt::format("G_{}", t),
      [t](double x) { return x <= t ? t * x - 0.5 * x * x : 0.5 * t * t + 0.5 * (x - t) * (x - t); },
      Lipschitz{slope});
  big.with_derivative([t](double x) { return std::abs(t - x); }, saturating_identity(slope));
  return big;
}

std::vector<ScalarFunction> corpus_standard() {
  using std::numbers::pi;
  std::vector<ScalarFunction> out;
  out.emplace_back("identity", [](double x) { return x; }, Lipschitz{1.0});
  out.back().with_derivative([](double) { return 1.0; }, zero_modulus());
  out.emplace_back("square", [](double x) { return x * x; }, Lipschitz{2.0});
  out.back().with_derivative([](double x) { return 2.0 * x; }, Lipschitz{2.0});
  out.push_back(trial_g(0.25));
  out.push_back(trial_g(0.5));
  out.push_back(trial_g(0.75));
  out.emplace_back("pow_0.25", [](double x) { return std::pow(x, 0.25); }, Hoelder{0.25, 1.0});
  out.emplace_back("pow_0.5", [](double x) { return std::pow(x, 0.5); }, Hoelder{0.5, 1.0});
  out.emplace_back("sin_pi", [](double x) { return std::sin(pi * x); }, Lipschitz{pi});
  out.back().with_derivative([](double x) { return pi * std::cos(pi * x); }, Lipschitz{pi * pi});
  out.emplace_back("sqrt", [](double x) { return std::sqrt(x); }, Hoelder{0.5, 1.0});
  return out;
}

std::vector<ScalarFunction> corpus_derivative() {
  std::vector<ScalarFunction> out;
  for (auto& f : corpus_standard()) {
    if (f.label() == "square" || f.label() == "sin_pi") out.push_back(f);
  }
  out.push_back(trial_G(0.5));
  return out;
}

std::vector<BivariateFunction> corpus_factorable() {
  using std::numbers::pi;
  std::vector<BivariateFunction> out;
  out.push_back({"x*y", [](double x, double y) { return x * y; },
                 Modulus2{[](double a, double b) { return a + b - a * b; }, {}, {}}});
  out.push_back({"x^2*y^2", [](double x, double y) { return x * x * y * y; },
                 Modulus2{[](double a, double b) { return 1.0 - (1.0 - a) * (1.0 - a) * (1.0 - b) * (1.0 - b); }, {}, {}}});
  out.push_back({"g_0.5(x)*1", [](double x, double) { return std::abs(0.5 - x); },
                 Modulus2{[](double a, double) { return std::min(a, 0.5); }, {0.5}, {}}});
  // ‖h‖ω_g(δ1) + ‖g‖ω_h(δ2) dominates the increments of g(x)h(y).
  out.push_back({"g_0.25(x)*g_0.75(y)", [](double x, double y) { return std::abs(0.25 - x) * std::abs(0.75 - y); },
                 Modulus2{[](double a, double b) { return 0.75 * std::min(a, 0.75) + 0.75 * std::min(b, 0.75); },
                          {0.75},
                          {0.75}}});
  out.push_back({"sin_pi(x)*y", [](double x, double y) { return std::sin(pi * x) * y; },
                 Modulus2{[](double a, double b) { return std::sin(pi * std::min(a, 0.5)) + b; }, {0.5}, {}}});
  return out;
}

ScalarFunction corpus_lookup(const std::string& label) {
  for (auto& f : corpus_standard()) {
    if (f.label() == label) return f;
  }
  if (label == "G_0.5") return trial_G(0.5);
  throw ConfigError(fmt::format("unknown corpus function '{}'", label));
}

// ---------------------------------------------------------------------------
// CSV input
// ---------------------------------------------------------------------------

namespace {

bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

std::vector<std::pair<double, double>> read_two_column_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open CSV file '{}'", path.string()));
  std::vector<std::pair<double, double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r" || line.front() == '#') continue;
    const auto comma = line.find(',');
    double a = 0.0;
    double b = 0.0;
    const bool ok = comma != std::string::npos && parse_double(std::string_view(line).substr(0, comma), a) &&
                    parse_double(std::string_view(line).substr(comma + 1), b);
    if (!ok) {
      if (!seen_data && rows.empty() && line_no == 1) continue;  // header
      throw ConfigError(fmt::format("{}:{}: expected two numeric columns", path.string(), line_no));
    }
    if (!rows.empty() && !(a > rows.back().first)) {
      throw ConfigError(fmt::format("{}:{}: first column must be strictly increasing", path.string(), line_no));
    }
    seen_data = true;
    rows.emplace_back(a, b);
  }
  if (rows.empty()) throw ConfigError(fmt::format("CSV file '{}' has no data rows", path.string()));
  return rows;
}

ModulusSpec load_tabulated_modulus(const std::filesystem::path& path) {
  Tabulated t;
  for (const auto& [d, w] : read_two_column_csv(path)) {
    if (d == 0.0) {
      if (w != 0.0) throw ConfigError("tabulated modulus must vanish at δ = 0");
      continue;
    }
    t.knots.emplace_back(d, w);
  }
  return ModulusSpec(std::move(t));
}

ScalarFunction load_sampled_function(const std::filesystem::path& path) {
  auto rows = read_two_column_csv(path);
  if (rows.size() < 2 || std::abs(rows.front().first) > 1e-12 || std::abs(rows.back().first - 1.0) > 1e-12) {
    throw ConfigError(fmt::format("sampled function '{}' must cover [0, 1] with x from 0 to 1", path.string()));
  }
  rows.front().first = 0.0;
  rows.back().first = 1.0;
  auto shared = std::make_shared<const std::vector<std::pair<double, double>>>(std::move(rows));
  auto eval = [shared](double x) {
    const auto& r = *shared;
    auto it = std::upper_bound(r.begin(), r.end(), x, [](double v, const auto& p) { return v < p.first; });
    if (it == r.begin()) return r.front().second;
    if (it == r.end()) return r.back().second;
    const auto& lo = *std::prev(it);
    const double w = (x - lo.first) / (it->first - lo.first);
    return lo.second + w * (it->second - lo.second);
  };
  return ScalarFunction(path.stem().string(), eval);
}

}  // namespace bernaudit
