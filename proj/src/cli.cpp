#include "bernaudit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <tuple>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "bernaudit/report.hpp"
#include "bernaudit/sharpness.hpp"
#include "bernaudit/subgaussian.hpp"

namespace bernaudit::cli {

// ---------------------------------------------------------------------------
// Parsing helpers
// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

long parse_long(const std::string& s) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("expected an integer, got '{}'", s));
  }
  if (used != s.size()) throw ConfigError(fmt::format("expected an integer, got '{}'", s));
  return v;
}

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("expected a number, got '{}'", s));
  }
  if (used != s.size() || !std::isfinite(v)) throw ConfigError(fmt::format("expected a finite number, got '{}'", s));
  return v;
}

}  // namespace

std::vector<int> parse_int_set(const std::string& spec) {
  std::vector<int> out;
  const std::string s = trim(spec);
  if (s.empty()) throw ConfigError("empty integer set");
  if (auto pos = s.find(".."); pos != std::string::npos) {
    const long lo = parse_long(s.substr(0, pos));
    const long hi = parse_long(s.substr(pos + 2));
    if (lo < 1 || hi < lo) throw ConfigError(fmt::format("bad doubling range '{}'", spec));
    for (long v = lo; v <= hi; v *= 2) out.push_back(static_cast<int>(v));
    return out;
  }
  if (auto pos = s.find(':'); pos != std::string::npos) {
    const long lo = parse_long(s.substr(0, pos));
    const long hi = parse_long(s.substr(pos + 1));
    if (hi < lo || hi - lo > 1000000) throw ConfigError(fmt::format("bad integer range '{}'", spec));
    for (long v = lo; v <= hi; ++v) out.push_back(static_cast<int>(v));
    return out;
  }
  for (const auto& part : split(s, ',')) out.push_back(static_cast<int>(parse_long(part)));
  return out;
}

std::vector<Degree> parse_degree_set(const std::string& spec) {
  std::vector<Degree> out;
  const std::string s = trim(spec);
  if (s.find("..") != std::string::npos || s.find(':') != std::string::npos) {
    for (int v : parse_int_set(s)) out.emplace_back(v);
    return out;
  }
  for (const auto& part : split(s, ',')) {
    if (part == "inf" || part == "INF") {
      out.push_back(Degree::inf());
    } else {
      const long v = parse_long(part);
      if (v < 1) throw ConfigError(fmt::format("degree must be >= 1, got {}", v));
      out.emplace_back(static_cast<int>(v));
    }
  }
  return out;
}

std::vector<double> parse_real_list(const std::string& spec) {
  const std::string s = trim(spec);
  const auto parts = split(s, ':');
  if (parts.size() == 3) {
    const long count = parse_long(parts[2]);
    if (count < 1 || count > 1000000) throw ConfigError(fmt::format("bad grid count in '{}'", spec));
    return linspace(parse_real(parts[0]), parse_real(parts[1]), static_cast<int>(count));
  }
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_real(part));
  return out;
}

std::vector<double> interior_grid(int resolution) {
  if (resolution < 1) throw ConfigError("grid resolution must be >= 1");
  std::vector<double> out;
  for (int k = 1; k <= resolution; ++k) out.push_back(static_cast<double>(k) / (resolution + 1));
  return out;
}

std::filesystem::path default_output_dir() {
  if (const char* dir = std::getenv("BERNAUDIT_OUTPUT_DIR"); dir && *dir) return dir;
  return ".";
}

std::string command_name(Command c) {
  switch (c) {
    case Command::bound:
      return "bound";
    case Command::uniform:
      return "uniform";
    case Command::derivative:
      return "derivative";
    case Command::bivariate:
      return "bivariate";
    case Command::sharpness:
      return "sharpness";
    case Command::subgaussian:
      break;
  }
  return "subgaussian";
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

void SweepConfig::validate() const {
  quadrature.validate();
  auto unit = [](const std::vector<double>& grid, const char* name) {
    for (double v : grid) {
      if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(fmt::format("{} point {} lies outside [0,1]", name, v));
    }
  };
  unit(x_grid, "x-grid");
  unit(y_grid, "y-grid");
  if (command != Command::subgaussian && n_set.empty()) throw ConfigError("n set is empty");
  for (const Degree& d : n_set) {
    if (d.is_inf() && command != Command::bivariate) throw ConfigError("INF degree is only meaningful for bivariate sweeps");
  }
  if (command == Command::derivative) {
    for (const Degree& d : n_set) {
      if (d.value() < 2) throw ConfigError("derivative sweeps need n >= 2");
    }
  }
  if (command == Command::bivariate && n2_set.empty()) throw ConfigError("n2 set is empty");
  if (command == Command::subgaussian) {
    for (int n : binomial_n) {
      if (n < 1) throw ConfigError("binomial n must be >= 1");
    }
    for (double p : p_grid) {
      if (!(p > 0.0 && p < 1.0)) throw ConfigError(fmt::format("p = {} outside (0,1)", p));
    }
    if (m_max < 1 || m_max > 20) throw ConfigError("m-max must lie in [1, 20]");
    for (double a : alphas) {
      if (!(a > 0.0)) throw ConfigError("density alpha must be > 0");
    }
  }
}

void apply_defaults(SweepConfig& cfg) {
  auto degrees = [](const std::string& s) { return parse_degree_set(s); };
  switch (cfg.command) {
    case Command::bound:
    case Command::uniform:
      if (cfg.n_set.empty()) cfg.n_set = degrees("2..256");
      if (cfg.x_grid.empty()) cfg.x_grid = interior_grid(99);
      break;
    case Command::derivative:
      if (cfg.corpus.empty() && cfg.function_csv.empty()) cfg.corpus = "derivative";
      if (cfg.n_set.empty()) cfg.n_set = degrees("2..128");
      if (cfg.x_grid.empty()) cfg.x_grid = interior_grid(99);
      break;
    case Command::bivariate:
      if (cfg.corpus.empty()) cfg.corpus = "factorable";
      if (cfg.n_set.empty()) cfg.n_set = degrees("2..64");
      if (cfg.n2_set.empty()) cfg.n2_set = cfg.n_set;
      if (cfg.x_grid.empty()) cfg.x_grid = interior_grid(9);
      if (cfg.y_grid.empty()) cfg.y_grid = cfg.x_grid;
      break;
    case Command::sharpness:
      if (cfg.n_set.empty()) cfg.n_set = degrees("4..16384");
      if (cfg.x_grid.empty()) cfg.x_grid = {0.25, 0.5, 0.75};
      break;
    case Command::subgaussian:
      if (cfg.binomial_n.empty()) cfg.binomial_n = default_n_grid();
      if (cfg.p_grid.empty()) cfg.p_grid = default_p_grid();
      if (cfg.lambda_grid.empty()) cfg.lambda_grid = default_lambda_grid();
      if (cfg.u_grid.empty()) cfg.u_grid = linspace(0.0, 6.0, 61);
      if (cfg.alphas.empty()) cfg.alphas = {0.1, 0.5, 1.0, 2.0, 5.0};
      if (cfg.output_format == OutputFormat::csv && cfg.output_path.empty()) cfg.output_format = OutputFormat::json;
      break;
  }
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

namespace {

template <typename T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (const auto& e : v) {
    if (!s.empty()) s += ',';
    if constexpr (std::is_same_v<T, double>) {
      s += format_number(e);
    } else if constexpr (std::is_same_v<T, Degree>) {
      s += e.to_string();
    } else {
      s += fmt::format("{}", e);
    }
  }
  return s;
}

std::vector<ScalarFunction> select_functions(const SweepConfig& cfg) {
  if (!cfg.function_csv.empty()) {
    ScalarFunction f = load_sampled_function(cfg.function_csv);
    if (!cfg.modulus_csv.empty()) {
      f = ScalarFunction(f.label(), f.eval(), load_tabulated_modulus(cfg.modulus_csv));
    }
    return {f};
  }
  if (cfg.corpus.empty()) throw ConfigError("one of --corpus or --function-csv is required");
  if (cfg.corpus == "standard") return corpus_standard();
  if (cfg.corpus == "derivative") return corpus_derivative();
  return {corpus_lookup(cfg.corpus)};
}

std::vector<int> finite_degrees(const std::vector<Degree>& ds) {
  std::vector<int> out;
  for (const Degree& d : ds) out.push_back(d.value());
  return out;
}

struct Tally {
  std::size_t cells = 0;
  std::size_t violations = 0;
  std::size_t nonconverged = 0;
  std::optional<double> sup_ratio;
  std::string sup_cell;

  void add(const BoundRecord& r) {
    ++cells;
    if (!r.converged) ++nonconverged;
    else if (!r.pass) ++violations;
    const bool interior = r.x > 0.0 && r.x < 1.0 && (!r.y || (*r.y > 0.0 && *r.y < 1.0));
    if (interior && r.ratio && (!sup_ratio || *r.ratio > *sup_ratio)) {
      sup_ratio = r.ratio;
      sup_cell = fmt::format("{} x={}{} n1={}{}", r.label, format_number(r.x),
                             r.y ? fmt::format(" y={}", format_number(*r.y)) : std::string(), r.n1.to_string(),
                             r.n2 ? fmt::format(" n2={}", r.n2->to_string()) : std::string());
    }
  }

  void write(ReportHeader& h) const {
    h.summary.emplace_back("cells", std::to_string(cells));
    h.summary.emplace_back("violations", std::to_string(violations));
    h.summary.emplace_back("nonconverged", std::to_string(nonconverged));
    h.summary.emplace_back("sup_ratio_interior", sup_ratio ? format_number(*sup_ratio) : std::string("undef"));
    h.summary.emplace_back("sup_ratio_cell", sup_cell);
  }
};

void sort_records(std::vector<BoundRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const BoundRecord& a, const BoundRecord& b) {
    const double ay = a.y.value_or(-1.0);
    const double by = b.y.value_or(-1.0);
    const Degree an2 = a.n2.value_or(Degree(1));
    const Degree bn2 = b.n2.value_or(Degree(1));
    return std::tie(a.label, a.n1, a.x, ay, an2) < std::tie(b.label, b.n1, b.x, by, bn2);
  });
}

RunResult render_records(const SweepConfig& cfg, ReportHeader header, std::vector<BoundRecord> records) {
  sort_records(records);
  Tally tally;
  for (const auto& r : records) tally.add(r);
  tally.write(header);
  RunResult result;
  result.cells = tally.cells;
  result.violations = tally.violations;
  result.report = cfg.output_format == OutputFormat::csv ? bound_records_csv(header, records)
                                                         : bound_records_json(header, records).dump(2) + "\n";
  result.summary = fmt::format("{}: {} cells, {} violations, {} nonconverged, sup interior ratio {}",
                               header.command, tally.cells, tally.violations, tally.nonconverged,
                               tally.sup_ratio ? format_number(*tally.sup_ratio) : std::string("undef"));
  return result;
}

ReportHeader base_header(const SweepConfig& cfg) {
  ReportHeader h;
  h.command = command_name(cfg.command);
  h.quadrature = cfg.quadrature;
  return h;
}

RunResult run_bound(const SweepConfig& cfg) {
  ReportHeader h = base_header(cfg);
  const auto functions = select_functions(cfg);
  h.grids = {{"functions", std::to_string(functions.size())}, {"n", join(cfg.n_set)}, {"x", join(cfg.x_grid)}};
  std::vector<BoundRecord> records;
  for (const auto& f0 : functions) {
    const ScalarFunction f = f0.exact_modulus() ? f0 : f0.with_modulus_unchecked(resolve_modulus(f0, cfg.empirical));
    for (int n : finite_degrees(cfg.n_set)) {
      for (double x : cfg.x_grid) records.push_back(upper_bound(f, n, x, cfg.quadrature, cfg.empirical));
    }
  }
  if (!cfg.function_csv.empty() && cfg.modulus_csv.empty()) {
    h.grids.emplace_back("empirical_modulus_grid_step", format_number(cfg.empirical.grid_step));
  }
  return render_records(cfg, std::move(h), std::move(records));
}

RunResult run_uniform(const SweepConfig& cfg) {
  ReportHeader h = base_header(cfg);
  const auto functions = select_functions(cfg);
  h.grids = {{"n", join(cfg.n_set)}, {"x", join(cfg.x_grid)}};
  h.summary.emplace_back("columns", "delta = max over x of the error, x = its argmax, j = J_n at theta = 1/2, "
                                    "bound = 2*int omega(y/(2 sqrt n)) y exp(-y^2) dy; companion bound = 2*j");
  std::vector<BoundRecord> records;
  for (const auto& f0 : functions) {
    const ScalarFunction f = f0.exact_modulus() ? f0 : f0.with_modulus_unchecked(resolve_modulus(f0, cfg.empirical));
    const ModulusSpec& m = *f.exact_modulus();
    for (int n : finite_degrees(cfg.n_set)) {
      BoundRecord r;
      r.label = f.label();
      r.n1 = Degree(n);
      for (double x : cfg.x_grid) {
        const double d = error_exact(f, r.n1, x);
        if (d > r.delta || x == cfg.x_grid.front()) {
          r.delta = d;
          r.x = x;
        }
      }
      try {
        r.j = uniform_companion(m, n, cfg.quadrature) / 2.0;
        r.bound = uniform_bound(m, n, cfg.quadrature);
      } catch (const ConvergenceError& e) {
        r.j = e.estimate();
        r.converged = false;
      }
      finalize_record(r);
      records.push_back(r);
    }
  }
  return render_records(cfg, std::move(h), std::move(records));
}

RunResult run_derivative(const SweepConfig& cfg) {
  ReportHeader h = base_header(cfg);
  const auto functions = select_functions(cfg);
  h.grids = {{"n", join(cfg.n_set)}, {"x", join(cfg.x_grid)}};
  std::vector<BoundRecord> records;
  for (const auto& f0 : functions) {
    if (!f0.has_derivative()) throw ConfigError(fmt::format("function '{}' has no derivative attached", f0.label()));
    ScalarFunction f = f0;
    if (!f.derivative_modulus()) {
      f.with_derivative(f.derivative(), resolve_modulus(f.derivative_function(), cfg.empirical));
    }
    for (int n : finite_degrees(cfg.n_set)) {
      for (double x : cfg.x_grid) records.push_back(derivative_bound(f, n, x, cfg.quadrature, cfg.empirical));
    }
  }
  return render_records(cfg, std::move(h), std::move(records));
}

RunResult run_bivariate(const SweepConfig& cfg) {
  ReportHeader h = base_header(cfg);
  std::vector<BivariateFunction> functions;
  if (cfg.corpus == "factorable") {
    functions = corpus_factorable();
  } else {
    for (auto& f : corpus_factorable()) {
      if (f.label == cfg.corpus) functions.push_back(f);
    }
    if (functions.empty()) throw ConfigError(fmt::format("unknown bivariate corpus '{}'", cfg.corpus));
  }
  h.grids = {{"n1", join(cfg.n_set)}, {"n2", join(cfg.n2_set)}, {"x", join(cfg.x_grid)}, {"y", join(cfg.y_grid)}};
  std::vector<BoundRecord> records;
  for (const auto& f : functions) {
    for (const Degree& n1 : cfg.n_set) {
      for (const Degree& n2 : cfg.n2_set) {
        for (double x : cfg.x_grid) {
          for (double y : cfg.y_grid) records.push_back(bivariate_bound(f, n1, n2, x, y, cfg.quadrature));
        }
      }
    }
  }
  return render_records(cfg, std::move(h), std::move(records));
}

std::vector<HoelderComparison> hoelder_table(const QuadratureConfig& q) {
  std::vector<HoelderComparison> out;
  for (double alpha : {0.25, 0.5, 1.0}) {
    for (int n : {16, 256}) {
      for (double x : {0.1, 0.5, 0.9}) out.push_back(hoelder_comparison(alpha, 1.0, n, x, q));
    }
  }
  return out;
}

RunResult run_sharpness(const SweepConfig& cfg) {
  ReportHeader h = base_header(cfg);
  const auto ns = finite_degrees(cfg.n_set);
  h.grids = {{"n", join(ns)}, {"x", join(cfg.x_grid)}, {"t", format_number(cfg.t)}, {"y", format_number(cfg.y)}};

  std::vector<RatioTrace> traces;
  std::size_t violations = 0;
  std::size_t cells = 0;
  auto audit = [&](const RatioTrace& t, double upper) {
    for (const auto& row : t.rows) {
      ++cells;
      if (row.ratio && *row.ratio > upper + kPassTolerance) ++violations;
    }
  };
  std::vector<std::pair<std::string, std::string>> limits;
  for (double x : cfg.x_grid) {
    traces.push_back(ratio_trace(trial_g(x), x, ns, cfg.quadrature));
    const RatioTrace& t = traces.back();
    audit(t, 2.0);
    if (t.extrapolated_limit && *t.extrapolated_limit < 1.0 / std::numbers::pi - 1e-3) ++violations;
    limits.emplace_back(fmt::format("limit.{}", t.label),
                        t.extrapolated_limit ? format_number(*t.extrapolated_limit) : std::string("undef"));
  }
  std::vector<int> bojanic_ns;
  for (int n : ns) {
    if (n >= 16) bojanic_ns.push_back(n);
  }
  if (!bojanic_ns.empty()) traces.push_back(bojanic_residual_trace(0.5, bojanic_ns, cfg.quadrature));
  traces.push_back(bivariate_ratio_check(cfg.t, cfg.t, cfg.y, ns, cfg.quadrature));
  audit(traces.back(), 4.0);
  std::vector<int> derivative_ns;
  for (int n : ns) {
    if (n >= 2) derivative_ns.push_back(n);
  }
  traces.push_back(derivative_trial_check(cfg.t, cfg.t, derivative_ns, cfg.quadrature));

  const auto hoelder = hoelder_table(cfg.quadrature);
  h.summary.emplace_back("cells", std::to_string(cells));
  h.summary.emplace_back("violations", std::to_string(violations));
  h.summary.insert(h.summary.end(), limits.begin(), limits.end());
  RunResult result;
  result.cells = cells;
  result.violations = violations;
  if (cfg.output_format == OutputFormat::csv) {
    for (const auto& c : hoelder) {
      h.summary.emplace_back(
          fmt::format("hoelder.alpha={}.n={}.x={}", format_number(c.alpha), c.n, format_number(c.x)),
          fmt::format("quadrature_j={} closed_form_j={} derived_bound={} classic_hoelder={} classic_lipschitz={}",
                      format_number(c.quadrature_j), format_number(c.closed_form_j), format_number(c.derived_bound),
                      format_number(c.classic_hoelder),
                      c.classic_lipschitz ? format_number(*c.classic_lipschitz) : std::string()));
    }
    result.report = traces_csv(h, traces);
  } else {
    Json j = traces_json(h, traces);
    Json table = Json::array();
    for (const auto& c : hoelder) {
      table.push_back({{"alpha", c.alpha},
                       {"H", c.h},
                       {"n", c.n},
                       {"x", c.x},
                       {"quadrature_j", c.quadrature_j},
                       {"closed_form_j", c.closed_form_j},
                       {"derived_bound", c.derived_bound},
                       {"classic_hoelder", c.classic_hoelder},
                       {"classic_lipschitz", c.classic_lipschitz ? Json(*c.classic_lipschitz) : Json(nullptr)}});
    }
    j["hoelder_comparison"] = table;
    result.report = j.dump(2) + "\n";
  }
  result.summary = fmt::format("sharpness: {} traces, {} ratio cells, {} violations", traces.size(), cells, violations);
  return result;
}

RunResult run_subgaussian(const SweepConfig& cfg) {
  ReportHeader h = base_header(cfg);
  h.grids = {{"n", join(cfg.binomial_n)},
             {"p", join(cfg.p_grid)},
             {"lambda", fmt::format("{} points on [{}, {}]", cfg.lambda_grid.size(),
                                    format_number(cfg.lambda_grid.front()), format_number(cfg.lambda_grid.back()))},
             {"u", join(cfg.u_grid)},
             {"m_max", std::to_string(cfg.m_max)},
             {"alpha", join(cfg.alphas)}};
  const bool all = cfg.audit == Audit::all;
  std::vector<ViolationReport> reports;
  if (all || cfg.audit == Audit::cosh) reports.push_back(cosh_mgf_audit(cfg.binomial_n, cfg.p_grid, cfg.lambda_grid));
  if (all || cfg.audit == Audit::moment) reports.push_back(moment_audit(cfg.binomial_n, cfg.p_grid, cfg.m_max));
  if (all || cfg.audit == Audit::tail) reports.push_back(tail_bound_audit(cfg.binomial_n, cfg.p_grid, cfg.u_grid));
  if (all || cfg.audit == Audit::bk) {
    std::vector<double> ps;
    for (double p : cfg.p_grid) {
      if (p >= 0.5) ps.push_back(p);
    }
    std::vector<double> lambdas;
    for (double l : cfg.lambda_grid) {
      if (l >= 0.0) lambdas.push_back(l);
    }
    reports.push_back(bk_audit(ps, lambdas));
  }
  if (all || cfg.audit == Audit::density) {
    ViolationReport merged;
    for (double a : cfg.alphas) {
      const auto stats = poly_density_stats(PolyDensity(a), cfg.lambda_grid);
      if (merged.cells_total == 0) {
        merged.inequality_id = stats.ssub_margin_report.inequality_id;
        merged.metadata = stats.ssub_margin_report.metadata;
      }
      merged.absorb(stats.ssub_margin_report);
      merged.metadata.emplace_back(fmt::format("alpha={}", format_number(a)),
                                   fmt::format("normalization={} variance={} variance_closed_form={} excess_kurtosis={}",
                                               format_number(stats.normalization), format_number(stats.variance),
                                               format_number(stats.variance_closed_form),
                                               format_number(stats.excess_kurtosis)));
    }
    merged.grid = {{"alpha", cfg.alphas}, {"lambda", cfg.lambda_grid}};
    merged.metadata.emplace_back("excess_kurtosis_root", format_number(excess_kurtosis_root()));
    reports.push_back(std::move(merged));
  }

  RunResult result;
  for (const auto& r : reports) {
    result.cells += r.cells_total;
    result.violations += r.cells_violating;
  }
  h.summary.emplace_back("cells", std::to_string(result.cells));
  h.summary.emplace_back("violations", std::to_string(result.violations));
  result.report = cfg.output_format == OutputFormat::csv
                      ? violation_reports_csv(h, reports)
                      : violation_reports_json(h, reports, cfg.dump_margins).dump(2) + "\n";
  result.summary = fmt::format("subgaussian: {} reports, {} cells, {} violating cells", reports.size(), result.cells,
                               result.violations);
  return result;
}

}  // namespace

RunResult execute(const SweepConfig& cfg) {
  cfg.validate();
  RunResult r;
  switch (cfg.command) {
    case Command::bound:
      r = run_bound(cfg);
      break;
    case Command::uniform:
      r = run_uniform(cfg);
      break;
    case Command::derivative:
      r = run_derivative(cfg);
      break;
    case Command::bivariate:
      r = run_bivariate(cfg);
      break;
    case Command::sharpness:
      r = run_sharpness(cfg);
      break;
    case Command::subgaussian:
      r = run_subgaussian(cfg);
      break;
  }
  r.exit_code = (r.violations > 0 && cfg.fail_on_violation) ? 1 : 0;
  return r;
}

int run(const SweepConfig& cfg, std::ostream& out, std::ostream& err) {
  RunResult result;
  try {
    result = execute(cfg);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  const std::string ext = cfg.output_format == OutputFormat::csv ? "csv" : "json";
  if (cfg.output_path == "-") {
    out << result.report;
  } else {
    const auto path = cfg.output_path.empty() ? default_output_dir() / (command_name(cfg.command) + "." + ext)
                                              : cfg.output_path;
    std::ofstream file(path, std::ios::binary);
    file << result.report;
    if (!file) {
      err << "error: cannot write report to '" << path.string() << "'\n";
      return 2;
    }
    out << result.summary << " -> " << path.string() << '\n';
  }
  return result.exit_code;
}

// ---------------------------------------------------------------------------
// Command line
// ---------------------------------------------------------------------------

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bernstein approximation error bounds: sweeps, audits and sharpness experiments", "bernaudit"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  SweepConfig cfg;
  std::string format = "csv";
  std::string output;
  std::string n_spec;
  std::string n2_spec;
  std::string x_list;
  std::string y_list;
  std::string corpus;
  std::string function_csv;
  std::string modulus_csv;
  std::string p_list;
  std::string lambda_spec;
  std::string u_spec;
  std::string alpha_list;
  std::string audit = "all";
  int x_resolution = 0;
  bool p_default = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", output, "Report path ('-' for stdout); default <BERNAUDIT_OUTPUT_DIR>/<command>.<ext>");
    sub->add_flag("--fail-on-violation", cfg.fail_on_violation, "Exit 1 when any cell violates its inequality");
    sub->add_option("--rel-tol", cfg.quadrature.rel_tol, "Quadrature relative tolerance");
    sub->add_option("--truncation-z", cfg.quadrature.truncation_z, "Upper limit of the half-line integrals");
    sub->add_option("--max-subdivisions", cfg.quadrature.max_subdivisions, "Quadrature interval budget");
  };
  auto add_function_source = [&](CLI::App* sub) {
    sub->add_option("--corpus", corpus, "Corpus name (standard, derivative) or a function label");
    sub->add_option("--function-csv", function_csv, "Sampled function CSV with columns x,f(x)");
    sub->add_option("--modulus-csv", modulus_csv, "Tabulated modulus CSV with columns delta,omega");
    sub->add_option("--empirical-step", cfg.empirical.grid_step, "Grid step of empirical moduli");
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--n", n_spec, "Degrees: a..b (doubling), a:b (all), or a comma list");
    sub->add_option("--x-grid", x_resolution, "Number of interior points k/(N+1)");
    sub->add_option("--x", x_list, "Explicit x list (comma list or lo:hi:count)");
  };

  std::map<CLI::App*, Command> commands;
  auto* bound = app.add_subcommand("bound", "Error against 2*J_n over a corpus and grid");
  add_common(bound);
  add_function_source(bound);
  add_grid(bound);
  commands[bound] = Command::bound;

  auto* uniform = app.add_subcommand("uniform", "x-free bound against the worst error over the grid");
  add_common(uniform);
  add_function_source(uniform);
  add_grid(uniform);
  commands[uniform] = Command::uniform;

  auto* derivative = app.add_subcommand("derivative", "Derivative error against (3/2)w'(1/n) + 2 J_{n-1}");
  add_common(derivative);
  add_function_source(derivative);
  add_grid(derivative);
  commands[derivative] = Command::derivative;

  auto* bivariate = app.add_subcommand("bivariate", "Tensor-product error against 4*J_{n1,n2}");
  add_common(bivariate);
  bivariate->add_option("--corpus", corpus, "factorable, or one function label");
  bivariate->add_option("--n1", n_spec, "First-coordinate degrees (inf allowed)");
  bivariate->add_option("--n2", n2_spec, "Second-coordinate degrees (inf allowed)");
  bivariate->add_option("--grid", x_resolution, "Interior points per coordinate");
  bivariate->add_option("--x", x_list, "Explicit x list");
  bivariate->add_option("--y", y_list, "Explicit y list");
  commands[bivariate] = Command::bivariate;

  auto* sharpness = app.add_subcommand("sharpness", "Ratio traces, asymptote residuals and Hoelder constants");
  add_common(sharpness);
  sharpness->add_option("--n", n_spec, "Degrees for the traces");
  sharpness->add_option("--x", x_list, "Trial points for g_x");
  sharpness->add_option("--t", cfg.t, "Trial parameter of the bivariate and derivative experiments");
  sharpness->add_option("--y", cfg.y, "Second coordinate of the bivariate experiment");
  commands[sharpness] = Command::sharpness;

  auto* subgaussian = app.add_subcommand("subgaussian", "Binomial moment, MGF and tail audits");
  add_common(subgaussian);
  subgaussian->add_option("--audit", audit, "Which audit to run")
      ->check(CLI::IsMember({"cosh", "moment", "tail", "bk", "density", "all"}));
  subgaussian->add_option("--n", n_spec, "Binomial n values");
  subgaussian->add_option("--p", p_list, "p values (comma list)");
  subgaussian->add_flag("--p-default-grid", p_default, "Use the default p grid (0.01 ... 0.99)");
  subgaussian->add_option("--lambda", lambda_spec, "lambda grid (lo:hi:count or list)");
  subgaussian->add_option("--u", u_spec, "u grid for the tail audit");
  subgaussian->add_option("--m-max", cfg.m_max, "Highest moment order (<= 20)");
  subgaussian->add_option("--alpha", alpha_list, "Density exponents");
  subgaussian->add_flag("--dump-margins", cfg.dump_margins, "Include every cell in the JSON report");
  commands[subgaussian] = Command::subgaussian;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    for (const auto& [sub, command] : commands) {
      if (sub->parsed()) cfg.command = command;
    }
    cfg.output_format = format == "json" ? OutputFormat::json : OutputFormat::csv;
    const bool format_given = app.get_subcommands().front()->count("--format") > 0;
    if (!output.empty()) cfg.output_path = output;
    cfg.corpus = corpus;
    cfg.function_csv = function_csv;
    cfg.modulus_csv = modulus_csv;
    if (cfg.command == Command::bound || cfg.command == Command::uniform) {
      if (corpus.empty() == function_csv.empty()) {
        throw ConfigError("exactly one of --corpus or --function-csv is required");
      }
    }
    if (cfg.command == Command::subgaussian) {
      if (!n_spec.empty()) cfg.binomial_n = parse_int_set(n_spec);
      if (!p_list.empty() && p_default) throw ConfigError("--p and --p-default-grid are mutually exclusive");
      if (!p_list.empty()) cfg.p_grid = parse_real_list(p_list);
      if (!lambda_spec.empty()) cfg.lambda_grid = parse_real_list(lambda_spec);
      if (!u_spec.empty()) cfg.u_grid = parse_real_list(u_spec);
      if (!alpha_list.empty()) cfg.alphas = parse_real_list(alpha_list);
      cfg.audit = audit == "cosh" ? Audit::cosh
                  : audit == "moment" ? Audit::moment
                  : audit == "tail"   ? Audit::tail
                  : audit == "bk"     ? Audit::bk
                  : audit == "density" ? Audit::density
                                       : Audit::all;
      if (!format_given) cfg.output_format = OutputFormat::json;
    } else {
      if (!n_spec.empty()) cfg.n_set = parse_degree_set(n_spec);
      if (!n2_spec.empty()) cfg.n2_set = parse_degree_set(n2_spec);
      if (!x_list.empty()) cfg.x_grid = parse_real_list(x_list);
      if (!y_list.empty()) cfg.y_grid = parse_real_list(y_list);
      if (x_resolution > 0 && x_list.empty()) cfg.x_grid = interior_grid(x_resolution);
      if (cfg.command == Command::bivariate && x_resolution > 0 && y_list.empty()) cfg.y_grid = interior_grid(x_resolution);
    }
    apply_defaults(cfg);
    cfg.validate();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n\n" << app.get_subcommands().front()->help();
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n\n" << app.get_subcommands().front()->help();
    return 2;
  }
  return run(cfg, out, err);
}

}  // namespace bernaudit::cli
