#include "bernaudit/report.hpp"

#include <cmath>

#include <fmt/format.h>

namespace bernaudit {

std::string report_schema_version() { return "bernaudit-report/1"; }

std::string tool_version() { return BERNAUDIT_VERSION; }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

void write_csv_header(std::string& out, const ReportHeader& h) {
  out += fmt::format("# schema: {}\n", report_schema_version());
  out += fmt::format("# tool_version: {}\n", tool_version());
  out += fmt::format("# command: {}\n", h.command);
  out += fmt::format("# quadrature: truncation_z={} rel_tol={} max_subdivisions={}\n",
                     format_number(h.quadrature.truncation_z), format_number(h.quadrature.rel_tol),
                     h.quadrature.max_subdivisions);
  for (const auto& [k, v] : h.grids) out += fmt::format("# grid.{}: {}\n", k, v);
  for (const auto& [k, v] : h.summary) out += fmt::format("# summary.{}: {}\n", k, v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string optional_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string pass_field(const BoundRecord& r) {
  if (!r.converged) return "nc";
  return r.pass ? "true" : "false";
}

}  // namespace

Json header_json(const ReportHeader& h) {
  Json j;
  j["schema"] = report_schema_version();
  j["tool_version"] = tool_version();
  j["command"] = h.command;
  j["quadrature"] = {{"truncation_z", h.quadrature.truncation_z},
                     {"rel_tol", h.quadrature.rel_tol},
                     {"max_subdivisions", h.quadrature.max_subdivisions}};
  Json grids = Json::object();
  for (const auto& [k, v] : h.grids) grids[k] = v;
  j["grids"] = grids;
  Json summary = Json::object();
  for (const auto& [k, v] : h.summary) summary[k] = v;
  j["summary"] = summary;
  return j;
}

Json to_json(const BoundRecord& r) {
  Json j;
  j["label"] = r.label;
  j["x"] = r.x;
  j["y"] = r.y ? Json(*r.y) : Json(nullptr);
  j["n1"] = r.n1.to_string();
  j["n2"] = r.n2 ? Json(r.n2->to_string()) : Json(nullptr);
  j["delta"] = number_or_null(r.delta);
  j["j"] = number_or_null(r.j);
  j["bound"] = number_or_null(r.bound);
  j["ratio"] = r.ratio ? number_or_null(*r.ratio) : Json(nullptr);
  j["pass"] = r.pass;
  j["converged"] = r.converged;
  return j;
}

std::string bound_records_csv(const ReportHeader& h, std::span<const BoundRecord> records) {
  std::string out;
  write_csv_header(out, h);
  out += "label,x,y,n1,n2,delta,j,bound,ratio,pass\n";
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", csv_field(r.label), format_number(r.x),
                       optional_number(r.y), r.n1.to_string(), r.n2 ? r.n2->to_string() : std::string(),
                       format_number(r.delta), format_number(r.j), format_number(r.bound),
                       r.ratio ? format_number(*r.ratio) : std::string("undef"), pass_field(r));
  }
  return out;
}

Json bound_records_json(const ReportHeader& h, std::span<const BoundRecord> records) {
  Json j;
  j["header"] = header_json(h);
  Json rows = Json::array();
  for (const auto& r : records) rows.push_back(to_json(r));
  j["records"] = rows;
  return j;
}

Json to_json(const RatioTrace& t) {
  Json j;
  j["label"] = t.label;
  j["x"] = t.x;
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"n", r.n},
                    {"delta", number_or_null(r.delta)},
                    {"j", number_or_null(r.j)},
                    {"ratio", r.ratio ? number_or_null(*r.ratio) : Json(nullptr)},
                    {"asymptote", r.asymptote ? Json(*r.asymptote) : Json(nullptr)},
                    {"residual_times_n", r.residual_times_n ? Json(*r.residual_times_n) : Json(nullptr)}});
  }
  j["rows"] = rows;
  j["extrapolated_limit"] = t.extrapolated_limit ? number_or_null(*t.extrapolated_limit) : Json(nullptr);
  Json metrics = Json::object();
  for (const auto& [k, v] : t.metrics) metrics[k] = number_or_null(v);
  j["metrics"] = metrics;
  return j;
}

std::string traces_csv(const ReportHeader& h, std::span<const RatioTrace> traces) {
  std::string out;
  write_csv_header(out, h);
  for (const auto& t : traces) {
    out += fmt::format("# trace.{}@{}: extrapolated_limit={}", t.label, format_number(t.x),
                       optional_number(t.extrapolated_limit));
    for (const auto& [k, v] : t.metrics) out += fmt::format(" {}={}", k, format_number(v));
    out += '\n';
  }
  out += "label,x,n,delta,j,ratio,asymptote,residual_times_n\n";
  for (const auto& t : traces) {
    for (const auto& r : t.rows) {
      out += fmt::format("{},{},{},{},{},{},{},{}\n", csv_field(t.label), format_number(t.x), r.n,
                         format_number(r.delta), format_number(r.j),
                         r.ratio ? format_number(*r.ratio) : std::string("undef"), optional_number(r.asymptote),
                         optional_number(r.residual_times_n));
    }
  }
  return out;
}

Json traces_json(const ReportHeader& h, std::span<const RatioTrace> traces) {
  Json j;
  j["header"] = header_json(h);
  Json arr = Json::array();
  for (const auto& t : traces) arr.push_back(to_json(t));
  j["traces"] = arr;
  return j;
}

namespace {

Json cell_json(const AuditCell& c) {
  Json params = Json::object();
  for (const auto& [k, v] : c.parameters) params[k] = v;
  return {{"parameters", params},
          {"lhs", number_or_null(c.lhs)},
          {"rhs", number_or_null(c.rhs)},
          {"margin", number_or_null(c.margin)}};
}

std::string parameters_text(const AuditCell& c) {
  std::string s;
  for (const auto& [k, v] : c.parameters) {
    if (!s.empty()) s += ' ';
    s += fmt::format("{}={}", k, format_number(v));
  }
  return s;
}

}  // namespace

Json to_json(const ViolationReport& r, bool include_margins) {
  Json j;
  j["inequality_id"] = r.inequality_id;
  Json grid = Json::object();
  for (const auto& axis : r.grid) grid[axis.name] = axis.values;
  j["grid"] = grid;
  j["cells_total"] = r.cells_total;
  j["cells_violating"] = r.cells_violating;
  j["worst"] = r.cells_total > 0 ? cell_json(r.worst) : Json(nullptr);
  j["tolerance"] = r.tolerance;
  if (include_margins) {
    Json cells = Json::array();
    for (const auto& c : r.all_margins) cells.push_back(cell_json(c));
    j["all_margins"] = cells;
  } else {
    j["all_margins"] = nullptr;
  }
  Json meta = Json::object();
  for (const auto& [k, v] : r.metadata) meta[k] = v;
  j["metadata"] = meta;
  return j;
}

Json violation_reports_json(const ReportHeader& h, std::span<const ViolationReport> reports, bool include_margins) {
  Json j;
  j["header"] = header_json(h);
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(to_json(r, include_margins));
  j["reports"] = arr;
  return j;
}

std::string violation_reports_csv(const ReportHeader& h, std::span<const ViolationReport> reports) {
  std::string out;
  write_csv_header(out, h);
  out += "inequality_id,cells_total,cells_violating,worst_parameters,worst_lhs,worst_rhs,worst_margin\n";
  for (const auto& r : reports) {
    out += fmt::format("{},{},{},{},{},{},{}\n", csv_field(r.inequality_id), r.cells_total, r.cells_violating,
                       csv_field(parameters_text(r.worst)), format_number(r.worst.lhs), format_number(r.worst.rhs),
                       format_number(r.worst.margin));
  }
  return out;
}

}  // namespace bernaudit
