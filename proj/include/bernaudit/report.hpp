#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bernaudit/bounds.hpp"
#include "bernaudit/sharpness.hpp"
#include "bernaudit/subgaussian.hpp"

namespace bernaudit {

using Json = nlohmann::ordered_json;

/// Fixed identifier of the report layout, embedded in every header.
std::string report_schema_version();
std::string tool_version();

/// Metadata written at the top of every report.
struct ReportHeader {
  std::string command;
  QuadratureConfig quadrature;
  std::vector<std::pair<std::string, std::string>> grids;
  std::vector<std::pair<std::string, std::string>> summary;
};

/// Shortest round-trip decimal form; "nan"/"inf" for non-finite values.
std::string format_number(double v);

Json header_json(const ReportHeader& h);

// BoundRecord streams. CSV columns: label,x,y,n1,n2,delta,j,bound,ratio,pass.
std::string bound_records_csv(const ReportHeader& h, std::span<const BoundRecord> records);
Json bound_records_json(const ReportHeader& h, std::span<const BoundRecord> records);
Json to_json(const BoundRecord& r);

// Ratio traces. CSV columns: label,x,n,delta,j,ratio,asymptote,residual_times_n.
std::string traces_csv(const ReportHeader& h, std::span<const RatioTrace> traces);
Json traces_json(const ReportHeader& h, std::span<const RatioTrace> traces);
Json to_json(const RatioTrace& t);

// Violation reports; per-cell margins only when requested.
Json to_json(const ViolationReport& r, bool include_margins);
Json violation_reports_json(const ReportHeader& h, std::span<const ViolationReport> reports, bool include_margins);
/// One summary row per report: inequality_id,cells_total,cells_violating,
/// worst_parameters,worst_lhs,worst_rhs,worst_margin.
std::string violation_reports_csv(const ReportHeader& h, std::span<const ViolationReport> reports);

}  // namespace bernaudit
