#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "bernaudit/bounds.hpp"

namespace bernaudit::cli {

enum class Command { bound, uniform, derivative, bivariate, sharpness, subgaussian };
enum class OutputFormat { csv, json };
enum class Audit { cosh, moment, tail, bk, density, all };

/// Everything one invocation needs; filled by the argument parser or directly
/// by callers that drive sweeps programmatically.
struct SweepConfig {
  Command command = Command::bound;
  /// Corpus name or label ("standard", "derivative", "factorable", "g_0.5", ...).
  std::string corpus;
  /// Sampled function CSV (x, f(x)); used instead of `corpus` when set.
  std::filesystem::path function_csv;
  /// Optional tabulated modulus CSV (δ, ω) attached to `function_csv`.
  std::filesystem::path modulus_csv;
  std::vector<Degree> n_set;
  std::vector<Degree> n2_set;
  std::vector<double> x_grid;
  std::vector<double> y_grid;
  OutputFormat output_format = OutputFormat::csv;
  /// Empty: <output dir>/<command>.<ext>; "-": standard output.
  std::filesystem::path output_path;
  QuadratureConfig quadrature;
  bool fail_on_violation = false;
  EmpiricalPolicy empirical;

  // sharpness
  double t = 0.5;
  double y = 0.3;

  // subgaussian
  Audit audit = Audit::all;
  std::vector<int> binomial_n;
  std::vector<double> p_grid;
  std::vector<double> lambda_grid;
  std::vector<double> u_grid;
  int m_max = 10;
  bool dump_margins = false;
  std::vector<double> alphas;

  /// Throws ConfigError on an empty n_set or grid points outside [0, 1].
  void validate() const;
};

/// Fills every empty grid of `cfg` with the documented default for its command.
void apply_defaults(SweepConfig& cfg);

struct RunResult {
  int exit_code = 0;
  std::string report;
  std::size_t cells = 0;
  std::size_t violations = 0;
  std::string summary;
};

/// Runs the sweep and renders the report text without touching the filesystem.
RunResult execute(const SweepConfig& cfg);

/// execute() plus writing the report file; returns the exit status
/// (0 clean or violations tolerated, 1 violations with fail_on_violation,
/// 2 configuration error).
int run(const SweepConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command-line entry point.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "a..b" doubles from a to b, "a:b" steps by one, otherwise a comma list;
/// "inf" is accepted as an element.
std::vector<Degree> parse_degree_set(const std::string& spec);
std::vector<int> parse_int_set(const std::string& spec);
/// Comma list, or "lo:hi:count" for an evenly spaced grid.
std::vector<double> parse_real_list(const std::string& spec);
/// k/(resolution+1) for k = 1..resolution.
std::vector<double> interior_grid(int resolution);

/// Directory named by BERNAUDIT_OUTPUT_DIR, or the working directory.
std::filesystem::path default_output_dir();
std::string command_name(Command c);

}  // namespace bernaudit::cli
