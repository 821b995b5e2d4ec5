#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bernaudit/cli.hpp"
#include "bernaudit/report.hpp"

using namespace bernaudit;
using namespace bernaudit::cli;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  std::vector<const char*> argv{"bernaudit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("set parsing") {
    const auto d = parse_degree_set("2..256");
    REQUIRE(d.size() == 8);
    CHECK(d.front() == Degree(2));
    CHECK(d.back() == Degree(256));
    CHECK(parse_degree_set("2:5").size() == 4);
    const auto mixed = parse_degree_set("3, 7, inf");
    CHECK(mixed.back().is_inf());
    CHECK(parse_int_set("1..256").size() == 9);
    CHECK(parse_real_list("0:1:5") == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(parse_real_list("0.1,0.2") == std::vector<double>{0.1, 0.2});
    const auto g = interior_grid(99);
    CHECK(g.size() == 99);
    CHECK(g.front() == 0.01);
    CHECK(g.back() == 0.99);
    CHECK_THROWS_AS(parse_degree_set("0"), ConfigError);
    CHECK_THROWS_AS(parse_degree_set("abc"), ConfigError);
    CHECK_THROWS_AS(parse_real_list("1,x"), ConfigError);
  }

  TEST_CASE("config validation") {
    SweepConfig cfg;
    cfg.corpus = "square";
    cfg.x_grid = {0.5, 1.2};
    cfg.n_set = {Degree(2)};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.x_grid = {0.5};
    cfg.n_set.clear();
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }

  TEST_CASE("schema version") {
    CHECK_FALSE(report_schema_version().empty());
    CHECK(report_schema_version() == report_schema_version());
  }

  TEST_CASE("bound sweep to stdout") {
    const auto r = invoke({"bound", "--corpus", "g_0.5", "--n", "100", "--x", "0,0.5", "--output", "-"});
    CHECK(r.code == 0);
    CHECK(r.out.find("# schema: " + report_schema_version()) != std::string::npos);
    CHECK(r.out.find("label,x,y,n1,n2,delta,j,bound,ratio,pass\n") != std::string::npos);
    CHECK(r.out.find("g_0.5,0,,100,,0,0,0,undef,true\n") != std::string::npos);
    CHECK(r.out.find("g_0.5,0.5,,100,,0.03979461869358") != std::string::npos);
  }

  TEST_CASE("json header carries schema, version, quadrature and grids") {
    const auto r = invoke({"bound", "--corpus", "square", "--n", "4", "--x-grid", "3", "--format", "json", "--output", "-"});
    REQUIRE(r.code == 0);
    const auto j = Json::parse(r.out);
    CHECK(j["header"]["schema"] == report_schema_version());
    CHECK(j["header"]["tool_version"] == tool_version());
    CHECK(j["header"].contains("quadrature"));
    CHECK(j["header"].contains("grids"));
    CHECK(j["records"].size() == 3);
  }

  TEST_CASE("usage errors exit with 2") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"bound"}).code == 2);
    CHECK(invoke({"bound", "--corpus", "square", "--x", "1.5"}).code == 2);
    CHECK(invoke({"bound", "--corpus", "unknown_fn", "--output", "-"}).code == 2);
    CHECK(invoke({"bound", "--function-csv", "/nonexistent.csv", "--output", "-"}).code == 2);
    CHECK(invoke({"nosuchcommand"}).code == 2);
    const auto r = invoke({"bound"});
    CHECK(r.err.find("--corpus") != std::string::npos);
    CHECK(invoke({"--help"}).code == 0);
  }

  TEST_CASE("violations drive the exit status only with --fail-on-violation") {
    const std::vector<std::string> base{"subgaussian", "--audit", "cosh", "--n", "1..256", "--p-default-grid", "--output", "-"};
    const auto tolerant = invoke(base);
    CHECK(tolerant.code == 0);
    const auto j = Json::parse(tolerant.out);
    CHECK(j["header"]["schema"] == report_schema_version());
    CHECK(j["reports"][0]["cells_violating"].get<int>() > 0);
    auto strict = base;
    strict.push_back("--fail-on-violation");
    CHECK(invoke(strict).code == 1);
    CHECK(invoke({"bound", "--corpus", "square", "--n", "2..8", "--x-grid", "5", "--fail-on-violation", "--output", "-"})
              .code == 0);
  }

  TEST_CASE("sampled function with and without a modulus file") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto fn = dir / "ba_cli_fn.csv";
    const auto mod = dir / "ba_cli_mod.csv";
    {
      std::ofstream f(fn);
      f << "x,f\n";
      for (int i = 0; i <= 100; ++i) f << i / 100.0 << ',' << std::abs(i / 100.0 - 0.3) << '\n';
      std::ofstream m(mod);
      m << "delta,omega\n1,1\n";
    }
    const auto a = invoke({"bound", "--function-csv", fn.string(), "--modulus-csv", mod.string(), "--n", "16",
                           "--x-grid", "9", "--output", "-"});
    CHECK(a.code == 0);
    CHECK(a.out.find("summary.violations: 0") != std::string::npos);
    const auto b = invoke({"bound", "--function-csv", fn.string(), "--n", "16", "--x-grid", "9", "--output", "-"});
    CHECK(b.code == 0);
    CHECK(b.out.find("empirical_modulus_grid_step") != std::string::npos);
  }

  TEST_CASE("output directory from the environment") {
    const auto dir = std::filesystem::temp_directory_path() / "ba_cli_out";
    std::filesystem::create_directories(dir);
    setenv("BERNAUDIT_OUTPUT_DIR", dir.c_str(), 1);
    const auto r = invoke({"uniform", "--corpus", "square", "--n", "4"});
    unsetenv("BERNAUDIT_OUTPUT_DIR");
    CHECK(r.code == 0);
    CHECK(std::filesystem::exists(dir / "uniform.csv"));
  }

  TEST_CASE("reports are byte-identical across runs") {
    SweepConfig cfg;
    cfg.command = Command::bivariate;
    cfg.n_set = {Degree(2), Degree(8)};
    cfg.n2_set = {Degree(4), Degree::inf()};
    cfg.x_grid = {0.3, 0.6};
    apply_defaults(cfg);
    const auto a = execute(cfg);
    const auto b = execute(cfg);
    CHECK(a.report == b.report);
    CHECK(a.violations == 0);
    CHECK(a.cells == 5 * 2 * 2 * 2 * 2);
  }

  TEST_CASE("sharpness report contains the constant comparison") {
    const auto r = invoke({"sharpness", "--n", "4..1024", "--format", "json", "--output", "-"});
    REQUIRE(r.code == 0);
    const auto j = Json::parse(r.out);
    CHECK(j["hoelder_comparison"].size() == 18);
    CHECK(j["traces"].size() == 6);
  }
}
