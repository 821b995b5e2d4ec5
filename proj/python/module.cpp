#include <sstream>
#include <string>
#include <vector>

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bernaudit/bernstein.hpp"
#include "bernaudit/bounds.hpp"
#include "bernaudit/cli.hpp"
#include "bernaudit/numerics.hpp"
#include "bernaudit/report.hpp"
#include "bernaudit/sharpness.hpp"
#include "bernaudit/subgaussian.hpp"

namespace py = pybind11;
using namespace bernaudit;

namespace {

QuadratureConfig quadrature(double rel_tol, double truncation_z) {
  QuadratureConfig q;
  q.rel_tol = rel_tol;
  q.truncation_z = truncation_z;
  q.validate();
  return q;
}

Degree degree(const py::object& n) {
  if (py::isinstance<py::str>(n) && n.cast<std::string>() == "inf") return Degree::inf();
  if (py::isinstance<py::float_>(n) && std::isinf(n.cast<double>())) return Degree::inf();
  return Degree(n.cast<int>());
}

py::dict report_dict(const ViolationReport& r) { return py::module_::import("json").attr("loads")(to_json(r, false).dump()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bernstein approximation error bounds";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  m.attr("__version__") = tool_version();
  m.attr("REPORT_SCHEMA") = report_schema_version();

  m.def("log_gamma", &log_gamma, py::arg("x"));
  m.def("log_binomial", &log_binomial, py::arg("n"), py::arg("k"));
  m.def("log_binomial_pmf", &log_binomial_pmf, py::arg("n"), py::arg("k"), py::arg("p"));

  py::class_<ModulusSpec>(m, "Modulus")
      .def_static("hoelder", [](double alpha, double h) { return ModulusSpec(Hoelder{alpha, h}); }, py::arg("alpha"),
                  py::arg("h") = 1.0)
      .def_static("lipschitz", [](double l) { return ModulusSpec(Lipschitz{l}); }, py::arg("l"))
      .def_static("tabulated", [](std::vector<std::pair<double, double>> knots) {
            return ModulusSpec(Tabulated{std::move(knots)});
          }, py::arg("knots"))
      .def("__call__", &modulus_eval, py::arg("delta"))
      .def("kinks", &ModulusSpec::kinks)
      .def("__repr__", [](const ModulusSpec& s) { return "<Modulus " + s.describe() + ">"; });

  py::class_<ScalarFunction>(m, "Function")
      .def(py::init<std::string, UnivariateMap, std::optional<ModulusSpec>>(), py::arg("label"), py::arg("f"),
           py::arg("modulus") = std::nullopt)
      .def("__call__", &ScalarFunction::operator(), py::arg("x"))
      .def_property_readonly("label", &ScalarFunction::label)
      .def_property_readonly("modulus", &ScalarFunction::exact_modulus)
      .def_property_readonly("has_derivative", &ScalarFunction::has_derivative);

  m.def("corpus", [](const std::string& name) {
        if (name == "standard") return corpus_standard();
        if (name == "derivative") return corpus_derivative();
        return std::vector<ScalarFunction>{corpus_lookup(name)};
      }, py::arg("name") = "standard");
  m.def("trial_g", &trial_g, py::arg("t"));
  m.def("trial_G", &trial_G, py::arg("t"));

  m.def("bernstein_weights", &bernstein_weights, py::arg("n"), py::arg("x"));
  m.def("bernstein_eval", [](const ScalarFunction& f, int n, double x) { return bernstein_eval(f, Degree(n), x); },
        py::arg("f"), py::arg("n"), py::arg("x"));
  m.def("bernstein_eval", [](const UnivariateMap& f, int n, double x) { return bernstein_eval(f, Degree(n), x); },
        py::arg("f"), py::arg("n"), py::arg("x"));
  m.def("bernstein_derivative_eval",
        [](const UnivariateMap& f, int n, double x) { return bernstein_derivative_eval(f, n, x); }, py::arg("f"),
        py::arg("n"), py::arg("x"));
  m.def("error_exact", [](const ScalarFunction& f, int n, double x) { return error_exact(f, Degree(n), x); },
        py::arg("f"), py::arg("n"), py::arg("x"));

  py::class_<BoundRecord>(m, "BoundRecord")
      .def_readonly("label", &BoundRecord::label)
      .def_readonly("x", &BoundRecord::x)
      .def_readonly("y", &BoundRecord::y)
      .def_property_readonly("n1", [](const BoundRecord& r) { return r.n1.to_string(); })
      .def_property_readonly("n2", [](const BoundRecord& r) { return r.n2 ? r.n2->to_string() : std::string(); })
      .def_readonly("delta", &BoundRecord::delta)
      .def_readonly("j", &BoundRecord::j)
      .def_readonly("bound", &BoundRecord::bound)
      .def_readonly("ratio", &BoundRecord::ratio)
      .def_readonly("passed", &BoundRecord::pass)
      .def_readonly("converged", &BoundRecord::converged)
      .def("__repr__", [](const BoundRecord& r) {
        return "<BoundRecord " + r.label + " n=" + r.n1.to_string() + " x=" + format_number(r.x) +
               " delta=" + format_number(r.delta) + " bound=" + format_number(r.bound) + ">";
      });

  m.def("j_functional",
        [](const ModulusSpec& mod, int n, double x, double rel_tol, double truncation_z) {
          return j_functional(mod, n, x, quadrature(rel_tol, truncation_z));
        },
        py::arg("modulus"), py::arg("n"), py::arg("x"), py::arg("rel_tol") = 1e-10, py::arg("truncation_z") = 10.0);
  m.def("j_hoelder_closed_form", &j_hoelder_closed_form, py::arg("alpha"), py::arg("h"), py::arg("n"), py::arg("x"));
  m.def("upper_bound",
        [](const ScalarFunction& f, int n, double x, double rel_tol) {
          return upper_bound(f, n, x, quadrature(rel_tol, 10.0));
        },
        py::arg("f"), py::arg("n"), py::arg("x"), py::arg("rel_tol") = 1e-10);
  m.def("derivative_bound",
        [](const ScalarFunction& f, int n, double x, double rel_tol) {
          return derivative_bound(f, n, x, quadrature(rel_tol, 10.0));
        },
        py::arg("f"), py::arg("n"), py::arg("x"), py::arg("rel_tol") = 1e-10);
  m.def("uniform_bound",
        [](const ModulusSpec& mod, int n, double rel_tol) { return uniform_bound(mod, n, quadrature(rel_tol, 10.0)); },
        py::arg("modulus"), py::arg("n"), py::arg("rel_tol") = 1e-10);
  m.def("bivariate_bound",
        [](const std::string& label, const py::object& n1, const py::object& n2, double x, double y, double rel_tol) {
          for (const auto& f : corpus_factorable()) {
            if (f.label == label) return bivariate_bound(f, degree(n1), degree(n2), x, y, quadrature(rel_tol, 10.0));
          }
          throw ConfigError("unknown bivariate function '" + label + "'");
        },
        py::arg("label"), py::arg("n1"), py::arg("n2"), py::arg("x"), py::arg("y"), py::arg("rel_tol") = 1e-10);
  m.def("bivariate_labels", [] {
    std::vector<std::string> out;
    for (const auto& f : corpus_factorable()) out.push_back(f.label);
    return out;
  });

  m.def("tail_function", [](int n, double p, double u) { return tail_function(BinomialModel(n, p), u); },
        py::arg("n"), py::arg("p"), py::arg("u"));
  m.def("cosh_mgf_check",
        [](int n, double p, const std::vector<double>& lambdas) { return report_dict(cosh_mgf_check(BinomialModel(n, p), lambdas)); },
        py::arg("n"), py::arg("p"), py::arg("lambdas"));
  m.def("moment_check", [](int n, double p, int m_max) { return report_dict(moment_check(BinomialModel(n, p), m_max)); },
        py::arg("n"), py::arg("p"), py::arg("m_max") = 10);
  m.def("tail_bound_check",
        [](int n, double p, const std::vector<double>& us) { return report_dict(tail_bound_check(BinomialModel(n, p), us)); },
        py::arg("n"), py::arg("p"), py::arg("u_grid"));
  m.def("bk_check", [](double p, const std::vector<double>& lambdas) { return report_dict(bk_check(p, lambdas)); },
        py::arg("p"), py::arg("lambdas"));
  m.def("sub_norm_estimate", &sub_norm_estimate, py::arg("mgf"), py::arg("lambdas"));
  m.def("excess_kurtosis_root", [] { return excess_kurtosis_root(); });

  m.def("bojanic_asymptote", &bojanic_asymptote, py::arg("x"), py::arg("n"));
  m.def("ratio_trace",
        [](const ScalarFunction& f, double x, const std::vector<int>& ns) {
          const RatioTrace t = ratio_trace(f, x, ns, QuadratureConfig{});
          py::dict d;
          d["label"] = t.label;
          d["n"] = t.n_values();
          d["ratio"] = t.ratios();
          d["limit"] = t.extrapolated_limit;
          return d;
        },
        py::arg("f"), py::arg("x"), py::arg("n_values"));

  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::vector<const char*> argv{"bernaudit"};
          for (const auto& a : args) argv.push_back(a.c_str());
          std::ostringstream out;
          std::ostringstream err;
          const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
