// Thin binding: configs and reports cross the boundary as JSON text; the
// Python package decodes them.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mhardy/errors.hpp"
#include "mhardy/geometry.hpp"
#include "mhardy/suite.hpp"

namespace py = pybind11;
using namespace mhardy;

namespace {

SuiteOptions options(const std::optional<std::string>& adm) {
  SuiteOptions o;
  if (adm) {
    o.admissibility = admissibility_from_string(*adm);
    if (!o.admissibility) throw ConfigError("admissibility must be 'thm2' or 'corollary'");
  }
  return o;
}

SuiteConfig parse(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_suite_config(j);
}

}  // namespace

PYBIND11_MODULE(_mhardy, m) {
  m.doc() = "Weighted and magnetic Hardy inequality verifiers";
  m.attr("__version__") = kToolVersion;

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  static py::exception<ConfigError> config_error(m, "ConfigError", base.ptr());
  static py::exception<AdmissibilityError> adm_error(m, "AdmissibilityError", base.ptr());
  static py::exception<DomainError> domain_error(m, "DomainError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      config_error(e.what());
    } catch (const AdmissibilityError& e) {
      adm_error(e.what());
    } catch (const DomainError& e) {
      domain_error(e.what());
    } catch (const Error& e) {
      base((std::string(e.kind()) + ": " + e.what()).c_str());
    }
  });

  m.def("verify_json",
        [](const std::string& config, std::optional<std::string> admissibility) {
          const SuiteOutcome o = run_suite(parse(config), options(admissibility));
          return py::make_tuple(o.report.dump(), o.ok);
        },
        py::arg("config"), py::arg("admissibility") = py::none());

  m.def("sweep_json",
        [](const std::string& config, std::optional<std::string> admissibility) {
          const SweepOutcome o = sweep_sharpness(parse(config), options(admissibility));
          py::dict tables;
          for (const SweepTable& t : o.tables) tables[py::str(t.file_name)] = t.csv;
          return py::make_tuple(o.combined.dump(), tables, o.ok);
        },
        py::arg("config"), py::arg("admissibility") = py::none());

  m.def("list_theorems", &list_theorems);
  m.def("theorem_ids", &theorem_ids);

  m.def("rho",
        [](int dim_x, int dim_y, double gamma, std::vector<double> x, std::vector<double> y) {
          return rho(GrushinGeometry{dim_x, dim_y, gamma}, Point{std::move(x), std::move(y)});
        },
        py::arg("m"), py::arg("k"), py::arg("gamma"), py::arg("x"), py::arg("y"));
  m.def("grad_rho",
        [](int dim_x, int dim_y, double gamma, std::vector<double> x, std::vector<double> y) {
          return grad_rho(GrushinGeometry{dim_x, dim_y, gamma}, Point{std::move(x), std::move(y)});
        },
        py::arg("m"), py::arg("k"), py::arg("gamma"), py::arg("x"), py::arg("y"));
  m.def("hom_dim",
        [](int dim_x, int dim_y, double gamma) { return hom_dim(GrushinGeometry{dim_x, dim_y, gamma}); },
        py::arg("m"), py::arg("k"), py::arg("gamma"));
}
