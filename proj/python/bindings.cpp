#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bakerlab/classical.hpp"
#include "bakerlab/quantize.hpp"
#include "bakerlab/spectral.hpp"
#include "bakerlab/transforms.hpp"
#include "bakerlab/transport.hpp"

namespace py = pybind11;
using namespace bakerlab;

namespace {

Sector sector_arg(const std::string& s) { return sector_from_string(s); }

Spectrum as_spectrum(const std::vector<cplx>& values) {
  Spectrum s;
  s.values = values;
  canonical_sort(s.values);
  s.map_dimension = static_cast<std::int64_t>(values.size());
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "bakerlab core bindings";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);

  py::class_<OpenBakerSpec>(m, "OpenBakerSpec")
      .def(py::init<int, std::vector<int>>(), py::arg("branches"), py::arg("kept"))
      .def_static("three_baker", &OpenBakerSpec::three_baker)
      .def_static("five_baker", &OpenBakerSpec::five_baker)
      .def_static("closed", &OpenBakerSpec::closed)
      .def_property_readonly("branches", &OpenBakerSpec::branches)
      .def_property_readonly("kept", &OpenBakerSpec::kept)
      .def("__repr__", [](const OpenBakerSpec& s) { return "OpenBakerSpec(" + s.label() + ")"; });

  m.def("dft_centered", &build_dft_centered, py::arg("n"));
  m.def(
      "walsh", [](int d, int k, const std::string& v) { return build_walsh(d, k, walsh_variant_from_string(v)); },
      py::arg("d"), py::arg("k"), py::arg("variant") = "W");
  m.def("open_map", &quantize_open, py::arg("spec"), py::arg("n"));
  m.def(
      "open_map_compressed",
      [](const OpenBakerSpec& spec, std::int64_t n, const std::string& sector) {
        return quantize_open_compressed(spec, n, sector_arg(sector));
      },
      py::arg("spec"), py::arg("n"), py::arg("sector") = "full");
  m.def("toy_matrix", &build_toy_diagonal, py::arg("n"));
  m.def(
      "eigenvalues", [](const ComplexMatrix& a) { return eigen_spectrum(a).values; }, py::arg("matrix"),
      "Eigenvalues sorted by modulus (descending), then argument.");
  m.def(
      "count_sector",
      [](const std::vector<cplx>& values, double r, double theta, double rho) {
        return count_sector(as_spectrum(values), {r, theta, rho});
      },
      py::arg("values"), py::arg("r"), py::arg("theta") = 0.0, py::arg("rho") = kPi);
  m.def(
      "toy_closed_spectrum", [](int k) { return toy_closed_spectrum(k).expanded(); }, py::arg("k"));
  m.def(
      "fractal_mu", [](const OpenBakerSpec& s) { return fractal_dimensions(s).mu; }, py::arg("spec"));
  m.def(
      "transmission_matrix",
      [](int k, double theta, const std::string& method, double tol) {
        return transmission_matrix(k, theta, transport_method_from_string(method), tol);
      },
      py::arg("k"), py::arg("theta") = 0.0, py::arg("method") = "series", py::arg("tol") = 1e-12);
  m.def(
      "transport_quantities",
      [](const ComplexMatrix& t) {
        const auto r = transport_quantities(t);
        py::dict d;
        d["T"] = r.transmissions;
        d["g"] = r.g;
        d["P"] = r.P;
        d["F"] = r.F ? py::cast(*r.F) : py::none();
        return d;
      },
      py::arg("t"));
}
