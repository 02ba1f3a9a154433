#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gph/experiments.hpp"
#include "gph/hierarchy.hpp"

namespace py = pybind11;
using namespace gph;

namespace {

py::array_t<std::complex<double>> field_array(const WaveFunction& phi) {
  const int n = phi.grid.points();
  std::vector<py::ssize_t> shape(phi.grid.dim(), n);
  py::array_t<std::complex<double>> out(shape);
  std::copy(phi.values.begin(), phi.values.end(),
            static_cast<std::complex<double>*>(out.request().ptr));
  return out;
}

WaveFunction field_from_array(const Grid& g,
                              py::array_t<std::complex<double>,
                                          py::array::c_style |
                                              py::array::forcecast> arr) {
  auto buf = arr.request();
  if (static_cast<std::size_t>(buf.size) != g.arg_points())
    throw std::invalid_argument("field size does not match the grid");
  WaveFunction phi{g, std::vector<cplx>(g.arg_points())};
  const auto* p = static_cast<const std::complex<double>*>(buf.ptr);
  std::copy(p, p + buf.size, phi.values.begin());
  return phi;
}

py::array_t<std::complex<double>> kernel_array(const DenseMarginal& m) {
  const py::ssize_t side =
      static_cast<py::ssize_t>(std::pow(m.grid().arg_points(), m.order()));
  py::array_t<std::complex<double>> out({side, side});
  std::copy(m.kernel().values().begin(), m.kernel().values().end(),
            static_cast<std::complex<double>*>(out.request().ptr));
  return out;
}

}  // namespace

PYBIND11_MODULE(_gph, mod) {
  mod.doc() = "Gross-Pitaevskii hierarchy numerics: marginals, contraction "
              "operators, Sobolev norms, conserved energy functionals";
  mod.attr("__version__") = kVersion;

  py::class_<Grid>(mod, "Grid")
      .def(py::init(&make_grid), py::arg("d"), py::arg("n"), py::arg("L"))
      .def_property_readonly("d", &Grid::dim)
      .def_property_readonly("n", &Grid::points)
      .def_property_readonly("L", &Grid::length)
      .def_property_readonly("dx", &Grid::dx)
      .def("freq", &Grid::freq);

  py::class_<WaveFunction>(mod, "WaveFunction")
      .def_property_readonly("grid",
                             [](const WaveFunction& w) { return w.grid; })
      .def_property_readonly("values", &field_array)
      .def("mass", &WaveFunction::mass);

  py::class_<NlsParams>(mod, "NlsParams")
      .def(py::init([](int p, double mu, double dt, double T) {
             NlsParams params{p, mu, dt, T};
             params.validate();
             return params;
           }),
           py::arg("p") = 2, py::arg("mu") = 1.0, py::arg("dt") = 1e-3,
           py::arg("T") = 1.0);

  py::class_<MixtureState>(mod, "MixtureState")
      .def(py::init<std::vector<double>, std::vector<WaveFunction>>(),
           py::arg("weights"), py::arg("states"))
      .def_property_readonly("weights",
                             [](const MixtureState& m) { return m.weights; })
      .def("components", &MixtureState::components);

  py::class_<DenseMarginal>(mod, "DenseMarginal")
      .def_property_readonly("order", &DenseMarginal::order)
      .def("trace", [](const DenseMarginal& m) { return m.trace(); })
      .def("matrix", &kernel_array)
      .def("hermiticity_residual", &DenseMarginal::hermiticity_residual);

  py::class_<EnergyReport>(mod, "EnergyReport")
      .def_readonly("m", &EnergyReport::m)
      .def_readonly("value", &EnergyReport::value);

  mod.def("plane_wave",
          [](const Grid& g, std::vector<int> mode) {
            return plane_wave(g, mode);
          },
          py::arg("grid"), py::arg("mode"));
  mod.def("gaussian_state",
          [](const Grid& g, std::vector<double> center, double width) {
            return gaussian_state(g, center, width);
          },
          py::arg("grid"), py::arg("center"), py::arg("width"));
  mod.def("random_state", &random_state, py::arg("grid"), py::arg("seed"),
          py::arg("decay") = 2.0);
  mod.def("from_values", &field_from_array, py::arg("grid"),
          py::arg("values"));

  mod.def("strang_step", &strang_step, py::arg("phi"), py::arg("params"),
          py::arg("dt"));
  mod.def("nls_energy", &nls_energy, py::arg("phi"), py::arg("params"));

  mod.def("factorized_marginal", &factorized_marginal, py::arg("phi"),
          py::arg("k"));
  mod.def("mixture_marginal", &mixture_marginal, py::arg("mixture"),
          py::arg("k"));
  mod.def("partial_trace", &partial_trace, py::arg("marginal"), py::arg("m"));
  mod.def("b_plus_dense",
          [](const DenseMarginal& g, int p, int j, int k) {
            return b_plus_dense(g, ContractionSpec{p, j, k});
          },
          py::arg("marginal"), py::arg("p"), py::arg("j"), py::arg("k"));
  mod.def("b_full", &b_full, py::arg("marginal"), py::arg("k"));
  mod.def("k_op_trace", &k_op_trace, py::arg("marginal"), py::arg("p"),
          py::arg("mu"));

  mod.def("hs_sobolev_norm", &hs_sobolev_norm, py::arg("marginal"),
          py::arg("alpha"));
  mod.def("trace_sobolev_norm", &trace_sobolev_norm, py::arg("marginal"),
          py::arg("alpha"));
  mod.def("e1", &e1, py::arg("mixture"), py::arg("params"));
  mod.def("k_energy",
          [](const MixtureState& m, int order, const NlsParams& params) {
            return k_energy(m, order, params);
          },
          py::arg("mixture"), py::arg("m"), py::arg("params"));
  mod.def("d_factor",
          [](double alpha, int p, int d, double mu, double c0) {
            DFactorResult r = d_factor(alpha, p, d, mu, c0);
            return py::make_tuple(r.value, r.mu_threshold);
          },
          py::arg("alpha"), py::arg("p"), py::arg("d"), py::arg("mu"),
          py::arg("c0"));
  mod.def("cancellation_residuals",
          [](const DenseMarginal& gk, const DenseMarginal& gb, int p,
             double mu) {
            CancellationReport r = cancellation_terms(gk, gb, p, mu);
            return py::make_tuple(r.r_h1, r.r_mixed, r.r_b2, r.scale);
          },
          py::arg("g_kp"), py::arg("g_big"), py::arg("p"), py::arg("mu"));
}
