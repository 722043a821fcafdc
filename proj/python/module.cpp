// Python bindings for the main operations: model builders, realizations,
// transfer/exponent machinery, the counting curves and the scalar-chain
// suite. Matrices cross the boundary as numpy arrays via pybind11/eigen.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "andersonspec/anderson.hpp"
#include "andersonspec/blockmodel.hpp"
#include "andersonspec/duality.hpp"
#include "andersonspec/errors.hpp"
#include "andersonspec/spectral.hpp"
#include "andersonspec/transfer.hpp"

namespace py = pybind11;
using namespace andersonspec;

namespace {

anderson::AndersonConfig make_config(const std::vector<int>& dims, double w, double delta,
                                     const std::string& distribution, std::uint64_t seed) {
  anderson::AndersonConfig config;
  config.dims = dims;
  config.w = w;
  config.delta = delta;
  config.distribution =
      distribution == "cauchy" ? anderson::Distribution::Cauchy : anderson::Distribution::Uniform;
  config.seed = seed;
  return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Decay-exponent spectra of block-tridiagonal operators with twisted boundary conditions";

  py::register_exception<Error>(m, "NumericalError");

  py::class_<BoundaryFactor>(m, "BoundaryFactor")
      .def(py::init([](double xi, double phi) { return BoundaryFactor{xi, phi}; }), py::arg("xi") = 0.0,
           py::arg("phi") = 0.0)
      .def_readwrite("xi", &BoundaryFactor::xi)
      .def_readwrite("phi", &BoundaryFactor::phi)
      .def("corner_multiplier", &BoundaryFactor::corner_multiplier)
      .def("bond_factor", &BoundaryFactor::bond_factor)
      .def("__repr__", [](const BoundaryFactor& bf) {
        return "BoundaryFactor(xi=" + std::to_string(bf.xi) + ", phi=" + std::to_string(bf.phi) + ")";
      });

  py::class_<BlockModel>(m, "BlockModel")
      .def(py::init<std::vector<Matrix>, std::vector<Matrix>>(), py::arg("a_blocks"), py::arg("b_blocks"))
      .def_property_readonly("units", &BlockModel::units)
      .def_property_readonly("block_size", &BlockModel::block_size)
      .def_property_readonly("dim", &BlockModel::dim)
      .def_property_readonly("corner_unitary", &BlockModel::corner_unitary)
      .def("a", &BlockModel::a, py::arg("k"))
      .def("b", &BlockModel::b, py::arg("k"));

  m.def("build_anderson",
        [](const std::vector<int>& dims, double w, std::uint64_t seed, const std::string& distribution,
           double delta) { return anderson::build_anderson(make_config(dims, w, delta, distribution, seed)); },
        py::arg("dims"), py::arg("w") = 0.0, py::arg("seed") = 0, py::arg("distribution") = "uniform",
        py::arg("delta") = 1.0);

  m.def("disorder_values",
        [](const std::vector<int>& dims, double w, std::uint64_t seed, const std::string& distribution,
           double delta) { return anderson::disorder_values(make_config(dims, w, delta, distribution, seed)); },
        py::arg("dims"), py::arg("w") = 0.0, py::arg("seed") = 0, py::arg("distribution") = "uniform",
        py::arg("delta") = 1.0);

  m.def("realize_h", &realize_h, py::arg("model"), py::arg("bf"));
  m.def("realize_h_balanced", &realize_h_balanced, py::arg("model"), py::arg("bf"));
  m.def("log_abs_det_shifted", &log_abs_det_shifted, py::arg("model"), py::arg("bf"), py::arg("eps"));
  m.def("dense_eigenvalues",
        [](const Matrix& matrix) { return dense_eigenvalues(matrix).eigenvalues; }, py::arg("matrix"));

  m.def("transfer_matrix",
        [](const BlockModel& model, cplx eps) { return build_transfer(model, eps).matrix; }, py::arg("model"),
        py::arg("eps"));
  m.def("transfer_exponents",
        [](const BlockModel& model, cplx eps) { return exponents_direct(build_transfer(model, eps)).values; },
        py::arg("model"), py::arg("eps"));
  m.def("q_matrix", [](const BlockModel& model, cplx eps) { return build_q(model, eps).matrix; }, py::arg("model"),
        py::arg("eps"));
  m.def("duality_residual", &duality_residual, py::arg("model"), py::arg("eps"), py::arg("s"));

  m.def("lyapunov_oracle",
        [](const std::vector<int>& dims, double w, std::uint64_t seed, double eps, long total_length,
           int reorth_period) {
          OracleOptions options;
          options.total_length = total_length;
          options.reorth_period = reorth_period;
          const auto spectrum = anderson::lyapunov_oracle(make_config(dims, w, 1.0, "uniform", seed), eps, options);
          return py::make_tuple(spectrum.values, spectrum.std_errors);
        },
        py::arg("dims"), py::arg("w"), py::arg("seed"), py::arg("eps"), py::arg("total_length") = 100000,
        py::arg("reorth_period") = 8);

  m.def("jensen_average",
        [](const BlockModel& model, cplx eps, double xi, int n_angles, double tol) {
          QuadratureSettings quad;
          quad.n_angles = n_angles;
          quad.tol = tol;
          return jensen_average(model, eps, xi, quad);
        },
        py::arg("model"), py::arg("eps"), py::arg("xi"), py::arg("n_angles") = 64, py::arg("tol") = 1e-7);
  m.def("sum_positive_exponents",
        [](const BlockModel& model, cplx eps, int n_angles, double tol) {
          QuadratureSettings quad;
          quad.n_angles = n_angles;
          quad.tol = tol;
          return sum_positive_exponents(model, eps, quad);
        },
        py::arg("model"), py::arg("eps"), py::arg("n_angles") = 64, py::arg("tol") = 1e-7);

  m.def("counting_curve",
        [](const BlockModel& model, cplx eps, double xi_max, double grid_step, int n_angles, double tol,
           const std::string& basis) {
          CurveSettings settings;
          settings.xi_max = xi_max;
          settings.grid_step = grid_step;
          settings.quad.n_angles = n_angles;
          settings.quad.tol = tol;
          const CountingCurve curve = basis == "k" ? lyapunov_curve(model, eps, settings)
                                                   : counting_curve(model, eps, settings);
          return py::make_tuple(curve.xi_grid, curve.g_values);
        },
        py::arg("model"), py::arg("eps"), py::arg("xi_max") = -1.0, py::arg("grid_step") = 0.025,
        py::arg("n_angles") = 64, py::arg("tol") = 1e-7, py::arg("basis") = "h");

  m.def("extract_breakpoints",
        [](const BlockModel& model, cplx eps, double xi_max, double grid_step, int n_angles, double tol,
           const std::string& basis) {
          CurveSettings settings;
          settings.xi_max = xi_max;
          settings.grid_step = grid_step;
          settings.quad.n_angles = n_angles;
          settings.quad.tol = tol;
          const CountingCurve curve = basis == "k" ? lyapunov_curve(model, eps, settings)
                                                   : counting_curve(model, eps, settings);
          RefineSettings refine;
          refine.quad = settings.quad;
          const BreakpointReport report = extract_breakpoints(model, curve, refine);
          py::dict out;
          std::vector<double> xs, jumps;
          for (const Breakpoint& b : report.breakpoints) {
            xs.push_back(b.xi);
            jumps.push_back(b.slope_jump);
          }
          out["breakpoints"] = xs;
          out["slope_jumps"] = jumps;
          out["xi_min"] = report.xi_min;
          out["mean_positive"] = report.mean_positive;
          out["warnings"] = report.warnings;
          return out;
        },
        py::arg("model"), py::arg("eps"), py::arg("xi_max") = -1.0, py::arg("grid_step") = 0.025,
        py::arg("n_angles") = 64, py::arg("tol") = 1e-7, py::arg("basis") = "h");

  m.def("zero_disorder_spectrum",
        [](const std::vector<int>& dims, const BoundaryFactor& bf) {
          return anderson::zero_disorder_spectrum(make_config(dims, 0.0, 1.0, "uniform", 0), bf);
        },
        py::arg("dims"), py::arg("bf"));

  m.def("hatano_p", [](cplx eps, const std::vector<double>& v) { return anderson::hatano_p(eps, v); },
        py::arg("eps"), py::arg("v"));
  m.def("hatano_exponent",
        [](cplx eps, const std::vector<double>& v) { return anderson::hatano_exponent(eps, v); }, py::arg("eps"),
        py::arg("v"));

  m.attr("__version__") = ANDERSONSPEC_VERSION;
}
