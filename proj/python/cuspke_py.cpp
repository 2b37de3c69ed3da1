#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cuspke/analysis.hpp"
#include "cuspke/bessel.hpp"
#include "cuspke/errors.hpp"
#include "cuspke/geometry.hpp"
#include "cuspke/model.hpp"
#include "cuspke/radial.hpp"
#include "cuspke/spectrum.hpp"

namespace py = pybind11;
using namespace cuspke;

namespace {

py::tuple scaled(const bessel::ScaledBessel& b) { return py::make_tuple(b.mantissa, b.exponent); }

CuspPoint point(const Eigen::VectorXcd& z, double x, double theta) {
  CuspPoint p;
  p.z = z;
  p.x = x;
  p.theta = theta;
  return p;
}

}  // namespace

PYBIND11_MODULE(_cuspke, m) {
  m.doc() = "Kaehler-Einstein cusp numerics";
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<CuspModel>(m, "CuspModel")
      .def(py::init([](int n) { return CuspModel::standard(n); }), py::arg("n") = 2)
      .def_readwrite("n", &CuspModel::n)
      .def_readwrite("lattice", &CuspModel::lattice)
      .def_readwrite("A", &CuspModel::A)
      .def_readwrite("scale", &CuspModel::scale)
      .def("validate", &CuspModel::validate)
      .def("phi", &CuspModel::phi);

  m.def("first_eigenvalue", &spectrum::first_eigenvalue, py::arg("model"));
  m.def(
      "eigenvalues", [](const CuspModel& model, int count) {
        py::list out;
        for (const auto& e : spectrum::eigenvalues_up_to(model, count))
          out.append(py::dict(py::arg("m") = Eigen::VectorXi(e.m), py::arg("xi") = Eigen::VectorXd(e.xi),
                              py::arg("lambda") = e.lambda));
        return out;
      },
      py::arg("model"), py::arg("count"));

  m.def("metric", [](const CuspModel& model, const Eigen::VectorXcd& z, double x, double theta) {
    return Eigen::MatrixXcd(geometry::metric_coefficients(model, point(z, x, theta)).entries);
  }, py::arg("model"), py::arg("z"), py::arg("x"), py::arg("theta") = 0.0);
  m.def("cross_section_metric", [](const CuspModel& model, double eps, const Eigen::VectorXcd& z, double theta) {
    return geometry::cross_section_metric(model, eps, point(z, eps * eps, theta));
  }, py::arg("model"), py::arg("eps"), py::arg("z"), py::arg("theta") = 0.0);

  m.def("bessel_i_scaled", [](int a, double s) { return scaled(bessel::bessel_i_scaled(a, s)); });
  m.def("bessel_k_scaled", [](int a, double s) { return scaled(bessel::bessel_k_scaled(a, s)); });
  m.def("h_pair", [](int n, double lambda, double x) {
    const auto h = bessel::h_pair(n, lambda, x);
    return py::make_tuple(scaled(h.h1), scaled(h.h2));
  }, py::arg("n"), py::arg("lambda_"), py::arg("x"));

  m.def("expand_formal", [](int n, double c1, int K) { return radial::expand_formal(n, c1, K).coeffs; });
  m.def("tangent_cone_coefficient", &radial::tangent_cone_coefficient);
  m.def("calabi", [](int n, double a, double b, double t0, double psi0, double t_end, double tol, int samples) {
    const auto tr = radial::integrate_calabi(n, a, b, t0, psi0, t_end, tol, samples);
    return py::make_tuple(tr.t_nodes, tr.psi, tr.psi_prime);
  }, py::arg("n"), py::arg("a"), py::arg("b"), py::arg("t0"), py::arg("psi0"), py::arg("t_end"),
        py::arg("tol") = 1e-12, py::arg("samples") = 201);

  m.def("tail_ratio_r1", &analysis::tail_ratio_r1, py::arg("c"), py::arg("k"), py::arg("x"));
  m.def("tail_ratio_r2", &analysis::tail_ratio_r2, py::arg("c"), py::arg("k"), py::arg("x"), py::arg("x0"));
  m.def("tail_ratio_admissible_x0", &analysis::tail_ratio_admissible_x0);
  m.def("barrier_sign", &analysis::barrier_sign);
  m.def(
      "decay_fit",
      [](const std::vector<double>& xs, const std::vector<double>& v, double lo, double hi,
         std::optional<double> delta) {
        const auto f = analysis::decay_fit(xs, v, lo, hi, delta);
        return py::dict(py::arg("p") = f.p, py::arg("delta") = f.delta, py::arg("amplitude") = f.amplitude,
                        py::arg("rms") = f.rms, py::arg("nodes") = f.nodes);
      },
      py::arg("xs"), py::arg("values"), py::arg("x_lo"), py::arg("x_hi"), py::arg("fixed_delta") = py::none());
}
