/*
 * Copyright 2026 The qgas Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qgas/bounds.hpp"
#include "qgas/boson_quench.hpp"
#include "qgas/fermi_box.hpp"
#include "qgas/lattice.hpp"
#include "qgas/pfaffian.hpp"

namespace py = pybind11;
using namespace qgas;

namespace {

BoxConfig box(int N, const std::string& statistics, double a, int samples) {
  BoxConfig cfg;
  cfg.N = N;
  cfg.statistics = statistics == "boson" ? Statistics::boson : Statistics::fermion;
  cfg.a = a;
  cfg.samples = samples;
  validate(cfg);
  return cfg;
}

HarmonicQuench quench(double gamma, double omega0, double mass) {
  HarmonicQuench cfg;
  cfg.gamma = gamma;
  cfg.omega0 = omega0;
  cfg.mass = mass;
  validate(cfg);
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Equilibration of free quantum gases: spectral evolution, box and trap quenches, lattices.";
  m.attr("__version__") = QGAS_VERSION;

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  m.def("pfaffian", &pfaffian, py::arg("A"), "Pfaffian of a real antisymmetric matrix.");

  m.def(
      "box_series",
      [](int N, const std::string& statistics, int samples) {
        const BoxSeries series(box(N, statistics, 0.05, samples));
        return series.half_period_grid(static_cast<std::size_t>(samples));
      },
      py::arg("N"), py::arg("statistics") = "fermion", py::arg("samples") = 4096,
      "D(t) for N particles released from half a box, sampled on [0, T_rec/2].");
  m.def(
      "box_time_average",
      [](int N, const std::string& statistics, double a, int samples) {
        const auto r = time_average_D(box(N, statistics, a, samples));
        return py::dict(py::arg("mean") = r.mean, py::arg("bound") = r.bound, py::arg("mu") = r.mu,
                        py::arg("within_bound") = r.within_bound);
      },
      py::arg("N"), py::arg("statistics") = "fermion", py::arg("a") = 0.05, py::arg("samples") = 4096);
  m.def(
      "box_equilibration_time",
      [](int N, double a) {
        const auto r = equilibration_time(box(N, "fermion", a, 4096));
        return py::dict(py::arg("T_eq") = r.T_eq, py::arg("T_eq_loose") = r.T_eq_loose,
                        py::arg("bound") = r.bound, py::arg("D_at_T_eq") = r.D_at_T_eq,
                        py::arg("certified") = r.certified);
      },
      py::arg("N"), py::arg("a") = 0.05);

  m.def("erf_approx", &erf_approx, py::arg("x"));
  m.def(
      "central_mass",
      [](double gamma, double t, double omega0, double mass) {
        return central_mass_closed_form(quench(gamma, omega0, mass), t);
      },
      py::arg("gamma"), py::arg("t"), py::arg("omega0") = 1.0, py::arg("mass") = 1.0,
      "Probability inside the counting window after a harmonic trap quench (erf approximation).");
  m.def(
      "central_mass_numeric",
      [](double gamma, double t, double omega0, double mass) {
        return central_mass_numeric(quench(gamma, omega0, mass), t);
      },
      py::arg("gamma"), py::arg("t"), py::arg("omega0") = 1.0, py::arg("mass") = 1.0);

  m.def("pfaffian_wick",
        [](const RMat& gamma, const std::vector<int>& indices) {
          return wick_expectation(CovarianceMatrix(gamma), indices);
        },
        py::arg("gamma"), py::arg("indices"), "tr[rho c_r1 ... c_r2K] from a Majorana covariance matrix.");
  m.def(
      "ring_energies", [](int L) { return HoppingModel::ring(L).spectrum().energies(); }, py::arg("L"));
  m.def(
      "ring_correlator",
      [](int L, int x, int y, const std::vector<double>& times) {
        const HoppingModel model = HoppingModel::ring(L);
        const CovarianceMatrix cov = alternating_state(L);
        std::vector<Complex> out;
        out.reserve(times.size());
        for (double t : times) out.push_back(phase_correlator(model, cov, x, y, t).direct);
        return out;
      },
      py::arg("L"), py::arg("x"), py::arg("y"), py::arg("times"),
      "tr[rho(t) a_x^dagger a_y] on a ring starting from every even site occupied.");
  m.def(
      "truncated_dos",
      [](int L, double p0) {
        const auto r = truncated_dos(HoppingModel::ring(L), p0);
        return py::dict(py::arg("n_max") = r.n_max, py::arg("excluded_formula") = r.excluded_formula,
                        py::arg("excluded_direct") = r.excluded_direct);
      },
      py::arg("L"), py::arg("p0") = kDefaultP0);

  m.def(
      "weighted_average",
      [](double dG, double T) {
        const auto r = weighted_average_check(dG, T);
        return py::dict(py::arg("numeric") = r.numeric, py::arg("analytic") = r.analytic,
                        py::arg("uniform") = r.uniform);
      },
      py::arg("dG"), py::arg("T"));
  m.def(
      "bound",
      [](double d, double d_eff, int D_G, double n_max, double T) {
        BoundInputs in;
        in.d = d;
        in.d_eff = d_eff;
        in.D_G = D_G;
        in.n_max = n_max;
        in.T = T;
        return deviation_bound(in).bound_value;
      },
      py::arg("d"), py::arg("d_eff"), py::arg("D_G"), py::arg("n_max"), py::arg("T"),
      "Upper bound on the time-averaged squared deviation over [0, T].");
}
