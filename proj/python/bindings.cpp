#include "qdimer/commands.hpp"
#include "qdimer/dimer.hpp"
#include "qdimer/fock_algebra.hpp"
#include "qdimer/invariants.hpp"
#include "qdimer/qnumbers.hpp"
#include "qdimer/spectral.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace qdimer;

namespace {

GammaGrid make_grid(double gamma_min, double gamma_max, int steps, const std::string& scale) {
  if (scale != "linear" && scale != "log") throw UsageError("scale must be 'linear' or 'log'");
  return {gamma_min, gamma_max, steps, scale == "log" ? GridScale::kLog : GridScale::kLinear};
}

}  // namespace

PYBIND11_MODULE(_qdimer, m) {
  m.doc() = "Exact spectra of quantum DNLS and Ablowitz-Ladik dimers";
  m.attr("__version__") = kVersion;

  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);

  py::enum_<Model>(m, "Model")
      .value("DNLS", Model::kQdnls)
      .value("AL", Model::kQal);
  m.def("parse_model", &parse_model, py::arg("name"));

  py::class_<DeformationParameter>(m, "DeformationParameter")
      .def_readonly("gamma", &DeformationParameter::gamma)
      .def_readonly("q", &DeformationParameter::q)
      .def_readonly("s", &DeformationParameter::s);
  m.def("q_from_gamma", &q_from_gamma, py::arg("gamma"));
  m.def("sym_qnum", &sym_qnum, py::arg("x"), py::arg("q"));
  m.def("basic_qnum", &basic_qnum, py::arg("n"), py::arg("gamma"));
  m.def("q_factorial", &q_factorial, py::arg("n"), py::arg("q"));
  m.def("q_binomial", &q_binomial, py::arg("m"), py::arg("n"), py::arg("q"));

  py::class_<TridiagonalHamiltonian>(m, "TridiagonalHamiltonian")
      .def_readonly("model", &TridiagonalHamiltonian::model)
      .def_readonly("gamma", &TridiagonalHamiltonian::gamma)
      .def_readonly("epsilon", &TridiagonalHamiltonian::epsilon)
      .def_readonly("diag", &TridiagonalHamiltonian::diag)
      .def_readonly("off", &TridiagonalHamiltonian::off)
      .def_readonly("warnings", &TridiagonalHamiltonian::warnings)
      .def_property_readonly("two_j", [](const TridiagonalHamiltonian& h) { return h.sector.two_j; })
      .def_property_readonly("energy_scale", [](const TridiagonalHamiltonian& h) { return h.dropped.scale; })
      .def_property_readonly("energy_shift", [](const TridiagonalHamiltonian& h) { return h.dropped.shift; })
      .def_property_readonly("dim", &TridiagonalHamiltonian::dim)
      .def("inf_norm", &TridiagonalHamiltonian::inf_norm)
      .def("dense", [](const TridiagonalHamiltonian& h) {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(h.dim(), h.dim());
        for (int k = 0; k < h.dim(); ++k) a(k, k) = h.diag[k];
        for (int k = 0; k + 1 < h.dim(); ++k) a(k, k + 1) = a(k + 1, k) = h.off[k];
        return a;
      });

  m.def("build_dimer", &build_dimer, py::arg("model"), py::arg("two_j"), py::arg("gamma"), py::arg("epsilon") = 1.0);

  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("hamiltonian", &Spectrum::hamiltonian)
      .def_readonly("eigenvalues", &Spectrum::eigenvalues)
      .def_readonly("vectors", &Spectrum::vectors)
      .def_readonly("norm_constants", &Spectrum::norm_constants)
      .def_readonly("epsilon_factors", &Spectrum::epsilon_factors)
      .def_property_readonly("paths",
                             [](const Spectrum& s) {
                               std::vector<std::string> out;
                               for (VectorPath p : s.paths) out.emplace_back(path_name(p));
                               return out;
                             })
      .def_property_readonly("dim", &Spectrum::dim);

  m.def("eigenvalues", &eigenvalues_bisection, py::arg("h"), py::arg("tol") = 1e-12);
  m.def("solve", &solve, py::arg("h"), py::arg("tol") = 1e-12);
  m.def("dense_oracle", &dense_oracle, py::arg("h"));
  m.def("gershgorin_bounds", &gershgorin_bounds, py::arg("h"));
  m.def("epsilon_factors", &epsilon_factors, py::arg("two_j"), py::arg("model"), py::arg("gamma"));
  m.def("characteristic_polynomial", &characteristic_polynomial, py::arg("h"));
  m.def("min_gap", &min_gap, py::arg("eigenvalues"));
  m.def("completeness_check", &completeness_check, py::arg("spectrum"));
  m.def("max_eigen_residual", &max_eigen_residual, py::arg("spectrum"));
  m.def("df_orthonormality_check",
        [](const Spectrum& s) { return df_orthonormality_check(s).residual(); }, py::arg("spectrum"));
  m.def(
      "parity_structure_check",
      [](const Spectrum& s, double tol) {
        const ParityReport r = parity_structure_check(s, tol);
        py::dict d;
        d["passed"] = r.passed;
        d["max_antisymmetry"] = r.max_antisymmetry;
        d["zero_count"] = r.zero_count;
        d["expected_zero_count"] = r.expected_zero_count;
        d["offending"] = r.offending;
        return d;
      },
      py::arg("spectrum"), py::arg("tol") = 1e-10);

  m.def("chain_energies_from_dimer", &chain_energies_from_dimer, py::arg("model"), py::arg("total_quanta"),
        py::arg("gamma"), py::arg("epsilon") = 1.0, py::arg("tol") = 1e-15);
  m.def(
      "chain_spectrum",
      [](Model model, int n_sites, int total_quanta, double gamma, double epsilon) {
        const BasisPtr b = build_sector_basis(n_sites, total_quanta);
        return sector_spectrum(model == Model::kQdnls ? build_qdnls_chain(b, gamma, epsilon)
                                                      : build_qal_chain(b, gamma));
      },
      py::arg("model"), py::arg("n_sites"), py::arg("total_quanta"), py::arg("gamma"), py::arg("epsilon") = 1.0);
  m.def("sector_dimension", &sector_dimension, py::arg("n_sites"), py::arg("total_quanta"));
  m.def(
      "conservation_suite",
      [](Model model, int n_sites, int total_quanta, double gamma, double epsilon) {
        const ConservationReport r = conservation_suite(model, n_sites, total_quanta, gamma, epsilon);
        py::list out;
        for (const ConservationEntry& e : r.pairs) {
          py::dict d;
          d["label"] = e.label;
          d["norm"] = e.norm;
          d["tolerance"] = e.tolerance;
          d["passed"] = e.passed;
          out.append(d);
        }
        return out;
      },
      py::arg("model"), py::arg("n_sites"), py::arg("total_quanta"), py::arg("gamma"), py::arg("epsilon") = 1.0);

  m.def(
      "sweep",
      [](Model model, int two_j, double gamma_min, double gamma_max, int steps, const std::string& scale,
         double epsilon, double tol) {
        SweepParams p;
        p.model = model;
        p.two_j = two_j;
        p.grid = make_grid(gamma_min, gamma_max, steps, scale);
        p.epsilon = epsilon;
        p.tol = tol;
        const SweepResult r = run_sweep(p);
        std::vector<double> gammas;
        std::vector<std::vector<double>> eig;
        for (const SweepRow& row : r.rows) {
          gammas.push_back(row.gamma);
          eig.push_back(row.eigenvalues);
        }
        return py::make_tuple(gammas, eig);
      },
      py::arg("model"), py::arg("two_j"), py::arg("gamma_min") = 0.0, py::arg("gamma_max") = 10.0,
      py::arg("steps") = 21, py::arg("scale") = "linear", py::arg("epsilon") = 1.0, py::arg("tol") = 1e-12);

  m.def(
      "gaps",
      [](int two_j, int pairs, double gamma_min, double gamma_max, int steps, const std::string& scale,
         double epsilon) {
        GapParams p;
        p.two_j = two_j;
        p.pairs = pairs;
        p.grid = make_grid(gamma_min, gamma_max, steps, scale);
        p.epsilon = epsilon;
        const GapAnalysis a = run_gaps(p);
        py::dict d;
        d["gamma"] = a.gamma;
        d["gap"] = a.gap;
        d["slope"] = a.slope;
        d["steepest_gamma"] = a.steepest_gamma;
        return d;
      },
      py::arg("two_j"), py::arg("pairs") = 2, py::arg("gamma_min") = 0.25, py::arg("gamma_max") = 16.0,
      py::arg("steps") = 25, py::arg("scale") = "log", py::arg("epsilon") = 1.0);

  m.def(
      "verify",
      [](const std::string& suite, int two_j_max, int m_max) {
        VerifyParams p;
        p.suite = suite;
        p.two_j_max = two_j_max;
        p.m_max = m_max;
        std::ostringstream out;
        const bool ok = cmd_verify(p, out);
        return py::make_tuple(ok, out.str());
      },
      py::arg("suite") = "all", py::arg("two_j_max") = 20, py::arg("m_max") = 4);

  m.def("format_number", &format_number, py::arg("x"));
}
