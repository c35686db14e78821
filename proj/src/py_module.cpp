#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "d4dr/dr_quantum.hpp"
#include "d4dr/ds_d4.hpp"
#include "d4dr/expr.hpp"
#include "d4dr/verify.hpp"

namespace py = pybind11;
using namespace d4dr;

namespace {

std::map<std::pair<int, int>, DiffPoly> densities_normal(bool first_flow,
                                                         int trunc,
                                                         int jobs) {
  (void)jobs;
  LaxPair lp = build_lax();
  RootCache rc = sixth_root(lp, -trunc);
  NormalCoordinates nc = normal_coordinates(lp, rc);
  std::map<std::pair<int, int>, DiffPoly> hs =
      tau_densities_s(lp, rc, nc, first_flow);
  std::map<std::pair<int, int>, DiffPoly> out;
  for (const auto& [key, den] : hs)
    out[key] = normal_form(nc.s_in_ut.apply(den).rescale_eps_inv_sqrt2());
  return out;
}

std::vector<std::vector<std::string>> poisson_text(int trunc, int jobs) {
  LaxPair lp = build_lax();
  RootCache rc = sixth_root(lp, -trunc);
  NormalCoordinates nc = normal_coordinates(lp, rc);
  DiffOpMatrix k = poisson_matrix_first(lp, nc, jobs);
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : k) {
    std::vector<std::string> r;
    for (const DiffOp& e : row) r.push_back(e.str());
    rows.push_back(std::move(r));
  }
  return rows;
}

py::dict classical_report(int zcap, int eps_cap) {
  DrSolveReport rep = solve_g11(DrSetting::full(), zcap, eps_cap);
  py::dict d;
  d["g11"] = rep.g11;
  d["nullity"] = rep.nullity;
  d["ansatz"] = rep.ansatz;
  d["rank"] = rep.rank;
  d["normalization"] = rep.normalization;
  d["zcap_used"] = rep.zcap_used;
  return d;
}

py::dict quantum_report(int eps_cap) {
  DrSolveReport cls = solve_g11(DrSetting::full(), 2, eps_cap);
  QuantumSolveReport rep = solve_quantum_g11(cls.g11, DrSetting::full(), 2);
  py::dict d;
  d["g11"] = rep.g11;
  d["correction"] = rep.g11.select_hbar(1);
  d["nullity"] = rep.nullity;
  d["ansatz"] = rep.ansatz;
  d["rank"] = rep.rank;
  d["normalization"] = rep.normalization;
  return d;
}

std::vector<std::string> polylog_py(const std::vector<int>& d) {
  std::vector<std::string> out;
  for (const Scalar& s : polylog_coeffs(d)) out.push_back(s.to_strings()[0]);
  return out;
}

py::list verify_py(const std::string& suite, int jobs) {
  py::list out;
  for (const CheckResult& r : run_suite(suite, jobs)) {
    py::dict d;
    d["name"] = r.name;
    d["pass"] = r.pass;
    d["error"] = r.error;
    d["detail"] = r.detail;
    d["seconds"] = r.seconds;
    out.append(std::move(d));
  }
  return out;
}

DrSetting setting_without(const std::vector<int>& kill) {
  return kill.empty() ? DrSetting::full() : DrSetting::without(kill);
}

}  // namespace

PYBIND11_MODULE(_d4dr, m) {
  m.doc() = "exact computer algebra for a rank-four integrable hierarchy";

  py::class_<DiffPoly>(m, "Poly")
      .def(py::init([](const std::string& text) { return parse_poly(text); }),
           py::arg("text"))
      .def("__str__", &DiffPoly::str)
      .def("__repr__",
           [](const DiffPoly& f) { return "Poly('" + f.str() + "')"; })
      .def("__len__", &DiffPoly::size)
      .def("__eq__", [](const DiffPoly& a, const DiffPoly& b) { return a == b; },
           py::is_operator())
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def("__neg__", [](const DiffPoly& f) { return -f; })
      .def("is_zero", &DiffPoly::is_zero)
      .def("latex", [](const DiffPoly& f) { return latex(f); })
      .def("d_x", [](const DiffPoly& f) { return d_x(f); },
           "total x-derivative")
      .def("normal_form", [](const DiffPoly& f) { return normal_form(f); },
           "canonical representative mod Im d_x")
      .def("select_eps", &DiffPoly::select_eps, py::arg("power"))
      .def("select_hbar", &DiffPoly::select_hbar, py::arg("power"))
      .def("variational",
           [](const DiffPoly& f, int index) {
             return variational(f, Alphabet::u, index);
           },
           py::arg("index"),
           "variational derivative in the order-0 field of that index");

  m.def("parse", [](const std::string& text) { return parse_poly(text); },
        py::arg("text"), "parse the canonical text form");
  m.def("functional_equal",
        [](const DiffPoly& a, const DiffPoly& b) {
          return LocalFunctional(a) == LocalFunctional(b);
        },
        py::arg("a"), py::arg("b"),
        "equality of the integrals: densities agree mod Im d_x + constants");

  m.def("densities", &densities_normal, py::arg("first_flow") = false,
        py::arg("trunc") = 13, py::arg("jobs") = 1,
        "tau-symmetric densities in normal coordinates, keyed (label, level)");
  m.def("poisson_matrix", &poisson_text, py::arg("trunc") = 13,
        py::arg("jobs") = 1,
        "first hamiltonian operator in normal coordinates, entry texts");

  m.def("solve_classical", &classical_report, py::arg("zcap") = 2,
        py::arg("eps_cap") = 10,
        "resolve the deformed first hamiltonian; returns the density and the"
        " per-level solver trace");
  m.def("solve_quantum", &quantum_report, py::arg("eps_cap") = 10,
        "hbar-linear correction on top of the resolved hamiltonian");

  m.def("frobenius_potential", &frobenius_potential,
        "rank-four prepotential (cubic and higher terms)");
  m.def("restrict", &restrict_density, py::arg("f"), py::arg("kill"),
        "drop the listed fields and all their jets");
  m.def("eta_bracket",
        [](const DiffPoly& f, const DiffPoly& g, const std::vector<int>& kill) {
          return eta_bracket(f, g, setting_without(kill));
        },
        py::arg("f"), py::arg("g"), py::arg("kill") = std::vector<int>{},
        "classical bracket {f, int g} under eta d_x");
  m.def("star_commutator",
        [](const DiffPoly& f, const DiffPoly& g, int hbar_cap,
           const std::vector<int>& kill) {
          return star_commutator(f, g, setting_without(kill), hbar_cap);
        },
        py::arg("f"), py::arg("g"), py::arg("hbar_cap") = 4,
        py::arg("kill") = std::vector<int>{},
        "quantum commutator [f, int g] modulo hbar^(cap+1)");
  m.def("polylog", &polylog_py, py::arg("d"),
        "decomposition coefficients of a product of negative-order polylogs");

  m.def("verify", &verify_py, py::arg("suite") = "all", py::arg("jobs") = 1,
        "run the verification suite; returns one record per check");
}
