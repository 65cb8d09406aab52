#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "critlab/cfrac.hpp"
#include "critlab/circle_maps.hpp"
#include "critlab/commuting_pairs.hpp"
#include "critlab/complex_ext.hpp"
#include "critlab/errors.hpp"
#include "critlab/lab.hpp"

namespace py = pybind11;
using namespace critlab;

namespace {

// Infinite quotients become None.
std::vector<std::optional<std::int64_t>> quotient_list(const ContinuedFraction& cf) {
  std::vector<std::optional<std::int64_t>> out;
  for (const auto& q : cf.quotients())
    out.push_back(q.is_infinite() ? std::nullopt : std::optional<std::int64_t>(q.value()));
  return out;
}

ContinuedFraction from_list(const std::vector<std::optional<std::int64_t>>& qs, bool exhausted) {
  std::vector<Quotient> v;
  for (const auto& q : qs) v.push_back(q ? Quotient(*q) : Quotient(kInfinity));
  return ContinuedFraction(std::move(v), exhausted);
}

FamilySpec family_spec(const std::string& family, double c, const std::string& precision) {
  return FamilySpec{parse_family(family), c, parse_precision(precision)};
}

py::array_t<std::uint8_t> label_array(const LabeledGrid& g) {
  const auto n = static_cast<py::ssize_t>(g.window.resolution);
  py::array_t<std::uint8_t> out({n, n});
  auto view = out.mutable_unchecked<2>();
  for (py::ssize_t r = 0; r < n; ++r)
    for (py::ssize_t c = 0; c < n; ++c)
      view(r, c) = static_cast<std::uint8_t>(g.at(static_cast<int>(c), static_cast<int>(r)));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Renormalization of critical circle maps";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto domain = py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<ParameterError>(m, "ParameterError", domain.ptr());
  py::register_exception<InvariantError>(m, "InvariantError", error.ptr());
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", error.ptr());
  py::register_exception<BudgetError>(m, "BudgetError", numerical.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", numerical.ptr());
  py::register_exception<OverflowError>(m, "OverflowError", numerical.ptr());

  m.def(
      "parse_cf", [](const std::string& text, int depth) { return quotient_list(parse_cf(text, depth)); },
      py::arg("text"), py::arg("depth") = 32, "Quotients of a rotation number; None marks the terminal symbol.");
  m.def(
      "cf_from_real", [](double x, int depth) { return quotient_list(cf_from_real(x, depth)); }, py::arg("x"),
      py::arg("depth"));
  m.def(
      "real_from_cf",
      [](const std::vector<std::optional<std::int64_t>>& qs, bool exhausted) {
        return real_from_cf(from_list(qs, exhausted));
      },
      py::arg("quotients"), py::arg("exhausted") = true);
  m.def(
      "convergents",
      [](const std::vector<std::optional<std::int64_t>>& qs, int m_max) {
        const Convergents c = convergents(from_list(qs, false), m_max);
        return py::make_tuple(c.p, c.q);
      },
      py::arg("quotients"), py::arg("m_max"), "Returns (p, q) lists for m = 0..m_max.");

  py::enum_<Precision>(m, "Precision")
      .value("double", Precision::Double)
      .value("ext128", Precision::Ext128)
      .value("ext256", Precision::Ext256);

  py::class_<Lift>(m, "Lift")
      .def_static("arnold", py::overload_cast<double, Precision>(&Lift::arnold), py::arg("theta"),
                  py::arg("precision") = Precision::Double)
      .def_static("two_harmonic", py::overload_cast<double, double, Precision>(&Lift::two_harmonic),
                  py::arg("theta"), py::arg("c"), py::arg("precision") = Precision::Double)
      .def_static("rigid", &Lift::rigid, py::arg("shift"))
      .def_property_readonly("theta", &Lift::theta)
      .def_property_readonly("c", &Lift::c)
      .def("__call__", py::overload_cast<double>(&Lift::operator(), py::const_), py::arg("x"))
      .def("__call__", py::overload_cast<cplx>(&Lift::operator(), py::const_), py::arg("z"))
      .def("derivative", [](const Lift& F, double x) { return F.jet(x).d; }, py::arg("x"))
      .def("__repr__", &Lift::describe);

  m.def(
      "rotation_number",
      [](const Lift& F, std::int64_t n) {
        const RotationEstimate e = rotation_number_real(F, n);
        return py::make_tuple(e.value, e.bound);
      },
      py::arg("lift"), py::arg("n") = 100000, "Returns (estimate, bound).");
  m.def(
      "rotation_number_cf", [](const Lift& F, int depth) { return quotient_list(rotation_number_cf(F, depth)); },
      py::arg("lift"), py::arg("depth"));

  m.def(
      "solve_parameter",
      [](const std::string& target, double tol, const std::string& family, double c, const std::string& precision) {
        const ParameterSolution s = solve_parameter(family_spec(family, c, precision), parse_cf(target, 64), tol);
        py::dict d;
        d["theta"] = s.theta;
        d["theta_digits"] = s.theta_ext.str(40);
        d["rho_bound"] = s.rho_bound;
        d["bisection_steps"] = s.bisection_steps;
        return d;
      },
      py::arg("target"), py::arg("tol") = 1e-10, py::arg("family") = "arnold", py::arg("c") = 0.0,
      py::arg("precision") = "double");
  m.def(
      "tongue_boundary",
      [](std::int64_t p, std::int64_t q, const std::string& side, double tol, const std::string& family, double c) {
        if (side != "left" && side != "right") throw ParameterError("side must be left or right");
        const TongueBoundary b = tongue_boundary(family_spec(family, c, "double"), p, q,
                                                 side == "left" ? TongueSide::Left : TongueSide::Right, tol);
        py::dict d;
        d["theta"] = b.theta;
        d["orbit_point"] = b.orbit_point;
        d["multiplier"] = b.multiplier;
        d["residual"] = b.residual;
        return d;
      },
      py::arg("p"), py::arg("q"), py::arg("side"), py::arg("tol") = 1e-12, py::arg("family") = "arnold",
      py::arg("c") = 0.0);

  m.def(
      "renorm_orbit",
      [](const Lift& F, std::int64_t r0, int depth) {
        const OrbitLog log = renorm_orbit(base_pair(F, r0), depth);
        py::list rows;
        for (const auto& r : log.rows) {
          py::dict d;
          d["m"] = r.m;
          d["height"] = r.height.is_infinite() ? py::object(py::none()) : py::object(py::int_(r.height.value()));
          d["len_eta"] = r.len_eta;
          d["len_xi"] = r.len_xi;
          d["ratio"] = r.ratio;
          rows.append(d);
        }
        return rows;
      },
      py::arg("lift"), py::arg("r0"), py::arg("depth"));

  m.def(
      "gamma_curve",
      [](double theta, std::int64_t k, int sign, const std::vector<double>& ys) {
        const GammaCurve g = gamma_curve(theta, k, sign, ys);
        return py::make_tuple(g.x, g.residual);
      },
      py::arg("theta"), py::arg("k"), py::arg("sign"), py::arg("im_values"), "Returns (x, residual) lists.");

  m.def(
      "julia_grid",
      [](const Lift& F, cplx center, double width, double height, int resolution, std::int64_t budget) {
        const ComplexWindow w{center, width, height, resolution};
        LabeledGrid g;
        {
          py::gil_scoped_release release;
          g = julia_grid(F, w, budget);
        }
        return label_array(g);
      },
      py::arg("lift"), py::arg("center"), py::arg("width"), py::arg("height"), py::arg("resolution"),
      py::arg("budget") = 200, "Pixel labels, row 0 at the top: 0 escaped, 1 bounded.");

  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const lab::ExperimentConfig cfg = lab::config_from_json(nlohmann::json::parse(config_json));
        lab::ExperimentReport r;
        {
          py::gil_scoped_release release;
          r = lab::run(cfg);
        }
        return r.to_json().dump();
      },
      py::arg("config_json"), "Runs one lab command; takes and returns JSON text.");
}
