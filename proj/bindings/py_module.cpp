#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "solvq/classifier.hpp"
#include "solvq/criteria.hpp"
#include "solvq/dfunc.hpp"
#include "solvq/expression.hpp"
#include "solvq/green.hpp"
#include "solvq/quadrature.hpp"

namespace py = pybind11;
using namespace solvq;

namespace {

// pybind11 cannot hold a shared_ptr-to-const directly; wrap it by value.
struct PyPair {
  PairPtr p;
};

Space space_from(const std::string& s) { return parse_space(s); }

py::dict verdict_dict(const SolvabilityVerdict& v) {
  py::dict d;
  d["space"] = v.space.label();
  d["decision"] = to_string(v.decision);
  d["route"] = v.route;
  d["mode"] = to_string(v.mode);
  py::list ev;
  for (const auto& e : v.evidence) {
    py::dict je;
    je["name"] = e.name;
    je["status"] = e.status;
    je["value"] = e.value;
    je["confidence"] = e.confidence;
    ev.append(je);
  }
  d["evidence"] = ev;
  d["caveats"] = v.caveats;
  return d;
}

Fn forcing_from(const py::object& f) {
  if (py::isinstance<py::str>(f)) return parse_expression(f.cast<std::string>());
  auto callable = f.cast<std::function<double(double)>>();
  return [callable](double x) { return callable(x); };
}

GridPolicy policy_for(const PairPtr& pair, double x_max) {
  GridPolicy p = GridPolicy::for_pair(pair);
  if (x_max > 0) p.x_max = x_max;
  return p;
}

}  // namespace

PYBIND11_MODULE(_solvq, m) {
  m.doc() = "correct-solvability criteria and the explicit solution operator "
            "for -r(x) y' + q(x) y = f with vanishing boundary values";

  py::class_<PyPair>(m, "CoefficientPair")
      .def("r", [](const PyPair& p, double x) { return p.p->r(x); })
      .def("q", [](const PyPair& p, double x) { return p.p->q(x); })
      .def("describe", [](const PyPair& p) { return p.p->describe(); });

  m.def("make_constant",
        [](double r0, double q0) { return PyPair{make_constant(r0, q0)}; },
        py::arg("r0"), py::arg("q0"));
  m.def("make_sine_power",
        [](double theta) { return PyPair{make_sine_power(theta)}; },
        py::arg("theta"));
  m.def("make_exp_osc",
        [](double a, double b, double g) { return PyPair{make_exp_osc(a, b, g)}; },
        py::arg("alpha"), py::arg("beta"), py::arg("gamma"));
  m.def("make_expr",
        [](const std::string& r, const std::string& q) {
          return PyPair{make_expr(r, q)};
        },
        py::arg("r"), py::arg("q"));
  m.def("scale_pair",
        [](const PyPair& pair, double c) { return PyPair{scale_pair(pair.p, c)}; },
        py::arg("pair"), py::arg("c"));

  m.def(
      "d_of_x",
      [](const PyPair& pair, double x, double tol) {
        DSolveResult r = d_of_x(pair.p, x, tol);
        return py::make_tuple(r.d, r.residual);
      },
      py::arg("pair"), py::arg("x"), py::arg("tol") = 1e-10);

  m.def(
      "scan_d",
      [](const PyPair& pair, const std::vector<double>& xs, double tol) {
        LocalizationProfile prof = scan_d(pair.p, xs, tol);
        py::dict d;
        py::list lx, ld, lr;
        for (const auto& s : prof.samples) {
          lx.append(s.x);
          ld.append(s.d);
          lr.append(s.residual);
        }
        d["x"] = lx;
        d["d"] = ld;
        d["residual"] = lr;
        d["d0_estimate"] = prof.d0_estimate;
        return d;
      },
      py::arg("pair"), py::arg("xs"), py::arg("tol") = 1e-10);

  m.def(
      "s1_s2_diverge",
      [](const PyPair& pair, double X) {
        SDivergence s = s1_s2_diverge(pair.p, X);
        py::dict d;
        d["s1_partial"] = s.s1_partial;
        d["s2_partial"] = s.s2_partial;
        d["s1"] = to_string(s.s1);
        d["s2"] = to_string(s.s2);
        d["confidence"] = s.confidence;
        return d;
      },
      py::arg("pair"), py::arg("X") = 64.0);

  m.def(
      "M_p_at",
      [](const PyPair& pair, double p, double x, double tol) {
        return M_p_at(pair.p, p, x, tol).value;
      },
      py::arg("pair"), py::arg("p"), py::arg("x"), py::arg("tol") = 1e-9);
  m.def(
      "M_1_at",
      [](const PyPair& pair, double x, double tol) {
        return M_1_at(pair.p, x, tol).value;
      },
      py::arg("pair"), py::arg("x"), py::arg("tol") = 1e-9);
  m.def(
      "A_at",
      [](const PyPair& pair, double x, double tol) {
        return A_at(pair.p, x, tol).value;
      },
      py::arg("pair"), py::arg("x"), py::arg("tol") = 1e-9);

  m.def(
      "classify",
      [](const PyPair& pair, const std::string& space, double x_max) {
        return verdict_dict(
            classify(pair.p, space_from(space), policy_for(pair.p, x_max)));
      },
      py::arg("pair"), py::arg("space"), py::arg("x_max") = 0.0);

  m.def(
      "classify_example8",
      [](double alpha, double beta, double gamma, const std::string& space) {
        return verdict_dict(
            classify_example8(alpha, beta, gamma, space_from(space)));
      },
      py::arg("alpha"), py::arg("beta"), py::arg("gamma"), py::arg("space"));

  m.def(
      "apply_G",
      [](const PyPair& pair, const py::object& f, double x, double tol) {
        GreenApply g = apply_G(pair.p, forcing_from(f), x, tol);
        return py::make_tuple(g.y, g.err);
      },
      py::arg("pair"), py::arg("f"), py::arg("x"), py::arg("tol") = 1e-8);

  m.def(
      "solve_on_grid",
      [](const PyPair& pair, const py::object& f,
         const std::vector<double>& xs, double tol) {
        SolutionCurve c = solve_on_grid(pair.p, forcing_from(f), xs, tol);
        py::dict d;
        d["x"] = c.xs;
        d["y"] = c.ys;
        d["err"] = c.per_point_error;
        return d;
      },
      py::arg("pair"), py::arg("f"), py::arg("xs"), py::arg("tol") = 1e-8);

  m.def(
      "norm_bracket",
      [](const PyPair& pair, double p, int n_samples, std::uint64_t seed,
         double x_max) {
        NormBracket nb = norm_bracket(pair.p, p, n_samples, seed, 1e-8,
                                      policy_for(pair.p, x_max));
        py::dict d;
        d["lower_empirical"] = nb.lower_empirical;
        d["upper_bound"] = nb.upper_bound;
        d["M_value"] = nb.M_value;
        d["kappa"] = nb.kappa;
        d["contained"] = nb.contained;
        return d;
      },
      py::arg("pair"), py::arg("p"), py::arg("n_samples") = 50,
      py::arg("seed") = 0, py::arg("x_max") = 64.0);

  m.attr("__version__") = "1.0.0";
}
