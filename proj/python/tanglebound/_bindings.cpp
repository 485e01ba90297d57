#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tanglebound/bound.hpp"
#include "tanglebound/charcurve.hpp"
#include "tanglebound/envelope.hpp"
#include "tanglebound/qstate.hpp"

namespace py = pybind11;
using namespace tanglebound;

PYBIND11_MODULE(_tanglebound, m) {
  m.doc() = "Three-qubit tangle bounds: states, characteristic curve, convex "
            "envelopes, and witness-constrained solvers";

  py::enum_<StateKind>(m, "StateKind")
      .value("GHZ", StateKind::Ghz)
      .value("GHZ_MINUS", StateKind::GhzMinus)
      .value("W", StateKind::W)
      .value("W_BAR", StateKind::WBar);

  py::enum_<Measure>(m, "Measure")
      .value("TAU3", Measure::Tau3)
      .value("TAU3_SQ", Measure::Tau3Sq);

  py::enum_<SearchSpaceKind>(m, "SearchSpaceKind")
      .value("FULL", SearchSpaceKind::Full)
      .value("SYMMETRIC", SearchSpaceKind::Symmetric)
      .value("SPAN", SearchSpaceKind::Span);

  py::enum_<SolveStatus>(m, "SolveStatus")
      .value("CONVERGED", SolveStatus::Converged)
      .value("MAX_ITER", SolveStatus::MaxIter)
      .value("TRIVIAL_ZERO", SolveStatus::TrivialZero);

  py::class_<PureState>(m, "PureState")
      .def(py::init<const Amplitudes&>(), py::arg("amplitudes"),
           "Validating constructor; amplitudes must be normalized")
      .def_static("normalized", &PureState::normalized, py::arg("amplitudes"),
                  "Renormalizing constructor")
      .def_property_readonly("amplitudes",
                             [](const PureState& s) { return s.amplitudes(); })
      .def("overlap", &PureState::overlap, py::arg("other"), "<self|other>")
      .def("__repr__", [](const PureState& s) {
        return "<PureState tau3=" + std::to_string(tau3(s)) + ">";
      });

  m.def("named_state", &named_state, py::arg("kind"));
  m.def("basis_state", &basis_state, py::arg("index"));

  m.def("tau3", &tau3, py::arg("state"), "Three-tangle of a pure state");
  m.def("tau3_sq", &tau3_sq, py::arg("state"));
  m.def(
      "three_tangle",
      [](const PureState& s) {
        const TangleBreakdown b = three_tangle(s);
        py::dict d;
        d["d1"] = b.d1;
        d["d2"] = b.d2;
        d["d3"] = b.d3;
        d["tau3"] = b.tau3;
        d["tau3_sq"] = b.tau3_sq;
        return d;
      },
      py::arg("state"), "Hyperdeterminant terms together with the tangle values");

  py::class_<Observable>(m, "Observable")
      .def(py::init<const Matrix8&, std::string>(), py::arg("matrix"),
           py::arg("label") = "")
      .def_property_readonly("matrix",
                             [](const Observable& o) { return o.matrix(); })
      .def_property_readonly("label",
                             [](const Observable& o) { return o.label(); })
      .def("expectation", &Observable::expectation, py::arg("state"))
      .def("eigenvalue_range", &Observable::eigenvalue_range);

  m.def("projector_witness", &projector_witness, py::arg("phi"), py::arg("alpha"),
        "alpha*1 - |phi><phi| with alpha in [0,1]");
  m.def("skew_witness", &skew_witness, py::arg("omega"),
        "-pi_GHZ - omega |GHZ><W| - conj(omega) |W><GHZ|");

  m.def("apply_local_unitary", &apply_local_unitary, py::arg("state"),
        py::arg("ua"), py::arg("ub"), py::arg("uc"));
  m.def(
      "permute_qubits",
      [](const PureState& s, const std::array<int, 3>& perm) {
        return permute_qubits(s, perm);
      },
      py::arg("state"), py::arg("perm"));
  m.def("permutation_symmetrize", &permutation_symmetrize, py::arg("state"));
  m.def("symmetric_subspace_weight", &symmetric_subspace_weight, py::arg("state"));

  m.def(
      "z_state", [](double q, double phi) { return z_state(GhzwPoint(q, phi)); },
      py::arg("q"), py::arg("phi"),
      "sqrt(q)|GHZ> - e^{i phi} sqrt(1-q)|W>");
  m.def(
      "tau3_closed_form",
      [](double q, double phi) { return tau3_closed_form(q, phi); }, py::arg("q"),
      py::arg("phi") = 0.0);
  m.def("tau3_curve_derivative", &tau3_curve_derivative, py::arg("q"));
  m.def("benchmarks", []() {
    const AnalyticBenchmarks& b = benchmarks();
    py::dict d;
    d["q0"] = b.q0;
    d["r0"] = b.r0;
    d["q1"] = b.q1;
    d["r1"] = b.r1;
    return d;
  });
  m.def("restricted_bound_analytic", &restricted_bound_analytic, py::arg("p"));
  m.def("skew_qmin", &skew_qmin, py::arg("p"), py::arg("phi"), py::arg("omega"));

  py::class_<SampledCurve>(m, "SampledCurve")
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("xs"),
           py::arg("ys"))
      .def_readonly("xs", &SampledCurve::xs)
      .def_readonly("ys", &SampledCurve::ys);

  py::class_<ConvexEnvelope>(m, "ConvexEnvelope")
      .def_property_readonly("knots",
                             [](const ConvexEnvelope& e) {
                               std::vector<std::pair<double, double>> out;
                               for (const auto& k : e.knots) out.push_back({k.x, k.y});
                               return out;
                             })
      .def_property_readonly("affine_regions",
                             [](const ConvexEnvelope& e) {
                               std::vector<std::pair<double, double>> out;
                               for (const auto& r : e.affine_regions) {
                                 out.push_back({r.lo, r.hi});
                               }
                               return out;
                             })
      .def("eval", [](const ConvexEnvelope& e, double x) { return e.eval(x); },
           py::arg("x"));

  m.def("lower_convex_envelope", &lower_convex_envelope, py::arg("curve"));
  m.def(
      "convexity_diagnostic",
      [](const SampledCurve& c, double tol) {
        const ConvexityReport rep = convexity_diagnostic(c, tol);
        std::vector<std::pair<double, double>> regions;
        for (const auto& r : rep.nonconvex_regions) regions.push_back({r.lo, r.hi});
        py::dict d;
        d["nonconvex_regions"] = regions;
        d["second_differences"] = rep.second_differences;
        return d;
      },
      py::arg("curve"), py::arg("tolerance") = 1e-9);

  py::class_<SearchSpace>(m, "SearchSpace")
      .def_static("full", &SearchSpace::full)
      .def_static("symmetric", &SearchSpace::symmetric)
      .def_static("span", &SearchSpace::span, py::arg("a"), py::arg("b"))
      .def_property_readonly("kind", &SearchSpace::kind)
      .def_property_readonly("dimension", &SearchSpace::dimension)
      .def_property_readonly("basis",
                             [](const SearchSpace& s) { return s.basis(); })
      .def("embed", &SearchSpace::embed, py::arg("coefficients"));

  py::class_<OptimizerSettings>(m, "OptimizerSettings")
      .def(py::init<>())
      .def_readwrite("restarts", &OptimizerSettings::restarts)
      .def_readwrite("r_box_lo", &OptimizerSettings::r_box_lo)
      .def_readwrite("r_box_hi", &OptimizerSettings::r_box_hi)
      .def_readwrite("inner_tolerance", &OptimizerSettings::inner_tolerance)
      .def_readwrite("outer_tolerance", &OptimizerSettings::outer_tolerance)
      .def_readwrite("seed", &OptimizerSettings::seed)
      .def_readwrite("max_inner_iterations", &OptimizerSettings::max_inner_iterations);

  py::class_<BoundProblem>(m, "BoundProblem")
      .def(py::init<>())
      .def_readwrite("witnesses", &BoundProblem::witnesses)
      .def_readwrite("measured", &BoundProblem::measured)
      .def_readwrite("measure", &BoundProblem::measure)
      .def_readwrite("space", &BoundProblem::space)
      .def_readwrite("settings", &BoundProblem::settings);

  py::class_<TracePoint>(m, "TracePoint")
      .def_readonly("r", &TracePoint::r)
      .def_readonly("value", &TracePoint::value);

  py::class_<BoundResult>(m, "BoundResult")
      .def_readonly("epsilon", &BoundResult::epsilon)
      .def_readonly("r_star", &BoundResult::r_star)
      .def_readonly("inner_minimizer", &BoundResult::inner_minimizer)
      .def_readonly("trace", &BoundResult::trace)
      .def_readonly("status", &BoundResult::status);

  py::class_<InnerResult>(m, "InnerResult")
      .def_readonly("value", &InnerResult::value)
      .def_readonly("argmin", &InnerResult::argmin)
      .def_readonly("converged", &InnerResult::converged);

  py::class_<ConstrainedMinimum>(m, "ConstrainedMinimum")
      .def_readonly("value", &ConstrainedMinimum::value)
      .def_readonly("argmin", &ConstrainedMinimum::argmin)
      .def_readonly("feasible", &ConstrainedMinimum::feasible)
      .def_readonly("residual", &ConstrainedMinimum::residual);

  py::class_<Certification>(m, "Certification")
      .def_readonly("upper_bound", &Certification::upper_bound)
      .def_readonly("residual", &Certification::residual)
      .def_readonly("valid", &Certification::valid);

  py::class_<EquivalenceReport>(m, "EquivalenceReport")
      .def_readonly("grid", &EquivalenceReport::grid)
      .def_readonly("dual", &EquivalenceReport::dual)
      .def_readonly("hull", &EquivalenceReport::hull)
      .def_readonly("max_discrepancy", &EquivalenceReport::max_discrepancy)
      .def_readonly("argmax", &EquivalenceReport::argmax)
      .def_readonly("min_symmetric_weight", &EquivalenceReport::min_symmetric_weight);

  m.def("inner_infimum", &inner_infimum, py::arg("problem"), py::arg("r"));
  m.def("legendre_bound", &legendre_bound, py::arg("problem"),
        py::call_guard<py::gil_scoped_release>(),
        "Certified lower bound on the mixed-state measure from witness data");
  m.def("constrained_minimum_at", &constrained_minimum_at, py::arg("problem"),
        py::arg("targets"), py::call_guard<py::gil_scoped_release>());
  m.def("constrained_pure_minimum", &constrained_pure_minimum, py::arg("problem"),
        py::arg("grid"), py::call_guard<py::gil_scoped_release>());
  m.def("bound_via_convexification", &bound_via_convexification, py::arg("problem"),
        py::arg("grid"), py::call_guard<py::gil_scoped_release>());
  m.def("equivalence_report", &equivalence_report, py::arg("problem"),
        py::arg("grid"), py::call_guard<py::gil_scoped_release>());
  m.def("fidelity_bound", &fidelity_bound, py::arg("p"),
        py::arg("measure") = Measure::Tau3,
        py::arg("settings") = OptimizerSettings{},
        py::arg("space") = SearchSpaceKind::Full,
        py::call_guard<py::gil_scoped_release>());
  m.def("noisy_ghz_fidelity", &noisy_ghz_fidelity, py::arg("gamma"));
  m.def(
      "certify_decomposition",
      [](const std::vector<double>& weights, const std::vector<PureState>& states,
         const Matrix8& target, Measure measure) {
        return certify_decomposition({weights, states}, target, measure);
      },
      py::arg("weights"), py::arg("states"), py::arg("target"),
      py::arg("measure") = Measure::Tau3);
}
