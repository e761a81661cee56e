// Python bindings for the barons core: domains, barriers, Newton solvers,
// the online learner, baselines, the experiment harness and property suites.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "barons/barons.hpp"
#include "barons/baselines.hpp"
#include "barons/checks.hpp"
#include "barons/config.hpp"
#include "barons/errors.hpp"
#include "barons/harness.hpp"
#include "barons/losses.hpp"
#include "barons/newton.hpp"

namespace py = pybind11;
using namespace barons;

namespace {

RunConfig config_from(const std::string& text, const std::vector<std::string>& overrides) {
  RunConfig cfg;
  std::istringstream in(text);
  apply_config(cfg, in, "<string>");
  for (const auto& o : overrides) apply_override(cfg, o);
  validate(cfg);
  return cfg;
}

struct PyRunResult {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<TraceRow> rows;
  std::vector<Vector> iterates;
  std::vector<double> regret;
  Vector comparator;
  double final_regret = 0.0;
  long landmark_updates = 0;
  long feasibility_violations = 0;
  double max_local_norm = 0.0;
};

PyRunResult run_from_config(const RunConfig& cfg) {
  ExperimentResult res = run_experiment(cfg);
  PyRunResult out;
  out.final_regret = summarize(res, cfg);
  const Comparator cmp = best_fixed_comparator(res.loss_log, res.barrier, res.center, cfg.shrink_c());
  out.comparator = cmp.w;
  out.regret = regret_curve(res.trace, cmp.w, res.loss_log);
  out.metadata = res.trace.metadata;
  out.rows = std::move(res.trace.rows);
  out.iterates = std::move(res.iterates);
  out.landmark_updates = res.landmark_updates;
  out.feasibility_violations = res.feasibility_violations;
  out.max_local_norm = res.max_local_norm;
  return out;
}

// pybind11 holders cannot be pointer-to-const; the core never mutates a barrier.
using PyBarrier = std::shared_ptr<Barrier>;

PyBarrier expose(BarrierPtr b) { return std::const_pointer_cast<Barrier>(std::move(b)); }

GradientBound bound_from(std::optional<double> b, std::optional<double> G, double R) {
  if (b.has_value() == G.has_value()) throw std::invalid_argument("give exactly one of b or G");
  if (b) return LocalNormBound{*b};
  return EuclideanBound{*G, R};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Barrier-regularized online Newton steps";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<NotSpd>(m, "NotSpd", error.ptr());
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", error.ptr());
  py::register_exception<NotInterior>(m, "NotInterior", error.ptr());
  py::register_exception<ZeroRow>(m, "ZeroRow", error.ptr());
  py::register_exception<InfeasibleWitness>(m, "InfeasibleWitness", error.ptr());
  py::register_exception<InvalidBounds>(m, "InvalidBounds", error.ptr());
  py::register_exception<PreconditionViolated>(m, "PreconditionViolated", error.ptr());
  py::register_exception<DivergenceDetected>(m, "DivergenceDetected", error.ptr());
  py::register_exception<NonPositiveReturn>(m, "NonPositiveReturn", error.ptr());
  py::register_exception<PredictionOutOfRange>(m, "PredictionOutOfRange", error.ptr());
  py::register_exception<IoError>(m, "IoError", error.ptr());
  py::register_exception<MaxIterExceeded>(m, "MaxIterExceeded", error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());

  py::class_<Polytope>(m, "Polytope")
      .def(py::init<const Matrix&, const Vector&, const Vector&>(), py::arg("A"), py::arg("b"), py::arg("witness"))
      .def_property_readonly("A", &Polytope::normals)
      .def_property_readonly("b", &Polytope::offsets)
      .def_property_readonly("witness", &Polytope::witness)
      .def_property_readonly("m", &Polytope::num_constraints)
      .def_property_readonly("d", &Polytope::dimension)
      .def("slacks", [](const Polytope& p, const Vector& w) { return slacks(p, w); })
      .def("contains", [](const Polytope& p, const Vector& w, double margin) { return is_strictly_feasible(p, w, margin); },
           py::arg("w"), py::arg("margin") = 0.0);

  m.def("build_box", &build_box, py::arg("d"), py::arg("lo"), py::arg("hi"));
  m.def("build_reduced_simplex", &build_reduced_simplex, py::arg("d"));
  m.def("lift_reduced_simplex", &lift_reduced_simplex, py::arg("reduced"));
  m.def("shrink_toward", &shrink_toward, py::arg("w"), py::arg("c"), py::arg("w_star"));

  py::class_<BarrierParams>(m, "BarrierParams")
      .def_readonly("M", &BarrierParams::M)
      .def_readonly("nu", &BarrierParams::nu);

  py::class_<Barrier, PyBarrier>(m, "Barrier")
      .def("value", &Barrier::value, py::arg("w"))
      .def("gradient", &Barrier::gradient, py::arg("w"))
      .def("hessian", &Barrier::hessian, py::arg("w"))
      .def("params", &Barrier::params)
      .def("is_interior", &Barrier::is_interior, py::arg("w"))
      .def_property_readonly("domain", &Barrier::domain, py::return_value_policy::reference_internal)
      .def_property_readonly("d", &Barrier::dimension);

  m.def(
      "log_barrier", [](const Polytope& p) { return expose(make_log_barrier(p)); }, py::arg("polytope"));
  m.def(
      "hybrid_barrier", [](PyBarrier psi, double nu, double R) { return expose(hybrid_compose(psi, nu, R)); },
      py::arg("psi"), py::arg("nu"), py::arg("R"));

  py::class_<NewtonResult>(m, "NewtonResult")
      .def_readonly("w", &NewtonResult::w)
      .def_readonly("decrement", &NewtonResult::decrement)
      .def_readonly("iterations", &NewtonResult::iterations);

  m.def(
      "newton_decrement",
      [](PyBarrier barrier, const Vector& shift, const Vector& w) {
        return newton_decrement(ShiftedObjective(std::move(barrier), shift), w);
      },
      py::arg("barrier"), py::arg("shift"), py::arg("w"), "Decrement of Phi(w) + <shift, w> at w.");
  m.def(
      "damped_newton_minimize",
      [](PyBarrier barrier, const Vector& shift, const Vector& w0, double tol, int max_iter) {
        return damped_newton_minimize(ShiftedObjective(std::move(barrier), shift), w0, tol, max_iter);
      },
      py::arg("barrier"), py::arg("shift"), py::arg("w0"), py::arg("tol") = kDefaultNewtonTol,
      py::arg("max_iter") = kDefaultNewtonMaxIter);
  m.def(
      "analytic_center", [](PyBarrier barrier, const Vector& w0) { return analytic_center(barrier, w0); },
      py::arg("barrier"), py::arg("w0"));

  py::class_<BaronsParams>(m, "Params")
      .def_readonly("eta", &BaronsParams::eta)
      .def_readonly("eps", &BaronsParams::eps)
      .def_readonly("alpha_hess", &BaronsParams::alpha_hess)
      .def_readonly("m_newton", &BaronsParams::m_newton)
      .def_readonly("landmark_threshold", &BaronsParams::landmark_threshold)
      .def_readonly("lambda_target", &BaronsParams::lambda_target)
      .def_readonly("M", &BaronsParams::M)
      .def_property_readonly("mode", [](const BaronsParams& p) { return to_string(p.mode); })
      .def_readonly("warnings", &BaronsParams::warnings);

  m.def(
      "compute_params",
      [](double M, double nu, long T, std::optional<double> c, std::optional<double> b, std::optional<double> G,
         double R, const std::string& mode) {
        const double cc = c ? *c : 1.0 / static_cast<double>(T);
        return compute_params({M, nu}, bound_from(b, G, R), T, cc, mode_from_string(mode));
      },
      py::arg("M"), py::arg("nu"), py::arg("T"), py::arg("c") = py::none(), py::kw_only(), py::arg("b") = py::none(),
      py::arg("G") = py::none(), py::arg("R") = 1.0, py::arg("mode") = "practical",
      "Step size and tolerance schedule for a local-norm bound b or a Euclidean bound (G, R).");
  m.def(
      "make_params",
      [](double M, double eta, double eps, double bound_scale, const std::string& mode, double alpha_hess) {
        return make_params(M, eta, eps, bound_scale, mode_from_string(mode), "b", alpha_hess);
      },
      py::arg("M"), py::arg("eta"), py::arg("eps"), py::arg("bound_scale") = 1.0, py::arg("mode") = "practical",
      py::arg("alpha_hess") = 0.001);
  m.def("newton_steps_for", &newton_steps_for, py::arg("eps"), py::arg("M"));

  py::class_<BaronsStats>(m, "Stats")
      .def_readonly("landmark_updates", &BaronsStats::landmark_updates)
      .def_readonly("inner_steps", &BaronsStats::inner_steps)
      .def_readonly("guard_events", &BaronsStats::guard_events)
      .def_readonly("decrement_checks", &BaronsStats::decrement_checks)
      .def_readonly("decrement_violations", &BaronsStats::decrement_violations);

  py::class_<RoundReport>(m, "RoundReport")
      .def_readonly("w_next", &RoundReport::w_next)
      .def_readonly("landmark_updated", &RoundReport::landmark_updated)
      .def_readonly("distance_to_landmark", &RoundReport::distance_to_landmark)
      .def_readonly("landmark_distance", &RoundReport::landmark_distance)
      .def_readonly("decrement", &RoundReport::decrement)
      .def_readonly("guard_engaged", &RoundReport::guard_engaged)
      .def_readonly("inner_decrements", &RoundReport::inner_decrements);

  py::class_<Barons>(m, "Barons")
      .def(py::init([](PyBarrier barrier, BaronsParams params, const Vector& w0, int monitor_every,
                       bool record_inner_decrements) {
             MonitorOptions mon;
             mon.monitor_every = monitor_every;
             mon.record_inner_decrements = record_inner_decrements;
             return std::make_unique<Barons>(std::move(barrier), std::move(params), w0, mon);
           }),
           py::arg("barrier"), py::arg("params"), py::arg("w0"), py::arg("monitor_every") = 50,
           py::arg("record_inner_decrements") = false)
      .def("round", &Barons::round, py::arg("g"), "Observe g at the current iterate and return the next one.")
      .def_property_readonly("w", &Barons::iterate)
      .def_property_readonly("s", [](const Barons& b) { return b.state().s; })
      .def_property_readonly("landmark", [](const Barons& b) { return b.state().u; })
      .def_property_readonly("t", [](const Barons& b) { return b.state().t; })
      .def_property_readonly("stats", [](const Barons& b) { return b.state().stats; })
      .def_property_readonly("params", &Barons::params)
      .def("landmark_distance", &Barons::landmark_distance);

  m.def(
      "ftrl_exact_round",
      [](PyBarrier barrier, const Vector& s, const Vector& w_prev) { return ftrl_exact_round(barrier, s, w_prev); },
      py::arg("barrier"), py::arg("s"), py::arg("w_prev"));
  m.def("project_simplex", &project_simplex, py::arg("v"));
  m.def("ogd_simplex_round", &ogd_simplex_round, py::arg("w"), py::arg("g"), py::arg("step"));
  m.def(
      "portfolio_loss",
      [](const Vector& w_reduced, const Vector& r) {
        const LossEvent e = portfolio_loss(w_reduced, r);
        return py::make_tuple(e.loss, e.g);
      },
      py::arg("w_reduced"), py::arg("r"), "Loss -log<r, w> and its gradient in reduced coordinates.");

  py::class_<TraceRow>(m, "TraceRow")
      .def_readonly("t", &TraceRow::t)
      .def_readonly("loss", &TraceRow::loss)
      .def_readonly("local_norm_g", &TraceRow::local_norm_g)
      .def_readonly("decrement", &TraceRow::decrement)
      .def_readonly("landmark_updated", &TraceRow::landmark_updated)
      .def_readonly("landmark_distance", &TraceRow::landmark_distance)
      .def_readonly("wall_time_us", &TraceRow::wall_time_us);

  py::class_<PyRunResult>(m, "RunResult")
      .def_readonly("metadata", &PyRunResult::metadata)
      .def_readonly("rows", &PyRunResult::rows)
      .def_readonly("iterates", &PyRunResult::iterates)
      .def_readonly("regret", &PyRunResult::regret)
      .def_readonly("comparator", &PyRunResult::comparator)
      .def_readonly("final_regret", &PyRunResult::final_regret)
      .def_readonly("landmark_updates", &PyRunResult::landmark_updates)
      .def_readonly("feasibility_violations", &PyRunResult::feasibility_violations)
      .def_readonly("max_local_norm", &PyRunResult::max_local_norm);

  m.def(
      "run",
      [](const std::string& config_text, const std::vector<std::string>& overrides) {
        return run_from_config(config_from(config_text, overrides));
      },
      py::arg("config_text") = "", py::arg("overrides") = std::vector<std::string>{},
      "Run an experiment from config text plus section.key=value overrides.");
  m.def(
      "run_file",
      [](const std::string& path, const std::vector<std::string>& overrides) {
        RunConfig cfg;
        apply_config_file(cfg, path);
        for (const auto& o : overrides) apply_override(cfg, o);
        validate(cfg);
        return run_from_config(cfg);
      },
      py::arg("path"), py::arg("overrides") = std::vector<std::string>{});
  m.def(
      "dump_config", [](const std::string& text, const std::vector<std::string>& overrides) {
        return dump_config(config_from(text, overrides));
      },
      py::arg("config_text") = "", py::arg("overrides") = std::vector<std::string>{});
  m.def(
      "read_trace",
      [](const std::string& path) {
        Trace t = read_csv(path);
        return py::make_tuple(t.metadata, t.rows);
      },
      py::arg("path"), "Read a trace CSV; returns (metadata, rows).");
  m.attr("TRACE_HEADER") = kTraceHeader;

  py::class_<InequalityCount>(m, "InequalityCount")
      .def_readonly("name", &InequalityCount::name)
      .def_readonly("passed", &InequalityCount::passed)
      .def_readonly("failed", &InequalityCount::failed);

  py::class_<CheckReport>(m, "CheckReport")
      .def_readonly("suite", &CheckReport::suite)
      .def_readonly("trials", &CheckReport::trials)
      .def_readonly("counts", &CheckReport::counts)
      .def_readonly("worst_gap", &CheckReport::worst_gap)
      .def_readonly("first_counterexample", &CheckReport::first_counterexample)
      .def("ok", &CheckReport::ok);

  m.def("check_suites", &check_suites);
  m.def("run_check", &run_check, py::arg("suite"), py::arg("seed") = 1, py::arg("trials") = 100);
}
