// Python bindings for the VI solver library: spaces, feasible sets, problem
// presets, the solvers, and the experiment harness.
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "visolve/harness.hpp"
#include "visolve/optimal_control.hpp"
#include "visolve/problem.hpp"
#include "visolve/solver.hpp"

namespace py = pybind11;
using namespace visolve;

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Solvers for pseudomonotone variational inequalities";

  py::class_<Rng>(mod, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("split", &Rng::split, py::arg("stream"))
      .def("uniform", py::overload_cast<>(&Rng::uniform))
      .def("uniform", py::overload_cast<double, double>(&Rng::uniform), py::arg("lo"),
           py::arg("hi"))
      .def("normal", &Rng::normal);

  py::class_<HilbertSpace>(mod, "HilbertSpace")
      .def_static("euclidean", &HilbertSpace::euclidean, py::arg("dim"))
      .def_static("weighted", &HilbertSpace::weighted, py::arg("weights"))
      .def_static("uniform", &HilbertSpace::uniform, py::arg("intervals"), py::arg("horizon"))
      .def_static("l2_grid", &HilbertSpace::l2_grid, py::arg("intervals"))
      .def("dim", &HilbertSpace::dim)
      .def("weights", &HilbertSpace::weights)
      .def("inner", &HilbertSpace::inner, py::arg("x"), py::arg("y"))
      .def("norm", &HilbertSpace::norm, py::arg("x"))
      .def("distance", &HilbertSpace::distance, py::arg("x"), py::arg("y"));

  py::class_<FeasibleSet>(mod, "FeasibleSet")
      .def_static("half_space", &FeasibleSet::half_space, py::arg("space"), py::arg("normal"),
                  py::arg("offset"))
      .def_static("box", &FeasibleSet::box, py::arg("space"), py::arg("lower"), py::arg("upper"))
      .def_static("ball", &FeasibleSet::ball, py::arg("space"), py::arg("center"),
                  py::arg("radius"))
      .def("project", &FeasibleSet::project, py::arg("x"))
      .def("violation", &FeasibleSet::violation, py::arg("x"))
      .def("contains", &FeasibleSet::contains, py::arg("x"), py::arg("tol") = 0.0)
      .def("sample", &FeasibleSet::sample, py::arg("rng"));

  py::class_<Problem>(mod, "Problem")
      .def(py::init<HilbertSpace, FeasibleSet, Operator, std::optional<double>,
                    std::optional<Vector>>(),
           py::arg("space"), py::arg("set"), py::arg("op"),
           py::arg("lipschitz") = std::nullopt, py::arg("known_solution") = std::nullopt)
      .def("space", &Problem::space, py::return_value_policy::reference_internal)
      .def("set", &Problem::set, py::return_value_policy::reference_internal)
      .def("evaluate", &Problem::evaluate, py::arg("x"))
      .def("project", &Problem::project, py::arg("x"))
      .def("eval_count", &Problem::eval_count)
      .def("projection_count", &Problem::projection_count)
      .def("lipschitz", [](const Problem& p) { return p.lipschitz(); })
      .def("known_solution", [](const Problem& p) { return p.known_solution(); })
      .def("with_fresh_counters", &Problem::with_fresh_counters);

  mod.def("radial_argmin_problem", &radial_argmin_problem, py::arg("m"));
  mod.def("random_affine_problem", &random_affine_problem, py::arg("m"), py::arg("seed"));
  mod.def("soft_sphere_problem", &soft_sphere_problem, py::arg("intervals") = 200);
  mod.def(
      "minty_certificate",
      [](const Problem& problem, const Vector& candidate, std::size_t samples,
         std::uint64_t seed) {
        Rng rng(seed);
        return minty_certificate(problem, candidate, samples, rng);
      },
      py::arg("problem"), py::arg("candidate"), py::arg("samples"), py::arg("seed"));

  py::enum_<AlgorithmKind>(mod, "AlgorithmKind")
      .value("TSENG_INERTIAL", AlgorithmKind::TsengInertial)
      .value("TSENG_VISCOSITY", AlgorithmKind::TsengViscosity)
      .value("PGM", AlgorithmKind::PGM)
      .value("PRGM", AlgorithmKind::PRGM)
      .value("EGM", AlgorithmKind::EGM)
      .value("TEGM", AlgorithmKind::TEGM)
      .value("SEGM", AlgorithmKind::SEGM)
      .value("MATEGM", AlgorithmKind::MaTEGM)
      .value("VISEGM", AlgorithmKind::ViSEGM);

  py::enum_<StopReason>(mod, "StopReason")
      .value("TOLERANCE", StopReason::Tolerance)
      .value("MAX_ITERS", StopReason::MaxIters)
      .value("DIVERGENCE", StopReason::Divergence);

  mod.def("algorithm_name", [](AlgorithmKind k) { return to_string(k); });
  mod.def("algorithm_from_name",
          [](const std::string& name) { return algorithm_from_string(name); });
  mod.def("all_algorithms", []() { return all_algorithms(); });

  py::class_<SolverConfig>(mod, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("delta", &SolverConfig::delta)
      .def_readwrite("gamma1", &SolverConfig::gamma1)
      .def_readwrite("phi", &SolverConfig::phi)
      .def_readwrite("max_iters", &SolverConfig::max_iters)
      .def_readwrite("stop_tol", &SolverConfig::stop_tol)
      .def_readwrite("record_trace", &SolverConfig::record_trace)
      .def_readwrite("fixed_gamma", &SolverConfig::fixed_gamma)
      .def_readwrite("armijo_alpha", &SolverConfig::armijo_alpha)
      .def_readwrite("armijo_ell", &SolverConfig::armijo_ell)
      .def_readwrite("armijo_phi", &SolverConfig::armijo_phi)
      .def("set_power_schedules", &SolverConfig::set_power_schedules, py::arg("eps_scale"),
           py::arg("phi_scale"))
      .def("set_contraction_scaling",
           [](SolverConfig& c, double coeff) { c.contraction = Contraction::scaling(coeff); },
           py::arg("coeff"))
      .def_static("paper_defaults", &SolverConfig::paper_defaults)
      .def_static("control_defaults", &SolverConfig::control_defaults);

  py::class_<TraceRow>(mod, "TraceRow")
      .def_readonly("n", &TraceRow::n)
      .def_readonly("D_n", &TraceRow::D_n)
      .def_readonly("E_n", &TraceRow::E_n)
      .def_readonly("gamma_n", &TraceRow::gamma_n)
      .def_readonly("delta_n", &TraceRow::delta_n)
      .def_readonly("error", &TraceRow::error)
      .def_readonly("op_evals", &TraceRow::op_evals)
      .def_readonly("elapsed_ns", &TraceRow::elapsed_ns);

  py::class_<SolveResult>(mod, "SolveResult")
      .def_readonly("x", &SolveResult::x)
      .def_readonly("reason", &SolveResult::reason)
      .def_readonly("iterations", &SolveResult::iterations)
      .def_property_readonly("trace",
                             [](const SolveResult& r) { return r.trace.rows; });

  mod.def(
      "solve",
      [](const Problem& problem, const SolverConfig& config, AlgorithmKind kind, Vector x0,
         Vector x1) { return solve(problem, config, kind, std::move(x0), std::move(x1)); },
      py::arg("problem"), py::arg("config"), py::arg("kind"), py::arg("x0"), py::arg("x1"));

  py::class_<ControlProblem, std::shared_ptr<ControlProblem>>(mod, "ControlProblem")
      .def("state_dim", &ControlProblem::state_dim)
      .def("intervals", &ControlProblem::intervals)
      .def("horizon", &ControlProblem::horizon)
      .def("simulate", &ControlProblem::simulate, py::arg("u"))
      .def("objective", &ControlProblem::objective, py::arg("u"))
      .def("gradient", &ControlProblem::gradient, py::arg("u"));

  mod.def("oscillator_problem",
          [](std::size_t intervals) {
            return std::const_pointer_cast<ControlProblem>(oscillator_problem(intervals));
          },
          py::arg("intervals") = 100);
  mod.def("double_integrator_problem",
          [](std::size_t intervals) {
            return std::const_pointer_cast<ControlProblem>(double_integrator_problem(intervals));
          },
          py::arg("intervals") = 100);
  mod.def("build_vi_problem",
          [](std::shared_ptr<ControlProblem> control) {
            return build_vi_problem(std::shared_ptr<const ControlProblem>(control));
          },
          py::arg("control"));
  mod.def("switching_times", &switching_times, py::arg("u"), py::arg("horizon"));

  py::enum_<Preset>(mod, "Preset")
      .value("EXAMPLE1", Preset::Example1)
      .value("EXAMPLE2", Preset::Example2)
      .value("EXAMPLE3", Preset::Example3)
      .value("CONTROL41", Preset::Control41)
      .value("CONTROL42", Preset::Control42);

  mod.def("preset_name", [](Preset p) { return to_string(p); });
  mod.def("preset_from_name", [](const std::string& name) { return preset_from_string(name); });
  mod.def("all_presets", []() { return all_presets(); });

  py::class_<ExperimentSpec>(mod, "ExperimentSpec")
      .def(py::init<>())
      .def_readwrite("preset", &ExperimentSpec::preset)
      .def_readwrite("m", &ExperimentSpec::m)
      .def_readwrite("seed", &ExperimentSpec::seed)
      .def_readwrite("algorithms", &ExperimentSpec::algorithms)
      .def_readwrite("max_iters", &ExperimentSpec::max_iters)
      .def_readwrite("stop_tol", &ExperimentSpec::stop_tol)
      .def_readwrite("out_dir", &ExperimentSpec::out_dir)
      .def_readwrite("phi", &ExperimentSpec::phi)
      .def_readwrite("gamma1", &ExperimentSpec::gamma1)
      .def_readwrite("delta", &ExperimentSpec::delta)
      .def_readwrite("eps_scale", &ExperimentSpec::eps_scale)
      .def_readwrite("phi_scale", &ExperimentSpec::phi_scale)
      .def_readwrite("f_coeff", &ExperimentSpec::f_coeff)
      .def_readwrite("fixed_gamma", &ExperimentSpec::fixed_gamma);

  py::class_<AlgorithmSummary>(mod, "AlgorithmSummary")
      .def_readonly("algorithm", &AlgorithmSummary::algorithm)
      .def_readonly("reason", &AlgorithmSummary::reason)
      .def_readonly("iterations", &AlgorithmSummary::iterations)
      .def_readonly("final_error", &AlgorithmSummary::final_error)
      .def_readonly("final_residual", &AlgorithmSummary::final_residual)
      .def_readonly("op_evals", &AlgorithmSummary::op_evals)
      .def_readonly("elapsed_ns", &AlgorithmSummary::elapsed_ns)
      .def_readonly("x", &AlgorithmSummary::x);

  py::class_<ExperimentResult>(mod, "ExperimentResult")
      .def_readonly("initial_point", &ExperimentResult::initial_point)
      .def_readonly("summaries", &ExperimentResult::summaries)
      .def_readonly("trace_files", &ExperimentResult::trace_files)
      .def_readonly("summary_file", &ExperimentResult::summary_file);

  py::register_exception<ConfigError>(mod, "ConfigError");
  mod.def("parse_config", &parse_config, py::arg("text"));
  mod.def("make_problem", &make_problem, py::arg("spec"));
  mod.def("initial_point", &initial_point, py::arg("spec"));
  mod.def("run_experiment", &run_experiment, py::arg("spec"));
}
