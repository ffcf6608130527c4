"""Solvers for pseudomonotone variational inequalities.

The heavy lifting lives in the compiled extension ``visolve._core``; this
package re-exports its public names.
"""

from ._core import (  # noqa: F401
    AlgorithmKind,
    AlgorithmSummary,
    ConfigError,
    ControlProblem,
    ExperimentResult,
    ExperimentSpec,
    FeasibleSet,
    HilbertSpace,
    Preset,
    Problem,
    Rng,
    SolveResult,
    SolverConfig,
    StopReason,
    TraceRow,
    algorithm_from_name,
    algorithm_name,
    all_algorithms,
    all_presets,
    build_vi_problem,
    double_integrator_problem,
    initial_point,
    make_problem,
    minty_certificate,
    oscillator_problem,
    parse_config,
    preset_from_name,
    preset_name,
    radial_argmin_problem,
    random_affine_problem,
    run_experiment,
    soft_sphere_problem,
    solve,
    switching_times,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
