"""End-to-end smoke tests for the Python bindings."""

import math

import pytest

import visolve as vs


def test_module_surface():
    assert vs.__version__
    names = [vs.algorithm_name(kind) for kind in vs.all_algorithms()]
    assert "tseng_inertial" in names
    assert len(names) == 9
    assert vs.algorithm_from_name("segm") == vs.AlgorithmKind.SEGM
    assert vs.algorithm_from_name("warp_drive") is None
    assert vs.preset_name(vs.Preset.EXAMPLE2) == "example2"
    assert vs.preset_from_name("control41") == vs.Preset.CONTROL41


def test_spaces_and_sets():
    space = vs.HilbertSpace.euclidean(3)
    assert space.dim() == 3
    assert space.inner([1.0, 2.0, 3.0], [4.0, 5.0, 6.0]) == 32.0
    ball = vs.FeasibleSet.ball(space, [0.0, 0.0, 0.0], 1.0)
    projected = ball.project([2.0, 0.0, 0.0])
    assert abs(projected[0] - 1.0) < 1e-15
    assert ball.contains(projected, 0.0)


def test_solve_small_affine():
    problem = vs.random_affine_problem(5, 1)
    config = vs.SolverConfig.paper_defaults()
    config.max_iters = 400
    rng = vs.Rng(1).split(5)
    x0 = [rng.uniform() for _ in range(5)]
    result = vs.solve(problem, config, vs.AlgorithmKind.TSENG_INERTIAL, x0, x0)
    assert result.iterations == 400
    assert result.reason == vs.StopReason.MAX_ITERS
    assert problem.space().norm(result.x) < 0.05
    assert len(result.trace) == 400
    rows = result.trace
    assert rows[0].n == 1
    assert rows[-1].op_evals == 2 * 400
    assert rows[-1].error < rows[0].error


def test_control_problem_round_trip():
    control = vs.oscillator_problem(50)
    u = [1.0] * 50
    assert abs(control.objective(u) - math.sin(3 * math.pi)) < 1e-4
    states = control.simulate(u)
    assert len(states) == 51
    assert abs(states[-1][0] - 2.0) < 1e-3

    problem = vs.build_vi_problem(control)
    assert problem.space().dim() == 50

    assert vs.switching_times([1.0] * 4 + [-1.0] * 4, 2.0) == [1.0]


def test_run_experiment(tmp_path):
    spec = vs.parse_config(
        "preset = example2\nm = 5\nseed = 1\nalgos = tseng_inertial\nmax_iters = 25\n"
    )
    spec.out_dir = str(tmp_path)
    result = vs.run_experiment(spec)
    assert len(result.summaries) == 1
    summary = result.summaries[0]
    assert summary.algorithm == vs.AlgorithmKind.TSENG_INERTIAL
    assert summary.iterations == 25
    assert summary.op_evals == 50
    assert (tmp_path / "summary.csv").exists()
    assert (tmp_path / "trace_tseng_inertial.csv").exists()
    assert len(result.initial_point) == 5


def test_config_errors():
    with pytest.raises(vs.ConfigError):
        vs.parse_config("preset = example2\nphi = 1.5\n")
    with pytest.raises(vs.ConfigError):
        vs.parse_config("m = 5\n")  # no preset


def test_minty_certificate():
    problem = vs.random_affine_problem(4, 2)
    value = vs.minty_certificate(problem, [0.0] * 4, 200, 7)
    assert value >= -1e-8
