"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s``; the lines are also
collected in the terminal summary.
"""

import math
import time

import pytest

from conftest import ACCEPTANCE_LINES
from csfrot import cli
from csfrot.flow import FlowConfig, InitialCurveSpec, Mode, run
from csfrot.profile import ProfileSpec, power_btilde, validity_window
from csfrot.verify import (check_circle_consistency, check_comparison, check_curvature_algebra,
                           check_evolution_residuals, check_graph_preservation, check_longtime,
                           check_monotone_descent, check_static_identities,
                           check_validity_window)

HALF = ProfileSpec.power(0.5)


def wavy(c0, a):
    return InitialCurveSpec(c0, (Mode(1, a),))


def record(number, reports, elapsed, budget):
    reports = reports if isinstance(reports, list) else [reports]
    in_time = budget is None or elapsed < budget
    ok = all(r.passed for r in reports) and in_time
    worst = "; ".join(f"{r.name}={r.observed:.4g}({r.status})" for r in reports)
    limit = f" budget {budget:g}s" if budget else ""
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} [{elapsed:.2f}s{limit}] {worst}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


class Timed:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


@pytest.fixture(scope="module")
def timed_runs():
    """Run every trajectory the theorem-level criteria need, once."""
    out = {}
    with Timed() as t:
        out["circle"] = run(FlowConfig(HALF, InitialCurveSpec(-2.0), n=64, t_end=1.0,
                                       snapshot_every=0.1))
    out["circle_time"] = t.elapsed
    for key, init in (("graph_small", wavy(-2.0, 0.1)), ("graph_large", wavy(-3.0, 0.5))):
        with Timed() as t:
            out[key] = run(FlowConfig(HALF, init, n=256, t_end=2.0))
        out[key + "_time"] = t.elapsed
    pairs = [(wavy(-3.0, 0.1), wavy(-2.0, 0.1)),
             (InitialCurveSpec(-3.0), InitialCurveSpec(-2.0)),
             (wavy(-2.2, 0.1), wavy(-2.0, 0.1))]
    with Timed() as t:
        out["pairs"] = [(run(FlowConfig(HALF, a, n=256, t_end=2.0)),
                         run(FlowConfig(HALF, b, n=256, t_end=2.0))) for a, b in pairs]
    out["pairs_time"] = t.elapsed
    return out


def test_criterion_01_validity_window():
    with Timed() as t:
        reps = [check_validity_window(tol=1e-6)]
        win = validity_window(HALF, -10.0, -0.1, 10_000)
    err = abs(win.b_tilde - (-(0.5 ** (1 / 3))))
    assert abs(power_btilde(0.5) + 0.7937005) < 1e-7
    ok = record(1, reps, t.elapsed, 1.0) and err <= 1e-6
    assert ok, f"b_tilde error {err:.3g}"


def test_criterion_02_curvature_algebra():
    with Timed() as t:
        reps = check_curvature_algebra(HALF, n_random=1000, rel_tol=1e-12, ratio_band=(3.5, 4.5))
    assert record(2, reps, t.elapsed, 1.0)


def test_criterion_03_static_identities():
    with Timed() as t:
        reps = check_static_identities(HALF, wavy(-2.0, 0.1), grid_sizes=(64, 128, 256, 512),
                                       min_order=1.8)
    assert len(reps) == 5
    assert record(3, reps, t.elapsed, 5.0)


def test_criterion_04_circle_consistency(timed_runs):
    reps = check_circle_consistency(timed_runs["circle"], HALF, tol=1e-6, symmetry_tol=1e-12)
    assert record(4, reps, timed_runs["circle_time"], 30.0)


def test_criterion_05_graph_preservation(timed_runs):
    reps = [check_graph_preservation(timed_runs[k], rel_tol=1e-3)
            for k in ("graph_small", "graph_large")]
    slowest = max(timed_runs["graph_small_time"], timed_runs["graph_large_time"])
    assert record(5, reps, slowest, 120.0)


def test_criterion_06_comparison(timed_runs):
    reps = [check_comparison(a, b, tol=1e-6) for a, b in timed_runs["pairs"]]
    assert record(6, reps, timed_runs["pairs_time"], 240.0)


def test_criterion_07_monotone_descent(timed_runs, longtime_run):
    trajectories = [timed_runs["circle"], timed_runs["graph_small"], timed_runs["graph_large"]]
    trajectories += [r for pair in timed_runs["pairs"] for r in pair]
    trajectories.append(longtime_run[0])
    with Timed() as t:
        reps = [check_monotone_descent(r, tol=1e-6) for r in trajectories]
    assert record(7, reps, t.elapsed, None)


@pytest.fixture(scope="module")
def longtime_run():
    with Timed() as t:
        res = run(FlowConfig(HALF, InitialCurveSpec(-2.0), n=32, t_end=50.0))
    return res, t.elapsed


def test_criterion_08_longtime(longtime_run):
    res, elapsed = longtime_run
    reps = check_longtime(res, HALF, min_t_end=50.0, descent=5.0, kappa_factor=0.1,
                          g_factor=2.0)
    assert record(8, reps, elapsed, 300.0)


def test_criterion_09_evolution_residuals():
    with Timed() as t:
        runs = [run(FlowConfig(HALF, wavy(-2.0, 0.1), n=n, t_end=0.05, snapshot_every=0))
                for n in (128, 256)]
        reps = check_evolution_residuals(runs, HALF, min_order=1.5)
    assert record(9, reps, t.elapsed, 300.0)


def test_criterion_10_negative_control(tmp_path, capsys):
    import json

    from csfrot.verify import CheckReport, FAIL, PASS

    with Timed() as t:
        code_alpha = cli.main(["check", "--profile", "power", "--alpha", "1.0",
                               "--z-range", "-10:-0.1"])
        cfg = tmp_path / "outside.json"
        cfg.write_text(json.dumps({"profile": {"family": "power", "alpha": 0.5},
                                   "initial": {"c0": -0.7, "modes": []},
                                   "n": 64, "t_end": 1.0}))
        out_dir = tmp_path / "never"
        code_window = cli.main(["simulate", str(cfg), "--output-dir", str(out_dir)])
    err = capsys.readouterr().err
    stepped = out_dir.exists()
    reps = [CheckReport("check.alpha_one_exit", PASS if code_alpha == 2 else FAIL,
                        code_alpha, 2),
            CheckReport("simulate.outside_window_exit",
                        PASS if code_window == 2 and not stepped else FAIL, code_window, 2,
                        "no output written" if not stepped else "output written")]
    assert record(10, reps, t.elapsed, None)
    assert "initial curve outside validity window" in err
