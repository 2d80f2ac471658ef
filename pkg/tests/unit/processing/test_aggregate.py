# Copyright (c) 2025 takotime808

import numpy as np
import pandas as pd
import pytest

from isingbench.processing.aggregate import (
    ENVELOPE_COLUMNS,
    REPORT_COLUMNS,
    aggregate,
    envelope,
    log_grid,
    step_values,
    summarize,
    time_to_target,
)
from isingbench.solvers.base import EnergyTrace, TraceSample


def make_trace(energies, times=None, solver="hn", trial=0, n=4):
    times = times or [10 * (k + 1) for k in range(len(energies))]
    tr = EnergyTrace(solver=solver, n=n, trial=trial)
    tr.samples = [
        TraceSample(iteration=k, elapsed_ns=t, energy=e, cut=0) for k, (e, t) in enumerate(zip(energies, times))
    ]
    return tr


def test_time_to_target_examples():
    tr = make_trace([-1, -3, -5])
    assert time_to_target(tr, -4) == (2, 30)
    assert time_to_target(tr, -6) is None
    # boundary: <=
    assert time_to_target(tr, -3) == (1, 20)


def test_summarize_single_trial_best_avg_worst_equal():
    s = summarize("sa", [make_trace([0, -2, -4])], target=-2)
    assert s.successes == 1 and s.trials == 1
    assert s.best_ns == s.avg_ns == s.worst_ns == 20
    assert s.best_iter == s.avg_iter == s.worst_iter == 1


def test_summarize_counts_failures_separately():
    traces = [
        make_trace([0, -5], trial=0),
        make_trace([0, -1, -5], trial=1),
        make_trace([0, -1], trial=2),
    ]
    s = summarize("hn", traces, target=-5)
    assert s.trials == 3 and s.successes == 2
    assert (s.best_ns, s.avg_ns, s.worst_ns) == (20, 25.0, 30)
    assert s.best_ns <= s.avg_ns <= s.worst_ns


def test_summarize_without_successes_leaves_stats_empty():
    s = summarize("hn", [make_trace([0, -1])], target=-10)
    assert s.successes == 0
    assert s.best_ns is None and s.avg_ns is None and s.worst_ns is None


def test_step_values_carry_forward_and_backfill():
    tr = make_trace([5, 3, 1], times=[10, 20, 40])
    vals = step_values(tr, np.array([5.0, 10.0, 15.0, 20.0, 39.0, 40.0, 100.0]))
    assert vals.tolist() == [5, 5, 5, 3, 3, 1, 1]


def test_log_grid_spans_first_to_last():
    a = make_trace([0, -1], times=[10, 1000])
    b = make_trace([0, -1], times=[5, 200])
    grid = log_grid([a, b], points=50)
    assert grid[0] == 5 and grid[-1] == 1000
    assert len(grid) == 50
    assert np.all(np.diff(np.log(grid)) > 0)


def test_envelope_best_mean_worst_ordering():
    rng = np.random.default_rng(0)
    traces = []
    for t in range(20):
        steps = int(rng.integers(2, 30))
        energies = np.minimum.accumulate(rng.integers(-50, 0, size=steps)).tolist()
        times = np.cumsum(rng.integers(1, 1000, size=steps)).tolist()
        traces.append(make_trace(energies, times=times, trial=t))
    env = envelope(traces, n=4, points=100)
    assert list(env.columns) == ENVELOPE_COLUMNS
    assert np.all(env["best"] <= env["mean"])
    assert np.all(env["mean"] <= env["worst"])
    assert np.allclose(env["mean_per_spin"], env["mean"] / 4)


def test_envelope_of_identical_traces_is_the_trace():
    traces = [make_trace([3, 1, -1], trial=k) for k in range(3)]
    env = envelope(traces, n=1, points=3)
    assert env["best"].tolist() == env["worst"].tolist() == env["mean"].tolist()


def test_aggregate_report_frame():
    traces = [
        make_trace([0, -5], solver="sa", trial=0),
        make_trace([0, -1], solver="sa", trial=1),
        make_trace([0, -5], solver="hn", trial=0),
    ]
    report = aggregate(traces, target=-5, n=4)
    df = report.to_frame()
    assert list(df.columns) == REPORT_COLUMNS
    assert df["solver"].tolist() == ["sa", "hn"]
    assert df["trials"].tolist() == [2, 1]
    assert df["successes"].tolist() == [1, 1]
    assert report.traces == traces
    assert report.envelope_frame()["solver"].unique().tolist() == ["sa", "hn"]


def test_aggregate_trials_override_counts_failed_runs():
    report = aggregate([make_trace([0, -5], solver="cim")], target=-5, n=4, trials={"cim": 3})
    s = report.summaries["cim"]
    assert s.trials == 3 and s.successes == 1


def test_mean_trace_crossing_is_reported():
    traces = [make_trace([0, -10], times=[10, 20], trial=0), make_trace([0, 0], times=[10, 20], trial=1)]
    report = aggregate(traces, target=-5, n=4, grid_points=10)
    assert report.summaries["hn"].mean_trace_crossing_ns == pytest.approx(20.0)
    none = aggregate(traces, target=-6, n=4, grid_points=10)
    assert none.summaries["hn"].mean_trace_crossing_ns is None


def test_empty_inputs():
    report = aggregate([], target=0, n=4)
    assert report.to_frame().empty
    assert isinstance(report.envelope_frame(), pd.DataFrame)
    assert list(report.envelope_frame().columns) == ENVELOPE_COLUMNS
