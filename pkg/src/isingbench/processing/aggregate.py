# Copyright (c) 2025 takotime808
"""
Trace aggregation: time-to-target, best/average/worst statistics and
best/mean/worst envelope traces.

Everything here is a pure function of the traces and the target, so a report
can be rebuilt from the emitted trace CSV.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from isingbench.solvers.base import EnergyTrace

REPORT_COLUMNS = [
    "solver", "trials", "successes",
    "best_ns", "avg_ns", "worst_ns",
    "best_iter", "avg_iter", "worst_iter",
]
ENVELOPE_COLUMNS = [
    "solver", "time_ns", "best", "mean", "worst",
    "best_per_spin", "mean_per_spin", "worst_per_spin",
]
DEFAULT_GRID_POINTS = 200


def time_to_target(trace: EnergyTrace, target: float) -> Optional[Tuple[int, int]]:
    """
    First sample with ``energy <= target`` as ``(iteration, elapsed_ns)``, or
    ``None`` when the trace never reaches the target.
    """
    for s in trace.samples:
        if s.energy <= target:
            return s.iteration, s.elapsed_ns
    return None


@dataclass
class SolverSummary:
    """
    Time-to-target statistics of one solver.

    ``best/avg/worst`` are taken over successful trials only and are ``None``
    when no trial succeeded. ``mean_trace_crossing_ns`` is the first envelope
    grid time at which the ensemble-mean trace is at or below the target.
    """
    solver: str
    trials: int
    successes: int
    best_ns: Optional[int] = None
    avg_ns: Optional[float] = None
    worst_ns: Optional[int] = None
    best_iter: Optional[int] = None
    avg_iter: Optional[float] = None
    worst_iter: Optional[int] = None
    mean_trace_crossing_ns: Optional[float] = None

    def row(self) -> dict:
        return {c: getattr(self, c) for c in REPORT_COLUMNS}


@dataclass
class BenchReport:
    """
    Aggregate over all trials of every solver.

    Attributes
    ----------
    target : float
        Energy used as the target.
    summaries : dict[str, SolverSummary]
        Per solver, in run order.
    envelopes : dict[str, pandas.DataFrame]
        Per solver, best/mean/worst energy on a log-spaced time grid.
    n : int
        Vertex count (for per-spin columns).
    meta : dict
        Free-form provenance (clock, seeds, configs, target source, ...).
    """
    target: float
    n: int
    summaries: Dict[str, SolverSummary] = field(default_factory=dict)
    envelopes: Dict[str, pd.DataFrame] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    traces: List[EnergyTrace] = field(default_factory=list, repr=False)

    def to_frame(self) -> pd.DataFrame:
        """Report table with the CSV report columns (nullable integer dtypes)."""
        df = pd.DataFrame([s.row() for s in self.summaries.values()], columns=REPORT_COLUMNS)
        for c in ("trials", "successes", "best_ns", "worst_ns", "best_iter", "worst_iter"):
            df[c] = df[c].astype("Int64")
        for c in ("avg_ns", "avg_iter"):
            df[c] = df[c].astype("Float64")
        return df

    def envelope_frame(self) -> pd.DataFrame:
        frames = [e for e in self.envelopes.values() if len(e)]
        if not frames:
            return pd.DataFrame(columns=ENVELOPE_COLUMNS)
        return pd.concat(frames, ignore_index=True)[ENVELOPE_COLUMNS]


def log_grid(traces: Sequence[EnergyTrace], points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    """
    Logarithmically spaced times between the earliest first sample and the
    latest last sample over ``traces``.
    """
    nonempty = [t for t in traces if len(t)]
    if not nonempty:
        return np.empty(0)
    lo = float(min(t.samples[0].elapsed_ns for t in nonempty))
    hi = float(max(t.samples[-1].elapsed_ns for t in nonempty))
    if hi <= lo or points < 2:
        return np.array([lo])
    grid = np.geomspace(lo, hi, points)
    grid[0], grid[-1] = lo, hi
    return grid


def step_values(trace: EnergyTrace, grid: np.ndarray) -> np.ndarray:
    """
    Energy of ``trace`` at each grid time: last sample at or before the time
    carries forward; times before the first sample take the first sample.
    """
    times = np.asarray(trace.times, dtype=np.float64)
    energies = np.asarray(trace.energies, dtype=np.float64)
    idx = np.searchsorted(times, grid, side="right") - 1
    return energies[np.clip(idx, 0, len(times) - 1)]


def envelope(traces: Sequence[EnergyTrace], n: int, points: int = DEFAULT_GRID_POINTS) -> pd.DataFrame:
    """Pointwise best/mean/worst energy over ``traces`` on :func:`log_grid`."""
    nonempty = [t for t in traces if len(t)]
    if not nonempty:
        return pd.DataFrame(columns=ENVELOPE_COLUMNS)
    grid = log_grid(nonempty, points)
    values = np.vstack([step_values(t, grid) for t in nonempty])
    best = values.min(axis=0)
    worst = values.max(axis=0)
    # rounding in the mean must not leave [best, worst]
    mean = np.clip(values.mean(axis=0), best, worst)
    return pd.DataFrame(
        {
            "solver": nonempty[0].solver,
            "time_ns": grid,
            "best": best,
            "mean": mean,
            "worst": worst,
            "best_per_spin": best / n,
            "mean_per_spin": mean / n,
            "worst_per_spin": worst / n,
        },
        columns=ENVELOPE_COLUMNS,
    )


def summarize(
    solver: str,
    traces: Sequence[EnergyTrace],
    target: float,
    trials: Optional[int] = None,
    env: Optional[pd.DataFrame] = None,
) -> SolverSummary:
    """Best/average/worst time-to-target over the successful trials of one solver."""
    hits = [h for h in (time_to_target(t, target) for t in traces) if h is not None]
    summary = SolverSummary(solver=solver, trials=trials if trials is not None else len(traces), successes=len(hits))
    if hits:
        iters = [h[0] for h in hits]
        times = [h[1] for h in hits]
        summary.best_ns, summary.worst_ns = min(times), max(times)
        summary.avg_ns = sum(times) / len(times)
        summary.best_iter, summary.worst_iter = min(iters), max(iters)
        summary.avg_iter = sum(iters) / len(iters)
    if env is not None and len(env):
        crossed = env.loc[env["mean"] <= target, "time_ns"]
        if len(crossed):
            summary.mean_trace_crossing_ns = float(crossed.iloc[0])
    return summary


def group_by_solver(traces: Iterable[EnergyTrace]) -> Dict[str, List[EnergyTrace]]:
    """Group traces by solver id, keeping first-seen solver order and trial order."""
    out: Dict[str, List[EnergyTrace]] = {}
    for t in traces:
        out.setdefault(t.solver, []).append(t)
    for ts in out.values():
        ts.sort(key=lambda t: t.trial)
    return out


def aggregate(
    traces: Iterable[EnergyTrace],
    target: float,
    n: int,
    *,
    trials: Optional[Mapping[str, int]] = None,
    grid_points: int = DEFAULT_GRID_POINTS,
    meta: Optional[dict] = None,
) -> BenchReport:
    """
    Build a :class:`BenchReport` from traces.

    Parameters
    ----------
    traces
        Traces of all solvers and trials (empty traces count as failed trials).
    target
        Target energy.
    n
        Vertex count.
    trials
        Optional per-solver trial counts overriding ``len(traces)`` (for
        traces re-read from CSV, where failed trials leave no rows).
    """
    all_traces = list(traces)
    report = BenchReport(target=target, n=n, meta=dict(meta or {}), traces=all_traces)
    for solver, ts in group_by_solver(all_traces).items():
        env = envelope(ts, n, grid_points)
        report.envelopes[solver] = env
        count = trials.get(solver) if trials else None
        report.summaries[solver] = summarize(solver, ts, target, count, env)
    return report
