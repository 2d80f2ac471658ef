# Copyright (c) 2025 takotime808
"""
CSV/JSON outputs of the benchmark harness.

Trace CSV::

    solver,trial,iteration,elapsed_ns,energy,energy_per_spin,cut

Report CSV::

    solver,trials,successes,best_ns,avg_ns,worst_ns,best_iter,avg_iter,worst_iter

Envelope CSV::

    solver,time_ns,best,mean,worst,best_per_spin,mean_per_spin,worst_per_spin

All files use ``.`` as decimal point (pandas never localizes), LF line
endings, and empty fields for missing values.
"""

from __future__ import annotations

import io
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Union

import pandas as pd

from isingbench.processing.aggregate import BenchReport
from isingbench.solvers.base import TRACE_COLUMNS, EnergyTrace, TraceSample
from isingbench.utils.utils import json_dumps_safe

logger = logging.getLogger(__name__)


def traces_frame(traces: Iterable[EnergyTrace]) -> pd.DataFrame:
    """All samples of all traces, in the given trace order."""
    frames = [t.to_frame() for t in traces if len(t)]
    if not frames:
        return pd.DataFrame(columns=TRACE_COLUMNS)
    return pd.concat(frames, ignore_index=True)[TRACE_COLUMNS]


def _to_csv(df: pd.DataFrame) -> str:
    return df.to_csv(index=False, lineterminator="\n")


def emit_csv(data: Union[BenchReport, Iterable[EnergyTrace]]) -> str:
    """
    Serialize a report (report CSV) or a collection of traces (trace CSV).

    An empty trace collection yields the header line only.
    """
    if isinstance(data, BenchReport):
        return _to_csv(data.to_frame())
    return _to_csv(traces_frame(data))


def emit_envelope_csv(report: BenchReport) -> str:
    return _to_csv(report.envelope_frame())


def read_traces_csv(text: str, n: int) -> List[EnergyTrace]:
    """
    Parse a trace CSV back into :class:`EnergyTrace` objects (``seed`` is not
    part of the CSV and is left at 0).

    Integer-typed ``energy``/``cut`` columns come back as ``int``.
    """
    df = pd.read_csv(io.StringIO(text), dtype={"solver": str})
    missing = [c for c in TRACE_COLUMNS if c not in df.columns]
    if missing:
        raise ValueError(f"trace CSV lacks columns: {missing}")
    integral = pd.api.types.is_integer_dtype(df["energy"])
    cast = int if integral else float
    traces: List[EnergyTrace] = []
    for (solver, trial), g in df.groupby(["solver", "trial"], sort=False):
        tr = EnergyTrace(solver=str(solver), n=n, trial=int(trial))
        tr.samples = [
            TraceSample(iteration=int(it), elapsed_ns=int(el), energy=cast(e), cut=cast(c))
            for it, el, e, c in zip(g["iteration"], g["elapsed_ns"], g["energy"], g["cut"])
        ]
        traces.append(tr)
    return traces


def write_bench_outputs(
    report: BenchReport, traces: Iterable[EnergyTrace], out_dir: Union[str, Path]
) -> Dict[str, Path]:
    """
    Write ``traces.csv``, ``report.csv``, ``envelopes.csv`` and ``meta.json``
    into ``out_dir`` (created if needed).
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "traces": out / "traces.csv",
        "report": out / "report.csv",
        "envelopes": out / "envelopes.csv",
        "meta": out / "meta.json",
    }
    paths["traces"].write_text(emit_csv(traces), encoding="utf-8", newline="\n")
    paths["report"].write_text(emit_csv(report), encoding="utf-8", newline="\n")
    paths["envelopes"].write_text(emit_envelope_csv(report), encoding="utf-8", newline="\n")
    meta = dict(report.meta)
    meta["target"] = report.target
    meta["mean_trace_crossing_ns"] = {
        s: v.mean_trace_crossing_ns for s, v in report.summaries.items()
    }
    meta["mean_first_hit_ns"] = {s: v.avg_ns for s, v in report.summaries.items()}
    paths["meta"].write_text(json_dumps_safe(meta) + "\n", encoding="utf-8", newline="\n")
    logger.info("wrote bench outputs to %s", out)
    return paths
