# Copyright (c) 2025 takotime808
"""
Benchmark pipeline.

This module wires solver ids to concrete solver implementations and exposes
the harness entry points:

- ``get_solver(solver_id)``: look up a fresh solver from the registry.
- ``resolve_config(solver_id, inst, overrides)``: build a solver config from
  defaults plus a flat mapping (e.g. read from a config file).
- ``run_trial(...)``: one seeded trial of one solver.
- ``run_bench(...)``: ``trials`` seeded runs per solver, aggregated into a
  :class:`~isingbench.processing.aggregate.BenchReport`.
- ``auto_target(...)`` / ``exact_target(...)``: reference targets.

Design notes
------------

* The registry maps solver ids to callables returning **new solver
  instances**, so solvers hold no state across trials.
* Trial ``k`` of every solver uses the seed ``derive_seed(master_seed, k)``
  (paired design: all solvers see the same per-trial streams).
* Trials go to a bounded process pool when more than one worker is
  configured; outcomes are collected in trial order, so reports do not
  depend on scheduling. Each trial times its own solve loop.

Runtime options
---------------
Mirrored into environment variables so worker processes and the CLI agree:

- ``ISINGBENCH_WORKERS``: worker-pool size (default 1 = run in-process)
- ``ISINGBENCH_CLOCK``: trace clock, ``wall`` (default) or ``model``
"""

from __future__ import annotations

import dataclasses
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Any, List, Mapping, Optional, Sequence, Tuple, Union

from isingbench.errors import InvalidArgumentError, UnknownSolverError
from isingbench.problems.instance import IsingInstance, Weight
from isingbench.problems.oracle import ground_state
from isingbench.processing.aggregate import BenchReport, aggregate
from isingbench.solvers.annealing import AnnealingSolver, SASchedule
from isingbench.solvers.base import Solver, TraceConfig, TrialOutcome
from isingbench.solvers.cim import CoherentIsingSolver
from isingbench.solvers.hopfield import HopfieldSolver
from isingbench.solvers.hopfield_tank import HopfieldTankSolver
from isingbench.utils.utils import config_from_mapping, derive_seed

logger = logging.getLogger(__name__)

# Preliminary target runs use trial indices far above any bench trial.
PRELIM_TRIAL_OFFSET = 1 << 32
DEFAULT_TARGET_RUNS = 10
DEFAULT_TARGET_DEPTH = 0.9


# ------------------------- Runtime configuration layer -------------------------

_RUNTIME = {
    "workers": 1,
    "clock": "wall",
}


def _apply_runtime_env() -> None:
    os.environ["ISINGBENCH_WORKERS"] = str(_RUNTIME["workers"])
    os.environ["ISINGBENCH_CLOCK"] = str(_RUNTIME["clock"])


def set_runtime_options(*, workers: Optional[int] = None, clock: Optional[str] = None) -> None:
    """
    Update in-process runtime options (mirrors CLI flags) and export to env.
    """
    if workers is not None:
        if workers < 1:
            raise InvalidArgumentError(f"workers must be >= 1, got {workers}")
        _RUNTIME["workers"] = int(workers)
    if clock is not None:
        if clock not in ("wall", "model"):
            raise InvalidArgumentError(f"unknown clock {clock!r}")
        _RUNTIME["clock"] = clock
    _apply_runtime_env()


def worker_count() -> int:
    """Worker-pool size: ``ISINGBENCH_WORKERS`` if set, else the runtime option."""
    raw = os.environ.get("ISINGBENCH_WORKERS", "").strip()
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise InvalidArgumentError(f"ISINGBENCH_WORKERS must be an integer, got {raw!r}") from None
        if value < 1:
            raise InvalidArgumentError(f"ISINGBENCH_WORKERS must be >= 1, got {value}")
        return value
    return int(_RUNTIME["workers"])


def trace_clock() -> str:
    """Trace clock: ``ISINGBENCH_CLOCK`` if set, else the runtime option."""
    raw = os.environ.get("ISINGBENCH_CLOCK", "").strip()
    return raw or str(_RUNTIME["clock"])


# ----------------------------- Registry & factories -----------------------------

REGISTRY_BASE = {
    "hn": lambda: HopfieldSolver(),
    "sa": lambda: AnnealingSolver(),
    "htnn": lambda: HopfieldTankSolver(),
    "cim": lambda: CoherentIsingSolver(),
}

# Public registry (users/tests may monkeypatch this!)
REGISTRY = REGISTRY_BASE.copy()
SUPPORTED_SOLVERS = sorted(REGISTRY.keys())


def get_solver(solver_id: str) -> Solver:
    """
    Instantiate the solver registered under ``solver_id``.

    Raises
    ------
    UnknownSolverError
        If the id is not registered.
    """
    factory = REGISTRY.get(solver_id)
    if factory is None:
        raise UnknownSolverError(
            f"Unknown solver '{solver_id}'. Supported: {', '.join(sorted(REGISTRY))}"
        )
    return factory()


def resolve_config(
    solver_id: str, inst: IsingInstance, overrides: Union[None, Mapping[str, Any], Any] = None
) -> Any:
    """
    Config object for ``solver_id``.

    ``overrides`` may be ``None`` (defaults), a config dataclass instance
    (used as is) or a flat mapping applied on top of the defaults.
    """
    solver = get_solver(solver_id)
    if overrides is not None and dataclasses.is_dataclass(overrides):
        return overrides
    base = solver.default_config(inst)
    if not overrides:
        return base
    return config_from_mapping(solver.config_type, overrides, base=base)


# --------------------------------- Core API -----------------------------------

def run_trial(
    solver_id: str,
    inst: IsingInstance,
    config: Any,
    trial: int,
    seed: int,
    trace_cfg: Optional[TraceConfig] = None,
) -> TrialOutcome:
    """One seeded trial (top-level so worker processes can pickle it)."""
    solver = get_solver(solver_id)
    out = solver.run(inst, config, seed=seed, trial=trial, trace_cfg=trace_cfg)
    logger.debug(
        "%s trial %d: status=%s sweeps=%d final=%s hit=%s",
        solver_id, trial, out.status, out.sweeps,
        out.final_energy.value if out.final_energy else None, out.first_hit,
    )
    return out


def _run_jobs(jobs: List[tuple], workers: int) -> List[TrialOutcome]:
    if workers <= 1 or len(jobs) <= 1:
        return [run_trial(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(run_trial, *job) for job in jobs]
        return [f.result() for f in futures]


def run_bench(
    inst: IsingInstance,
    solvers: Sequence[Tuple[str, Any]],
    trials: int,
    master_seed: int,
    target: float,
    *,
    trace_cfg: Optional[TraceConfig] = None,
    workers: Optional[int] = None,
    grid_points: int = 200,
    meta: Optional[dict] = None,
) -> BenchReport:
    """
    Run ``trials`` independent trials of every ``(solver_id, config)`` pair.

    Parameters
    ----------
    inst
        Shared, immutable instance.
    solvers
        ``(solver_id, config)`` pairs; ``config`` may be ``None``, a config
        dataclass or a flat override mapping.
    trials
        Trials per solver (``>= 1``).
    master_seed
        Seed from which every trial seed is derived.
    target
        Target energy for time-to-target.
    trace_cfg
        Sampling options; its ``target`` is replaced by ``target`` and its
        clock defaults to the runtime clock.

    Returns
    -------
    BenchReport
        Aggregates plus the raw traces (``report.traces``) in solver/trial order.

    Raises
    ------
    UnknownSolverError
        If a solver id is not registered (checked before any trial runs).
    InvalidArgumentError
        If ``trials < 1``.
    """
    if trials < 1:
        raise InvalidArgumentError(f"trials must be >= 1, got {trials}")
    if not isinstance(inst, IsingInstance) or inst.weights.shape != (inst.n, inst.n):
        raise InvalidArgumentError("inconsistent instance dimensions")
    resolved = [(sid, resolve_config(sid, inst, cfg)) for sid, cfg in solvers]

    tcfg = dataclasses.replace(trace_cfg) if trace_cfg is not None else TraceConfig(clock=trace_clock())
    tcfg.target = target
    tcfg.validate()

    seeds = [derive_seed(master_seed, k) for k in range(trials)]
    jobs = [(sid, inst, cfg, k, seeds[k], tcfg) for sid, cfg in resolved for k in range(trials)]
    n_workers = workers if workers is not None else worker_count()
    logger.info(
        "bench: n=%d solvers=%s trials=%d target=%s workers=%d clock=%s",
        inst.n, [s for s, _ in resolved], trials, target, n_workers, tcfg.clock,
    )
    outcomes = _run_jobs(jobs, n_workers)

    failed = [o for o in outcomes if o.status != "ok"]
    if failed:
        logger.warning("%d of %d trials failed", len(failed), len(outcomes))

    info = {
        "n": inst.n,
        "trials": trials,
        "master_seed": master_seed,
        "clock": tcfg.clock,
        "tick_ns": tcfg.tick_ns if tcfg.clock == "model" else None,
        "trace_every": tcfg.every,
        "timing_scope": "solve loop only (excludes instance load and trace serialization)",
        "configs": {sid: dataclasses.asdict(cfg) for sid, cfg in resolved},
        "errors": {f"{o.solver}:{o.trial}": o.error for o in failed},
    }
    info.update(meta or {})
    report = aggregate(
        [o.trace for o in outcomes],
        target,
        inst.n,
        trials={sid: trials for sid, _ in resolved},
        grid_points=grid_points,
        meta=info,
    )
    for s in report.summaries.values():
        logger.info(
            "%s: %d/%d reached target; best=%s avg=%s worst=%s ns",
            s.solver, s.successes, s.trials, s.best_ns, s.avg_ns, s.worst_ns,
        )
    return report


def auto_target(
    inst: IsingInstance,
    *,
    runs: int = DEFAULT_TARGET_RUNS,
    seed: int = 0,
    depth: float = DEFAULT_TARGET_DEPTH,
    schedule: Optional[SASchedule] = None,
    workers: Optional[int] = None,
) -> Tuple[Weight, Weight]:
    """
    Reference target from ``runs`` preliminary SA runs.

    Returns ``(target, best_energy)`` with ``target = depth * best_energy``
    (floored to an integer for integer instances, so ``E <= target`` keeps its
    meaning). Stand-in for an externally supplied (e.g. SDP) target.
    """
    if runs < 1:
        raise InvalidArgumentError(f"runs must be >= 1, got {runs}")
    if not 0 < depth <= 1:
        raise InvalidArgumentError(f"depth must be in (0, 1], got {depth}")
    sched = schedule or SASchedule()
    jobs = [
        ("sa", inst, sched, PRELIM_TRIAL_OFFSET + k, derive_seed(seed, PRELIM_TRIAL_OFFSET + k), TraceConfig(clock="model"))
        for k in range(runs)
    ]
    outcomes = [o for o in _run_jobs(jobs, workers if workers is not None else worker_count()) if o.status == "ok"]
    if not outcomes:
        raise InvalidArgumentError("no preliminary SA run succeeded")
    best = min(o.final_energy.value for o in outcomes)
    target: Weight = depth * best if best < 0 else best
    if inst.is_integral:
        target = int(math.floor(target))
    logger.info("auto target: best of %d SA runs = %s, depth %.3f -> target %s", runs, best, depth, target)
    return target, best


def exact_target(inst: IsingInstance) -> Weight:
    """Exhaustive ground-state energy (small instances only)."""
    energy, _ = ground_state(inst)
    return energy
