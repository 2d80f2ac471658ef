# Copyright (c) 2025 takotime808
"""
Simulated annealing (SA) with Metropolis acceptance.

One step picks ``i`` uniformly at random and accepts the flip with
probability ``min(1, exp(-dE_i / T))``. A sweep is ``n`` steps; traces are
indexed by sweep so they line up with HN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal, Optional

import numpy as np

from isingbench.errors import InvalidArgumentError
from isingbench.kernels.energy import apply_flip, energy_from_fields, ising_energy
from isingbench.problems.instance import IsingInstance
from isingbench.problems.state import SpinState
from isingbench.solvers.base import BaseSolver, TraceConfig, TraceRecorder, TrialOutcome, check_state
from isingbench.utils.utils import make_rng

DEFAULT_SWEEPS = 100


@dataclass
class SASchedule:
    """
    Temperature schedule.

    Attributes
    ----------
    t0 : float | None
        Initial temperature; ``None`` means ``2 * mean(|h_i|)`` of the initial
        state (never below ``tf``).
    tf : float
        Final temperature, ``> 0``.
    steps : int | None
        Total single-spin attempts; ``None`` means ``100 * n``.
    law : {"geometric", "linear"}
        ``T_k = t0 * (tf/t0)^(k/steps)`` or ``T_k = t0 + (tf - t0) * k/steps``.
    """
    t0: Optional[float] = None
    tf: float = 0.05
    steps: Optional[int] = None
    law: Literal["geometric", "linear"] = "geometric"

    def validate(self) -> None:
        if not self.tf > 0:
            raise InvalidArgumentError(f"final temperature must be > 0, got {self.tf}")
        if self.t0 is not None and self.t0 < self.tf:
            raise InvalidArgumentError(f"t0 ({self.t0}) must be >= tf ({self.tf})")
        if self.steps is not None and self.steps < 1:
            raise InvalidArgumentError(f"steps must be >= 1, got {self.steps}")
        if self.law not in ("geometric", "linear"):
            raise InvalidArgumentError(f"unknown schedule law {self.law!r}")

    def resolve(self, inst: IsingInstance, x0: SpinState) -> "SASchedule":
        """Fill ``t0`` and ``steps`` defaults for a concrete instance and start."""
        self.validate()
        t0 = self.t0
        if t0 is None:
            t0 = max(2.0 * float(np.mean(np.abs(x0.fields))), self.tf)
        steps = self.steps if self.steps is not None else DEFAULT_SWEEPS * inst.n
        return replace(self, t0=t0, steps=steps)

    def temperatures(self, start: int, stop: int) -> np.ndarray:
        """Temperatures of steps ``start..stop-1`` (resolved schedules only)."""
        if self.t0 is None or self.steps is None:
            raise InvalidArgumentError("schedule must be resolved before use")
        frac = np.arange(start, stop, dtype=np.float64) / self.steps
        if self.law == "geometric":
            return self.t0 * (self.tf / self.t0) ** frac
        return self.t0 + (self.tf - self.t0) * frac


def sa_acceptance(dE: float, T: float, u: float) -> bool:
    """
    Metropolis test: ``dE <= 0`` always passes, otherwise ``u < exp(-dE/T)``.

    Raises
    ------
    InvalidArgumentError
        If ``T <= 0``.

    Examples
    --------
    >>> sa_acceptance(2, 1.0, 0.1)
    True
    >>> sa_acceptance(2, 1.0, 0.2)
    False
    """
    if not T > 0:
        raise InvalidArgumentError(f"temperature must be > 0, got {T}")
    if dE <= 0:
        return True
    return u < math.exp(-dE / T)


def sa_solve(
    inst: IsingInstance,
    x0: SpinState,
    sched: SASchedule,
    rng: np.random.Generator,
    trace_cfg: Optional[TraceConfig] = None,
) -> TrialOutcome:
    """
    Anneal from ``x0`` (left untouched) following ``sched``.

    Deterministic for a given generator state.
    """
    check_state(inst, x0)
    sched = sched.resolve(inst, x0)
    steps = int(sched.steps)
    n = inst.n

    x = x0.copy()
    rec = TraceRecorder(inst, "sa", trace_cfg)
    rec.start()
    rec.record(0, energy_from_fields(inst, x).value)

    spins, fields = x.spins, x.fields
    done = 0
    sweeps = 0
    stop = rec.should_stop
    while not stop and done < steps:
        block = min(n, steps - done)
        picks = rng.integers(0, n, size=block)
        draws = rng.random(block)
        temps = sched.temperatures(done, done + block)
        for k in range(block):
            i = int(picks[k])
            dE = 2 * spins[i] * fields[i]
            if sa_acceptance(dE, temps[k], draws[k]):
                apply_flip(inst, x, i)
        done += block
        sweeps += 1
        if rec.due(sweeps):
            stop = rec.record(sweeps, energy_from_fields(inst, x).value)

    rec.record(sweeps, energy_from_fields(inst, x).value)
    return rec.outcome(x, ising_energy(inst, x), sweeps)


class AnnealingSolver(BaseSolver):
    """SA with a uniform random ``±1`` start drawn from the trial stream."""

    solver_id = "sa"
    config_type = SASchedule

    def _solve(self, inst: IsingInstance, config: SASchedule, seed: int, trace_cfg: Optional[TraceConfig]) -> TrialOutcome:
        rng = make_rng(seed)
        x0 = SpinState.random(inst, rng)
        return sa_solve(inst, x0, config, rng, trace_cfg)
