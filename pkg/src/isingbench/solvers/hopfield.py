# Copyright (c) 2025 takotime808
"""
Derandomized Hopfield network (HN).

Each spin takes the sign of its local field, ``x_i <- sgn(sum_j J_ij x_j)``,
visiting ``i = 0..n-1`` in order (``order="sequential"``) or in a fresh random
permutation per sweep (``order="random"``, the original asynchronous
variant). A zero field keeps the current spin, so every executed flip strictly
lowers the energy and the loop ends after the first sweep without flips.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from isingbench.errors import InvalidArgumentError
from isingbench.kernels.energy import apply_flip, energy_from_fields, ising_energy
from isingbench.problems.instance import IsingInstance
from isingbench.problems.state import SpinState
from isingbench.solvers.base import BaseSolver, TraceConfig, TraceRecorder, TrialOutcome, check_state
from isingbench.utils.utils import make_rng


@dataclass
class HNConfig:
    """
    Attributes
    ----------
    max_sweeps : int
        Upper bound on full sweeps.
    order : {"sequential", "random"}
        Visiting order within a sweep.
    """
    max_sweeps: int = 1000
    order: Literal["sequential", "random"] = "sequential"

    def validate(self) -> None:
        if self.max_sweeps < 1:
            raise InvalidArgumentError(f"max_sweeps must be >= 1, got {self.max_sweeps}")
        if self.order not in ("sequential", "random"):
            raise InvalidArgumentError(f"unknown HN order {self.order!r}")


def hn_solve(
    inst: IsingInstance,
    x0: SpinState,
    max_sweeps: int = 1000,
    trace_cfg: Optional[TraceConfig] = None,
    *,
    order: str = "sequential",
    rng: Optional[np.random.Generator] = None,
) -> TrialOutcome:
    """
    Run HN from ``x0`` (left untouched) until a sweep makes no flip or
    ``max_sweeps`` is reached.

    On natural termination (``outcome.converged``) the final state is a
    1-flip local optimum: ``dE_i >= 0`` for every ``i``.
    """
    HNConfig(max_sweeps=max_sweeps, order=order).validate()  # type: ignore[arg-type]
    check_state(inst, x0)
    if order == "random" and rng is None:
        raise InvalidArgumentError("random visiting order needs a generator")

    x = x0.copy()
    n = inst.n
    rec = TraceRecorder(inst, "hn", trace_cfg)
    rec.start()
    rec.record(0, energy_from_fields(inst, x).value)

    spins, fields = x.spins, x.fields
    sweeps = 0
    converged = False
    stop = rec.should_stop
    while not stop and sweeps < max_sweeps:
        visit = rng.permutation(n) if order == "random" else range(n)
        flips = 0
        for i in visit:
            if spins[i] * fields[i] < 0:
                apply_flip(inst, x, int(i))
                flips += 1
        sweeps += 1
        if flips == 0:
            converged = True
            break
        if rec.due(sweeps):
            stop = rec.record(sweeps, energy_from_fields(inst, x).value)

    rec.record(sweeps, energy_from_fields(inst, x).value)
    return rec.outcome(x, ising_energy(inst, x), sweeps, converged=converged)


class HopfieldSolver(BaseSolver):
    """HN with a uniform random ``±1`` start drawn from the trial stream."""

    solver_id = "hn"
    config_type = HNConfig

    def _solve(self, inst: IsingInstance, config: HNConfig, seed: int, trace_cfg: Optional[TraceConfig]) -> TrialOutcome:
        rng = make_rng(seed)
        x0 = SpinState.random(inst, rng)
        return hn_solve(inst, x0, config.max_sweeps, trace_cfg, order=config.order, rng=rng)
