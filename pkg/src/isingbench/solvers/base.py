# Copyright (c) 2025 takotime808
"""
Base solver definitions.

This module defines the trace/outcome records every solver produces, the
:class:`TraceRecorder` that stamps samples, the :class:`Solver` protocol
solver implementations conform to, and :class:`BaseSolver`, which turns
unexpected failures into error outcomes.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Any, List, Literal, Optional, Protocol, Tuple, Type

import pandas as pd

from isingbench.errors import DimensionMismatchError, InvalidArgumentError
from isingbench.kernels.energy import Energy, cut_from_energy
from isingbench.problems.instance import IsingInstance, Weight
from isingbench.problems.state import SpinState

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ["solver", "trial", "iteration", "elapsed_ns", "energy", "energy_per_spin", "cut"]


@dataclass
class TraceConfig:
    """
    How a solver samples its energy trace.

    Attributes
    ----------
    every : int
        Record a sample every ``every`` iterations (sweeps, Euler steps or
        roundtrips). The initial and final states are always recorded.
    target : float | None
        Energy whose first hit is recorded in the outcome.
    stop_on_target : bool
        Stop the solve loop as soon as the target is reached.
    clock : {"wall", "model"}
        ``wall`` stamps ``perf_counter_ns`` elapsed since the solve loop
        started; ``model`` stamps ``(iteration + 1) * tick_ns`` so traces are
        reproducible byte for byte.
    tick_ns : int
        Nanoseconds per iteration for the ``model`` clock.
    """
    every: int = 1
    target: Optional[float] = None
    stop_on_target: bool = False
    clock: Literal["wall", "model"] = "wall"
    tick_ns: int = 1000

    def validate(self) -> None:
        if self.every < 1:
            raise InvalidArgumentError(f"trace interval must be >= 1, got {self.every}")
        if self.clock not in ("wall", "model"):
            raise InvalidArgumentError(f"unknown clock {self.clock!r}")
        if self.tick_ns < 1:
            raise InvalidArgumentError(f"tick_ns must be >= 1, got {self.tick_ns}")


@dataclass(frozen=True)
class TraceSample:
    iteration: int
    elapsed_ns: int
    energy: Weight
    cut: Weight


@dataclass
class EnergyTrace:
    """
    Time-stamped energy samples of one trial.

    ``elapsed_ns`` is strictly increasing and ``iteration`` non-decreasing;
    ``cut == (W - energy) / 2`` holds at every sample.
    """
    solver: str
    n: int
    trial: int = 0
    seed: int = 0
    samples: List[TraceSample] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def energies(self) -> List[Weight]:
        return [s.energy for s in self.samples]

    @property
    def times(self) -> List[int]:
        return [s.elapsed_ns for s in self.samples]

    def to_frame(self) -> pd.DataFrame:
        """Samples as a DataFrame with the CSV trace columns."""
        rows = [
            {
                "solver": self.solver,
                "trial": self.trial,
                "iteration": s.iteration,
                "elapsed_ns": s.elapsed_ns,
                "energy": s.energy,
                "energy_per_spin": s.energy / self.n,
                "cut": s.cut,
            }
            for s in self.samples
        ]
        return pd.DataFrame(rows, columns=TRACE_COLUMNS)


@dataclass
class TrialOutcome:
    """
    Result of one solver trial.

    Attributes
    ----------
    final_state : SpinState | None
        Final (rounded, for analog solvers) spin state; ``None`` on error.
    final_energy : Energy | None
        Energy of ``final_state``, equal to a from-scratch recomputation.
    trace : EnergyTrace
        Samples recorded during the solve loop.
    sweeps : int
        Iterations executed (sweeps, Euler steps or roundtrips).
    reached_target : bool
        Whether a sample hit the trace target.
    hit_iteration, hit_elapsed_ns : int | None
        First sample with ``energy <= target``.
    converged : bool | None
        Natural termination (HN: a sweep without flips); ``None`` when the
        notion does not apply.
    status : str
        ``"ok"`` or ``"error"``.
    error : str | None
        Failure message when ``status == "error"``.
    """
    final_state: Optional[SpinState]
    final_energy: Optional[Energy]
    trace: EnergyTrace
    sweeps: int
    reached_target: bool = False
    hit_iteration: Optional[int] = None
    hit_elapsed_ns: Optional[int] = None
    converged: Optional[bool] = None
    status: str = "ok"
    error: Optional[str] = None

    @property
    def solver(self) -> str:
        return self.trace.solver

    @property
    def trial(self) -> int:
        return self.trace.trial

    @property
    def first_hit(self) -> Optional[Tuple[int, int]]:
        if not self.reached_target:
            return None
        return self.hit_iteration, self.hit_elapsed_ns


class TraceRecorder:
    """
    Collects samples for one trial and tracks the first target hit.

    Call :meth:`start` right before the solve loop; samples are stamped
    relative to that moment.
    """

    def __init__(self, inst: IsingInstance, solver: str, cfg: Optional[TraceConfig] = None):
        self.inst = inst
        self.cfg = cfg or TraceConfig()
        self.cfg.validate()
        self.trace = EnergyTrace(solver=solver, n=inst.n)
        self.hit: Optional[Tuple[int, int]] = None
        self._t0 = 0

    def start(self) -> None:
        self._t0 = time.perf_counter_ns()

    def due(self, iteration: int) -> bool:
        return iteration % self.cfg.every == 0

    def _stamp(self, iteration: int) -> int:
        if self.cfg.clock == "model":
            now = (iteration + 1) * self.cfg.tick_ns
        else:
            now = time.perf_counter_ns() - self._t0
        last = self.trace.samples[-1].elapsed_ns if self.trace.samples else 0
        return max(now, last + 1)

    def record(self, iteration: int, energy: Weight) -> bool:
        """
        Append a sample; returns True when the loop should stop on target.

        A second sample at the same iteration as the previous one is ignored.
        """
        samples = self.trace.samples
        if samples and samples[-1].iteration == iteration:
            return self.should_stop
        elapsed = self._stamp(iteration)
        cut = cut_from_energy(self.inst, energy)
        samples.append(TraceSample(iteration=iteration, elapsed_ns=elapsed, energy=energy, cut=cut))
        target = self.cfg.target
        if self.hit is None and target is not None and energy <= target:
            self.hit = (iteration, elapsed)
        return self.should_stop

    @property
    def should_stop(self) -> bool:
        return self.cfg.stop_on_target and self.hit is not None

    def outcome(
        self, state: SpinState, energy: Energy, sweeps: int, converged: Optional[bool] = None
    ) -> TrialOutcome:
        return TrialOutcome(
            final_state=state,
            final_energy=energy,
            trace=self.trace,
            sweeps=sweeps,
            reached_target=self.hit is not None,
            hit_iteration=self.hit[0] if self.hit else None,
            hit_elapsed_ns=self.hit[1] if self.hit else None,
            converged=converged,
        )


def check_state(inst: IsingInstance, x0: SpinState) -> None:
    if x0.n != inst.n:
        raise DimensionMismatchError(f"initial state has {x0.n} spins, instance has {inst.n}")


class Solver(Protocol):
    """
    Protocol (interface) that all solvers must implement.

    Attributes
    ----------
    solver_id : str
        Registry key (``hn``, ``sa``, ``htnn``, ``cim``).
    config_type : type
        Config dataclass accepted by :meth:`run`.
    """
    solver_id: str
    config_type: Type[Any]

    def default_config(self, inst: IsingInstance) -> Any:
        ...

    def run(
        self,
        inst: IsingInstance,
        config: Any,
        *,
        seed: int,
        trial: int = 0,
        trace_cfg: Optional[TraceConfig] = None,
    ) -> TrialOutcome:
        ...


class BaseSolver:
    """
    Optional base class providing a robust :meth:`run`.

    Subclasses override ``_solve(inst, config, seed, trace_cfg)``. This wrapper

    * validates the config (``config.validate()``),
    * labels the trace with the trial index and seed,
    * converts unexpected exceptions (divergence included) into a
      :class:`TrialOutcome` with ``status="error"``, so the bench harness always
      receives one outcome per trial.
    """

    solver_id: str = ""
    config_type: Type[Any] = object

    def default_config(self, inst: IsingInstance) -> Any:
        return self.config_type()

    def run(
        self,
        inst: IsingInstance,
        config: Any = None,
        *,
        seed: int,
        trial: int = 0,
        trace_cfg: Optional[TraceConfig] = None,
    ) -> TrialOutcome:
        """
        Run one trial.

        Returns
        -------
        TrialOutcome
            ``status="ok"`` on success; on failure a single outcome with
            ``status="error"``, no final state and the error message.
        """
        cfg = config if config is not None else self.default_config(inst)
        try:
            if not isinstance(cfg, self.config_type):
                raise TypeError(f"{self.solver_id} expects {self.config_type.__name__}, got {type(cfg).__name__}")
            cfg.validate()
            out = self._solve(inst, cfg, seed, trace_cfg)
        except Exception as e:
            logger.warning("%s trial %d (seed %d) failed: %s", self.solver_id, trial, seed, e)
            out = TrialOutcome(
                final_state=None,
                final_energy=None,
                trace=EnergyTrace(solver=self.solver_id, n=inst.n),
                sweeps=0,
                status="error",
                error=f"{type(e).__name__}: {e}",
            )
        out.trace.trial = trial
        out.trace.seed = seed
        return out

    # Subclasses must implement this
    def _solve(self, inst: IsingInstance, config: Any, seed: int, trace_cfg: Optional[TraceConfig]) -> TrialOutcome:  # pragma: no cover - interface method
        raise NotImplementedError("Solver subclasses must implement _solve()")
