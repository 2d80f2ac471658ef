# Copyright (c) 2025 takotime808
"""
Hopfield-Tank neural network (HTNN).

Explicit Euler integration of

    dx_i/dt = -alpha x_i + beta sum_j J_ij f(x_j),   f(x) = tanh(gain * x)

with ``gain = 1`` by default. Activations are not clipped; a non-finite value
raises :class:`~isingbench.errors.DivergenceError`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from isingbench.errors import DimensionMismatchError, DivergenceError, InvalidArgumentError
from isingbench.kernels.energy import ising_energy
from isingbench.problems.instance import IsingInstance, Matrix
from isingbench.problems.state import SpinState
from isingbench.solvers.base import BaseSolver, TraceConfig, TraceRecorder, TrialOutcome
from isingbench.utils.utils import make_rng


@dataclass
class AnalogState:
    """
    Real-valued neuron activations.

    Attributes
    ----------
    x : numpy.ndarray
        ``float64`` activations, nominally in ``[-1, 1]``.
    t : float
        Accumulated model time.
    """
    x: np.ndarray
    t: float = 0.0

    def __post_init__(self) -> None:
        self.x = np.asarray(self.x, dtype=np.float64)
        if self.x.ndim != 1:
            raise DimensionMismatchError(f"activations must be a vector, got shape {self.x.shape}")
        if not np.all(np.isfinite(self.x)):
            raise InvalidArgumentError("activations must be finite")


@dataclass
class HTNNConfig:
    """
    Attributes
    ----------
    alpha : float
        Neuron decay rate (> 0).
    beta : float
        Synaptic strength (>= 0).
    dt : float
        Euler step (> 0).
    max_steps : int
        Number of Euler steps per trial.
    gain : float
        Slope of the activation, ``f(x) = tanh(gain * x)``; large gains
        approach the binary Hopfield update.
    init_scale : float
        Random starts are uniform in ``[-init_scale, init_scale]``.
    """
    alpha: float = 6.0
    beta: float = 0.1
    dt: float = 0.01
    max_steps: int = 1000
    gain: float = 1.0
    init_scale: float = 0.1

    def validate(self) -> None:
        if not self.alpha > 0:
            raise InvalidArgumentError(f"alpha must be > 0, got {self.alpha}")
        if not self.beta >= 0:
            raise InvalidArgumentError(f"beta must be >= 0, got {self.beta}")
        if not self.dt > 0:
            raise InvalidArgumentError(f"dt must be > 0, got {self.dt}")
        if self.max_steps < 1:
            raise InvalidArgumentError(f"max_steps must be >= 1, got {self.max_steps}")
        if not self.gain > 0:
            raise InvalidArgumentError(f"gain must be > 0, got {self.gain}")
        if not self.init_scale >= 0:
            raise InvalidArgumentError(f"init_scale must be >= 0, got {self.init_scale}")


def _euler(x: np.ndarray, jf: Matrix, cfg: HTNNConfig) -> np.ndarray:
    drive = jf @ np.tanh(cfg.gain * x)
    return x + cfg.dt * (-cfg.alpha * x + cfg.beta * drive)


def htnn_step(inst: IsingInstance, s: AnalogState, cfg: HTNNConfig, *, step: int = 1) -> AnalogState:
    """
    One Euler step: ``x <- x + dt * (-alpha x + beta J tanh(gain x))``.

    Raises
    ------
    DivergenceError
        If the new state is not finite (``step`` is reported).
    """
    if s.x.shape[0] != inst.n:
        raise DimensionMismatchError(f"expected {inst.n} activations, got {s.x.shape[0]}")
    nxt = _euler(s.x, inst.float_couplings(), cfg)
    if not np.all(np.isfinite(nxt)):
        raise DivergenceError(step, "HTNN activation")
    return AnalogState(x=nxt, t=s.t + cfg.dt)


def round_signs(values: np.ndarray) -> np.ndarray:
    """``+1`` for ``v >= 0``, ``-1`` for ``v < 0`` (zero rounds up)."""
    return np.where(np.asarray(values) < 0, -1, 1).astype(np.int8)


def round_state(s: AnalogState, inst: IsingInstance) -> SpinState:
    """
    Binary state from analog activations: positive → ``+1``, negative → ``-1``,
    exactly zero → ``+1``. Idempotent on ``±1``-valued input.
    """
    return SpinState.from_spins(inst, round_signs(s.x))


def htnn_solve(
    inst: IsingInstance,
    x0: AnalogState,
    cfg: HTNNConfig,
    trace_cfg: Optional[TraceConfig] = None,
) -> TrialOutcome:
    """
    Integrate ``cfg.max_steps`` Euler steps from ``x0``.

    Trace energies are those of the rounded state; the outcome's final state
    is the rounded final activation vector.
    """
    cfg.validate()
    if x0.x.shape[0] != inst.n:
        raise DimensionMismatchError(f"expected {inst.n} activations, got {x0.x.shape[0]}")
    jf = inst.float_couplings()
    x = x0.x.copy()

    rec = TraceRecorder(inst, "htnn", trace_cfg)
    rec.start()
    rec.record(0, ising_energy(inst, round_signs(x)).value)

    step = 0
    stop = rec.should_stop
    while not stop and step < cfg.max_steps:
        x = _euler(x, jf, cfg)
        step += 1
        if not np.all(np.isfinite(x)):
            raise DivergenceError(step, "HTNN activation")
        if rec.due(step):
            stop = rec.record(step, ising_energy(inst, round_signs(x)).value)

    rec.record(step, ising_energy(inst, round_signs(x)).value)
    final = round_state(AnalogState(x=x, t=x0.t + step * cfg.dt), inst)
    return rec.outcome(final, ising_energy(inst, final), step)


class HopfieldTankSolver(BaseSolver):
    """HTNN with a uniform ``[-init_scale, init_scale]`` start from the trial stream."""

    solver_id = "htnn"
    config_type = HTNNConfig

    def _solve(self, inst: IsingInstance, config: HTNNConfig, seed: int, trace_cfg: Optional[TraceConfig]) -> TrialOutcome:
        rng = make_rng(seed)
        x0 = AnalogState(x=rng.uniform(-config.init_scale, config.init_scale, size=inst.n))
        return htnn_solve(inst, x0, config, trace_cfg)
