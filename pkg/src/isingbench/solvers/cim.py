# Copyright (c) 2025 takotime808
"""
Measurement-feedback coherent Ising machine (CIM), simulated with c-number
stochastic equations.

One roundtrip applies three maps in order:

1. gain (Euler-Maruyama)::

       c_i <- c_i + (p - c_i^2 - s_i^2) c_i dt + (1/A_s) sqrt(c_i^2 + s_i^2 + 1/2) sqrt(dt) g_i

2. measurement out-coupling, ``f_i ~ Normal(0, 1/2)``::

       c_i <- sqrt(1 - T_mes) c_i + sqrt(T_mes) f_i / A_s
       (the measured amplitude c~_i is the pre-map c_i, optionally quantized)

3. feedback injection::

       c_i <- sqrt(1 - T_inj) c_i + sqrt(T_inj) xi sum_j J_ij c~_j

The pump ``p`` ramps linearly from ``p_start`` to ``p_end`` over
``ramp_roundtrips`` and is then held. By default the quadrature amplitude
``s`` is identically zero; ``two_quadrature=True`` evolves it with the
de-amplified gain ``(-p - c^2 - s^2) s`` and the same out-coupling loss,
without feedback.

Random draws per roundtrip come from the trial generator in a fixed order:
gain noise for ``c`` (then ``s``), then vacuum noise for ``c`` (then ``s``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple, Union

import numpy as np

from isingbench.errors import DimensionMismatchError, DivergenceError, InvalidArgumentError
from isingbench.kernels.energy import ising_energy
from isingbench.problems.instance import IsingInstance, Matrix
from isingbench.problems.state import SpinState
from isingbench.solvers.base import BaseSolver, TraceConfig, TraceRecorder, TrialOutcome
from isingbench.solvers.hopfield_tank import round_signs
from isingbench.utils.utils import make_rng

VACUUM_VARIANCE = 0.5


@dataclass
class OPOState:
    """
    Pulse amplitudes.

    Attributes
    ----------
    c : numpy.ndarray
        In-phase amplitudes (signal-amplitude units).
    s : numpy.ndarray
        Quadrature amplitudes (zero in single-quadrature mode).
    roundtrip : int
        Completed roundtrips.
    """
    c: np.ndarray
    s: np.ndarray = field(default=None)  # type: ignore[assignment]
    roundtrip: int = 0

    def __post_init__(self) -> None:
        self.c = np.asarray(self.c, dtype=np.float64)
        self.s = np.zeros_like(self.c) if self.s is None else np.asarray(self.s, dtype=np.float64)
        if self.c.ndim != 1 or self.s.shape != self.c.shape:
            raise DimensionMismatchError(f"amplitude shapes differ: c {self.c.shape}, s {self.s.shape}")

    @property
    def n(self) -> int:
        return int(self.c.shape[0])


@dataclass
class CIMConfig:
    """
    CIM simulation parameters.

    Attributes
    ----------
    p_start, p_end : float
        Pump ramp end points (``p_start <= p_end``); threshold is ``p = 0``.
    ramp_roundtrips : int
        Roundtrips over which the pump ramps linearly.
    roundtrips : int | None
        Total roundtrips; ``None`` means ``ramp_roundtrips``. The pump is held
        at ``p_end`` after the ramp.
    dt : float
        Euler-Maruyama step per roundtrip.
    a_s : float
        Saturation amplitude scale ``A_s``.
    t_mes, t_inj : float
        Measurement out-coupling and injection ratios in ``[0, 1]``.
    xi : float
        Feedback gain.
    noise : bool
        Gain and vacuum noise on/off.
    quantize_bits : int | None
        Quantize the measured amplitudes to ``2**bits`` levels (5 mirrors the
        hardware ADC); ``None`` disables.
    quantize_range : float
        Quantizer full scale ``R``.
    two_quadrature : bool
        Evolve ``s`` as well.
    init_std : float
        Initial ``c_i ~ Normal(0, init_std**2)``.
    seed : int
        Seed of the simulation stream.
    """
    p_start: float = -0.5
    p_end: float = 1.2
    ramp_roundtrips: int = 1000
    roundtrips: Optional[int] = None
    dt: float = 0.01
    a_s: float = 200.0
    t_mes: float = 0.1
    t_inj: float = 0.1
    xi: float = 1.0
    noise: bool = True
    quantize_bits: Optional[int] = None
    quantize_range: float = 2.0
    two_quadrature: bool = False
    init_std: float = 0.01
    seed: int = 0

    @classmethod
    def for_instance(cls, inst: IsingInstance, **overrides) -> "CIMConfig":
        """Defaults with the feedback gain scaled to ``1/sqrt(n)``."""
        base = {"xi": 1.0 / math.sqrt(inst.n)}
        base.update(overrides)
        return cls(**base)

    @property
    def total_roundtrips(self) -> int:
        return self.roundtrips if self.roundtrips is not None else self.ramp_roundtrips

    def pump(self, r: int) -> float:
        """Pump rate at roundtrip ``r`` (0-based); non-decreasing in ``r``."""
        if self.ramp_roundtrips <= 1:
            return self.p_end
        frac = min(r / (self.ramp_roundtrips - 1), 1.0)
        return self.p_start + (self.p_end - self.p_start) * frac

    def validate(self) -> None:
        if not 0.0 <= self.t_mes <= 1.0:
            raise InvalidArgumentError(f"t_mes must be in [0, 1], got {self.t_mes}")
        if not 0.0 <= self.t_inj <= 1.0:
            raise InvalidArgumentError(f"t_inj must be in [0, 1], got {self.t_inj}")
        if not self.dt > 0:
            raise InvalidArgumentError(f"dt must be > 0, got {self.dt}")
        if not self.a_s > 0:
            raise InvalidArgumentError(f"a_s must be > 0, got {self.a_s}")
        if self.p_end < self.p_start:
            raise InvalidArgumentError("pump ramp must be non-decreasing (p_end >= p_start)")
        if self.ramp_roundtrips < 1 or self.total_roundtrips < 1:
            raise InvalidArgumentError("roundtrip counts must be >= 1")
        if self.quantize_bits is not None and self.quantize_bits < 1:
            raise InvalidArgumentError(f"quantize_bits must be >= 1, got {self.quantize_bits}")
        if not self.quantize_range > 0:
            raise InvalidArgumentError(f"quantize_range must be > 0, got {self.quantize_range}")
        if not self.init_std >= 0:
            raise InvalidArgumentError(f"init_std must be >= 0, got {self.init_std}")
        if self.seed < 0:
            raise InvalidArgumentError(f"seed must be non-negative, got {self.seed}")


def _finite(state: OPOState, step: int) -> OPOState:
    if not (np.all(np.isfinite(state.c)) and np.all(np.isfinite(state.s))):
        raise DivergenceError(step, "CIM amplitude")
    return state


def _need_rng(cfg: CIMConfig, rng: Optional[np.random.Generator]) -> np.random.Generator:
    if rng is None:
        raise InvalidArgumentError("noise is on but no generator was supplied")
    return rng


def gain_step(
    state: OPOState, p: float, cfg: CIMConfig, rng: Optional[np.random.Generator] = None
) -> OPOState:
    """
    Euler-Maruyama gain step at pump rate ``p``.

    Raises
    ------
    DivergenceError
        If an amplitude becomes non-finite.
    """
    c, s = state.c, state.s
    r2 = c * c + s * s
    new_c = c + (p - r2) * c * cfg.dt
    new_s = s + (-p - r2) * s * cfg.dt if cfg.two_quadrature else s
    if cfg.noise:
        gen = _need_rng(cfg, rng)
        amp = np.sqrt(r2 + 0.5) * (math.sqrt(cfg.dt) / cfg.a_s)
        new_c = new_c + amp * gen.standard_normal(state.n)
        if cfg.two_quadrature:
            new_s = new_s + amp * gen.standard_normal(state.n)
    return _finite(OPOState(c=new_c, s=new_s, roundtrip=state.roundtrip), state.roundtrip)


def quantize(v: Union[float, np.ndarray], bits: int, R: float) -> Union[float, np.ndarray]:
    """
    Clip to ``[-R, R]`` and snap to the nearest of ``2**bits`` evenly spaced
    levels spanning ``[-R, R]`` (both endpoints are levels).

    Monotone and idempotent; ``|quantize(v) - v| <= R / (2**bits - 1)`` on
    ``[-R, R]``.

    Examples
    --------
    >>> quantize(3.0, 5, 1.0)
    1.0
    >>> quantize(-1.0, 1, 1.0)
    -1.0
    """
    if bits < 1:
        raise InvalidArgumentError(f"bits must be >= 1, got {bits}")
    if not R > 0:
        raise InvalidArgumentError(f"range must be > 0, got {R}")
    top = (1 << bits) - 1
    step = 2.0 * R / top
    k = np.rint((np.clip(v, -R, R) + R) / step)
    out = np.where(k >= top, R, np.clip(-R + k * step, -R, R))
    return float(out) if np.ndim(out) == 0 else out


def measure(
    state: OPOState, cfg: CIMConfig, rng: Optional[np.random.Generator] = None
) -> Tuple[OPOState, np.ndarray]:
    """
    Out-couple ``T_mes`` of each pulse.

    Returns the post-measurement state and the measured amplitudes ``c~``
    (the pre-map ``c``, quantized when ``cfg.quantize_bits`` is set).
    """
    measured = state.c.copy()
    if cfg.quantize_bits is not None:
        measured = np.asarray(quantize(measured, cfg.quantize_bits, cfg.quantize_range))
    keep = math.sqrt(1.0 - cfg.t_mes)
    leak = math.sqrt(cfg.t_mes) / cfg.a_s
    new_c = keep * state.c
    new_s = keep * state.s if cfg.two_quadrature else state.s
    if cfg.noise and cfg.t_mes > 0:
        gen = _need_rng(cfg, rng)
        sd = math.sqrt(VACUUM_VARIANCE)
        new_c = new_c + leak * gen.normal(0.0, sd, size=state.n)
        if cfg.two_quadrature:
            new_s = new_s + leak * gen.normal(0.0, sd, size=state.n)
    out = OPOState(c=new_c, s=new_s, roundtrip=state.roundtrip)
    return _finite(out, state.roundtrip), measured


def inject(state: OPOState, measured: np.ndarray, inst: IsingInstance, cfg: CIMConfig) -> OPOState:
    """
    Feedback injection ``c <- sqrt(1-T_inj) c + sqrt(T_inj) xi J c~``.

    Raises
    ------
    DimensionMismatchError
        If ``measured`` or the state does not have ``n`` entries.
    """
    m = np.asarray(measured, dtype=np.float64)
    if m.shape != (inst.n,) or state.n != inst.n:
        raise DimensionMismatchError(f"expected {inst.n} amplitudes, got {m.shape} / {state.n}")
    jf = inst.float_couplings()
    return _inject(state, m, jf, cfg)


def _inject(state: OPOState, m: np.ndarray, jf: Matrix, cfg: CIMConfig) -> OPOState:
    if cfg.t_inj == 0:
        return OPOState(c=state.c.copy(), s=state.s, roundtrip=state.roundtrip)
    feedback = math.sqrt(cfg.t_inj) * cfg.xi * (jf @ m)
    new_c = math.sqrt(1.0 - cfg.t_inj) * state.c + feedback
    return _finite(OPOState(c=new_c, s=state.s, roundtrip=state.roundtrip), state.roundtrip)


def cim_solve(
    inst: IsingInstance,
    cfg: CIMConfig,
    trace_cfg: Optional[TraceConfig] = None,
    *,
    c0: Optional[np.ndarray] = None,
) -> TrialOutcome:
    """
    Simulate ``cfg.total_roundtrips`` roundtrips of gain → measure → inject.

    The trace energy is that of ``sign(c)`` (zero → ``+1``); the final state
    is the sign-rounded final amplitude vector. Deterministic per
    ``cfg.seed`` (and ``c0``).

    Raises
    ------
    DivergenceError
        With the roundtrip index at which an amplitude became non-finite.
    """
    cfg.validate()
    rng = make_rng(cfg.seed)
    if c0 is None:
        c_init = rng.normal(0.0, cfg.init_std, size=inst.n) if cfg.init_std > 0 else np.zeros(inst.n)
    else:
        c_init = np.asarray(c0, dtype=np.float64)
        if c_init.shape != (inst.n,):
            raise DimensionMismatchError(f"expected {inst.n} initial amplitudes, got {c_init.shape}")
    state = OPOState(c=c_init.copy())
    jf = inst.float_couplings()

    rec = TraceRecorder(inst, "cim", trace_cfg)
    rec.start()
    rec.record(0, ising_energy(inst, round_signs(state.c)).value)

    total = cfg.total_roundtrips
    stop = rec.should_stop
    r = 0
    while not stop and r < total:
        state = gain_step(state, cfg.pump(r), cfg, rng)
        state, measured = measure(state, cfg, rng)
        state = _inject(state, measured, jf, cfg)
        r += 1
        state = replace(state, roundtrip=r)
        if rec.due(r):
            stop = rec.record(r, ising_energy(inst, round_signs(state.c)).value)

    rec.record(r, ising_energy(inst, round_signs(state.c)).value)
    final = SpinState.from_spins(inst, round_signs(state.c))
    return rec.outcome(final, ising_energy(inst, final), r)


class CoherentIsingSolver(BaseSolver):
    """CIM simulator; the trial seed replaces ``config.seed``."""

    solver_id = "cim"
    config_type = CIMConfig

    def default_config(self, inst: IsingInstance) -> CIMConfig:
        return CIMConfig.for_instance(inst)

    def _solve(self, inst: IsingInstance, config: CIMConfig, seed: int, trace_cfg: Optional[TraceConfig]) -> TrialOutcome:
        return cim_solve(inst, replace(config, seed=seed), trace_cfg)
