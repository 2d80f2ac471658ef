# Copyright (c) 2025 takotime808
"""
Spin assignments with cached local fields.

A :class:`SpinState` is single-owner: exactly one solver mutates it at a
time. Instances are shared read-only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from isingbench.errors import DimensionMismatchError, InvalidArgumentError
from isingbench.kernels.packed import pack_bits, unpack_bits
from isingbench.problems.instance import IsingInstance


@dataclass(eq=False)
class SpinState:
    """
    A ``±1`` assignment plus cached local fields.

    Attributes
    ----------
    spins : numpy.ndarray
        ``int8`` vector of ``±1`` (working copy used by the solvers).
    bits : numpy.ndarray
        Packed ``uint64`` words; bit ``i`` set iff ``spins[i] == +1``.
    fields : numpy.ndarray
        ``h_i = sum_j J_ij x_j`` (``int64`` for integer instances, else
        ``float64``), kept consistent by :func:`isingbench.kernels.energy.apply_flip`.
    """
    spins: np.ndarray
    bits: np.ndarray
    fields: np.ndarray

    @property
    def n(self) -> int:
        return int(self.spins.shape[0])

    @classmethod
    def from_spins(cls, inst: IsingInstance, spins: Union[Sequence[int], np.ndarray]) -> "SpinState":
        """Build a state from a ``±1`` sequence and compute its fields from scratch."""
        x = np.asarray(spins)
        if x.ndim != 1 or x.shape[0] != inst.n:
            raise DimensionMismatchError(f"expected {inst.n} spins, got shape {x.shape}")
        if not np.all((x == 1) | (x == -1)):
            raise InvalidArgumentError("spins must be +1 or -1")
        x = x.astype(np.int8)
        return cls(spins=x, bits=pack_bits(x > 0), fields=inst.local_fields(x))

    @classmethod
    def from_bits(cls, inst: IsingInstance, bits: np.ndarray) -> "SpinState":
        """Build a state from packed words (bit set ⇔ ``+1``)."""
        up = unpack_bits(np.asarray(bits, dtype=np.uint64), inst.n)
        return cls.from_spins(inst, np.where(up, 1, -1))

    @classmethod
    def random(cls, inst: IsingInstance, rng: np.random.Generator) -> "SpinState":
        """Uniform random ``±1`` state drawn from ``rng``."""
        x = 1 - 2 * rng.integers(0, 2, size=inst.n, dtype=np.int8)
        return cls.from_spins(inst, x)

    def copy(self) -> "SpinState":
        return SpinState(spins=self.spins.copy(), bits=self.bits.copy(), fields=self.fields.copy())

    def is_consistent(self, inst: IsingInstance) -> bool:
        """True iff the bits and cached fields agree with a from-scratch recomputation."""
        fresh = inst.local_fields(self.spins)
        same_fields = (
            np.array_equal(fresh, self.fields)
            if inst.is_integral
            else np.allclose(fresh, self.fields, rtol=1e-9, atol=1e-9)
        )
        return same_fields and np.array_equal(pack_bits(self.spins > 0), self.bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SpinState):
            return NotImplemented
        return np.array_equal(self.spins, other.spins) and np.array_equal(self.fields, other.fields)

    __hash__ = None  # type: ignore[assignment]
