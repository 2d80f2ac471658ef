# Copyright (c) 2025 takotime808
"""
Exhaustive ground-state search for small instances.

Enumerates all ``2^(n-1)`` states with spin ``n-1`` fixed to ``+1`` (global
flip symmetry) in vectorized blocks.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np

from isingbench.errors import InvalidArgumentError
from isingbench.problems.instance import IsingInstance, Weight

MAX_EXHAUSTIVE_N = 24
_BLOCK = 1 << 14


def all_energies(inst: IsingInstance) -> np.ndarray:
    """Energies of all ``2^(n-1)`` canonical states, indexed by their bit pattern."""
    n = inst.n
    if n > MAX_EXHAUSTIVE_N:
        raise InvalidArgumentError(f"exhaustive search limited to n <= {MAX_EXHAUSTIVE_N}, got {n}")
    dtype = np.int64 if inst.is_integral else np.float64
    w = inst.dense_weights().astype(dtype)
    total = 1 << (n - 1)
    out = np.empty(total, dtype=dtype)
    shifts = np.arange(n - 1, dtype=np.int64)
    for start in range(0, total, _BLOCK):
        idx = np.arange(start, min(start + _BLOCK, total), dtype=np.int64)
        bits = (idx[:, None] >> shifts[None, :]) & 1
        x = np.ones((idx.size, n), dtype=dtype)
        x[:, : n - 1] = 1 - 2 * bits
        pair2 = np.einsum("ki,ij,kj->k", x, w, x)
        out[start : start + idx.size] = pair2 // 2 if inst.is_integral else 0.5 * pair2
    return out


def ground_state(inst: IsingInstance) -> Tuple[Weight, np.ndarray]:
    """
    Minimum energy and one minimizing ``±1`` vector (lowest bit pattern wins).

    Raises
    ------
    InvalidArgumentError
        If ``n`` exceeds :data:`MAX_EXHAUSTIVE_N`.
    """
    energies = all_energies(inst)
    k = int(np.argmin(energies))
    n = inst.n
    x = np.ones(n, dtype=np.int8)
    for b in range(n - 1):
        if (k >> b) & 1:
            x[b] = -1
    best = energies[k]
    return (int(best) if inst.is_integral else float(best)), x
