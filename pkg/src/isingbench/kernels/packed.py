# Copyright (c) 2025 takotime808
"""
Bit-packed helpers and the popcount delta-energy kernel.

Layout: row-major, 64-bit little-endian words; bit ``j`` of a row lives in
word ``j // 64`` at position ``j % 64``. Padding bits beyond ``n`` are zero in
every plane and in the spin vector, so they never contribute to a count.

For row ``i`` with edge mask ``E``, sign plane ``S`` (bit set iff
``w_ij = -1``) and spin bits ``B`` (bit set iff ``x_j = +1``)::

    w_ij * x_j = +1   <=>   S_j XOR B_j = 1      (for j with E_j = 1)

so with ``deg = popcount(E)`` and ``agree = popcount(E AND (S XOR B))``::

    sum_j w_ij x_j = 2*agree - deg
    h_i = sum_j J_ij x_j = deg - 2*agree
    dE_i = 2 * x_i * h_i
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from isingbench.errors import MissingBitplaneError

if TYPE_CHECKING:  # pragma: no cover
    from isingbench.problems.instance import IsingInstance
    from isingbench.problems.state import SpinState

WORD_BITS = 64


def pack_bits(mask: np.ndarray) -> np.ndarray:
    """
    Pack a 1-D boolean vector into zero-padded ``uint64`` words.

    Examples
    --------
    >>> pack_bits(np.array([True, False, True])).tolist()
    [5]
    """
    return pack_rows(np.asarray(mask, dtype=bool)[None, :])[0]


def pack_rows(mask: np.ndarray) -> np.ndarray:
    """Pack each row of a 2-D boolean matrix into ``uint64`` words."""
    m = np.asarray(mask, dtype=bool)
    rows, n = m.shape
    words = -(-n // WORD_BITS)
    padded = np.zeros((rows, words * WORD_BITS), dtype=bool)
    padded[:, :n] = m
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64).reshape(rows, words)


def pack_pairs(n: int, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """
    ``(n, words)`` bitplane with bit ``cols[k]`` set in row ``rows[k]``.

    Same layout as :func:`pack_rows` without materializing the dense mask.
    """
    words = -(-n // WORD_BITS)
    out = np.zeros((n, words), dtype=np.uint64)
    c = np.asarray(cols, dtype=np.int64)
    shift = (c & (WORD_BITS - 1)).astype(np.uint64)
    np.bitwise_or.at(out, (np.asarray(rows, dtype=np.int64), c >> 6), np.left_shift(np.uint64(1), shift))
    return out


def unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`pack_bits`: first ``n`` bits as a boolean vector."""
    raw = np.ascontiguousarray(words, dtype="<u8").view(np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


def row_field_packed(inst: "IsingInstance", bits: np.ndarray, i: int) -> int:
    """Local field ``h_i`` of a ``±1`` instance from popcounts of row ``i``."""
    edge = inst.edge_plane[i]
    deg = int(np.bitwise_count(edge).sum())
    agree = int(np.bitwise_count(edge & (inst.sign_plane[i] ^ bits)).sum())
    return deg - 2 * agree


def fields_packed(inst: "IsingInstance", bits: np.ndarray) -> np.ndarray:
    """All local fields at once from the bitplanes (``int64``)."""
    if not inst.has_bitplanes:
        raise MissingBitplaneError("instance has no sign bitplanes (weights outside {-1,0,1})")
    deg = np.bitwise_count(inst.edge_plane).sum(axis=1, dtype=np.int64)
    agree = np.bitwise_count(inst.edge_plane & (inst.sign_plane ^ bits[None, :])).sum(
        axis=1, dtype=np.int64
    )
    return deg - 2 * agree


def delta_energy_packed(inst: "IsingInstance", x: "SpinState", i: int) -> int:
    """
    Flip energy ``dE_i`` computed with bitwise AND/XOR and population counts.

    Returns exactly the same integer as
    :func:`isingbench.kernels.energy.delta_energy`, without touching the
    cached fields.

    Raises
    ------
    MissingBitplaneError
        If the instance is not in sign-bitplane form.
    IndexError
        If ``i`` is outside ``[0, n)``.
    """
    if not inst.has_bitplanes:
        raise MissingBitplaneError("instance has no sign bitplanes (weights outside {-1,0,1})")
    if not 0 <= i < inst.n:
        raise IndexError(f"vertex index {i} out of range [0, {inst.n})")
    h = row_field_packed(inst, x.bits, i)
    return 2 * int(x.spins[i]) * h
