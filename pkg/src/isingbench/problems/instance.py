# Copyright (c) 2025 takotime808
"""
Problem instances: data model, generation and edge-list I/O.

Conventions
-----------
* Weights ``w_ij`` are symmetric with a zero diagonal. Couplings are
  ``J_ij = -w_ij`` so that minimizing the Ising energy
  ``E(x) = -sum_{i<j} J_ij x_i x_j`` maximizes the cut.
* Indices are **1-based in files** and **0-based everywhere in memory**;
  :func:`parse_edge_list` and :func:`write_edge_list` are the only places that
  translate between the two.
* Weight classes: ``±1`` instances (every ``|w_ij| <= 1``) store weights as
  ``int32``, other integer instances as ``int64``, anything else as
  ``float64``. Couplings and fields of both integer classes are ``int64`` so
  energies are exact.
* Layout: a dense ``(n, n)`` array when at least :data:`DENSE_FILL` of the
  matrix is non-zero, otherwise ``scipy.sparse`` CSR. Both support ``@``, and
  :meth:`IsingInstance.coupling_row` gives the ``O(deg i)`` row view used for
  flip updates.
* ``±1`` instances additionally carry the sign-bitplane pair used by
  :mod:`isingbench.kernels.packed`.

File format (Gset layout)::

    # optional comment lines
    n m
    i j w        (m lines, 1-based, i != j)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Literal, Optional, TextIO, Tuple, Union

import numpy as np
from scipy import sparse

from isingbench.errors import EdgeListParseError, InvalidArgumentError
from isingbench.kernels.packed import WORD_BITS, pack_pairs, pack_rows
from isingbench.utils.utils import make_rng

logger = logging.getLogger(__name__)

Weight = Union[int, float]
Matrix = Union[np.ndarray, sparse.csr_array]
Layout = Literal["dense", "sparse"]

DENSE_FILL = 0.25
_INT64 = np.iinfo(np.int64)


def _freeze(m: Matrix) -> None:
    arrays = (m.data, m.indices, m.indptr) if sparse.issparse(m) else (m,)
    for a in arrays:
        a.setflags(write=False)


@dataclass(frozen=True, eq=False)
class IsingInstance:
    """
    Immutable MAX-CUT / Ising problem.

    Attributes
    ----------
    n : int
        Vertex count.
    weights : numpy.ndarray | scipy.sparse.csr_array
        Symmetric ``(n, n)`` weights with a zero diagonal, ``int32`` (``±1``),
        ``int64`` or ``float64``, read-only. Dense or CSR (see ``layout``).
    couplings : numpy.ndarray | scipy.sparse.csr_array
        ``J = -weights`` in the same layout, ``int64`` for integer instances,
        read-only.
    total_weight : int | float
        ``W = sum_{i<j} w_ij``.
    edge_plane, sign_plane : numpy.ndarray | None
        ``(n, words)`` ``uint64`` bitplanes, present only when every
        ``|w_ij|`` is 0 or 1. Bit ``j`` of row ``i`` (little-endian within a
        word) is set in ``edge_plane`` iff ``w_ij != 0`` and in ``sign_plane``
        iff ``w_ij == -1``. Padding bits are zero.
    """
    n: int
    weights: Matrix
    couplings: Matrix = field(repr=False)
    total_weight: Weight
    edge_plane: Optional[np.ndarray] = field(default=None, repr=False)
    sign_plane: Optional[np.ndarray] = field(default=None, repr=False)

    # ------------------------------------------------------------------ build

    @classmethod
    def from_weights(cls, weights: np.ndarray, *, layout: Optional[Layout] = None) -> "IsingInstance":
        """
        Validate a dense weight matrix and build an instance from it.

        Integer (or boolean) dtypes give an integer instance; every other
        dtype a ``float64`` one. ``layout`` overrides the fill-based choice.
        """
        w = np.asarray(weights)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise InvalidArgumentError(f"weights must be a square matrix, got shape {w.shape}")
        n = int(w.shape[0])
        if n < 1:
            raise InvalidArgumentError("an instance needs at least one vertex")
        integral = bool(np.issubdtype(w.dtype, np.integer) or w.dtype == np.bool_)
        if integral:
            if w.dtype.kind == "u" and w.size and int(w.max()) > _INT64.max:
                raise InvalidArgumentError("integer weights must fit in int64")
            w = w.astype(np.int64)
        else:
            w = w.astype(np.float64)
            if not np.all(np.isfinite(w)):
                raise InvalidArgumentError("weights must be finite")
        if np.any(np.diagonal(w) != 0):
            raise InvalidArgumentError("self-loops are not allowed (w_ii must be 0)")
        if not np.array_equal(w, w.T):
            raise InvalidArgumentError("weights must be symmetric")
        rows, cols = np.nonzero(np.triu(w, 1))
        return cls._assemble(n, rows, cols, w[rows, cols], integral=integral, layout=layout)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges,
        *,
        integral: Optional[bool] = None,
        layout: Optional[Layout] = None,
    ) -> "IsingInstance":
        """
        Build an instance from 0-based ``(i, j, w)`` triples.

        Parameters
        ----------
        n
            Vertex count.
        edges
            Iterable of ``(i, j, w)``; each unordered pair at most once.
        integral
            Force the integer (``True``) or real (``False``) weight class.
            By default the class is integer iff every weight is an ``int``.
        layout
            ``"dense"`` or ``"sparse"``; by default chosen from the fill.
        """
        if n < 1:
            raise InvalidArgumentError("an instance needs at least one vertex")
        triples = list(edges)
        if integral is None:
            integral = all(isinstance(w, (int, np.integer)) for _, _, w in triples)
        seen = set()
        rows, cols, vals = [], [], []
        for i, j, wij in triples:
            i, j = int(i), int(j)
            if i == j:
                raise InvalidArgumentError(f"self-loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidArgumentError(f"edge ({i}, {j}) outside [0, {n})")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise InvalidArgumentError(f"duplicate edge ({i}, {j})")
            seen.add(key)
            rows.append(key[0])
            cols.append(key[1])
            vals.append(wij)
        if integral:
            try:
                v = np.array([int(x) for x in vals], dtype=np.int64)
            except OverflowError:
                raise InvalidArgumentError("integer weights must fit in int64") from None
        else:
            v = np.array(vals, dtype=np.float64)
        return cls._assemble(
            n, np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64), v,
            integral=integral, layout=layout,
        )

    @classmethod
    def _assemble(
        cls,
        n: int,
        rows: np.ndarray,
        cols: np.ndarray,
        vals: np.ndarray,
        *,
        integral: bool,
        layout: Optional[Layout],
    ) -> "IsingInstance":
        # rows < cols, each pair once
        keep = vals != 0
        rows, cols, vals = rows[keep], cols[keep], vals[keep]
        if not integral and not np.all(np.isfinite(vals)):
            raise InvalidArgumentError("weights must be finite")
        pm1 = integral and bool(np.all((vals >= -1) & (vals <= 1)))
        dtype = np.int32 if pm1 else (np.int64 if integral else np.float64)
        vals = vals.astype(dtype)
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]

        if pm1:
            total_weight: Weight = int(vals.sum(dtype=np.int64))
        elif integral:
            total_weight = sum(vals.tolist())
        else:
            total_weight = float(vals.sum(dtype=np.float64))

        if layout is None:
            layout = "dense" if 2 * rows.size >= DENSE_FILL * n * n else "sparse"
        sym_r = np.concatenate([rows, cols])
        sym_c = np.concatenate([cols, rows])
        sym_v = np.concatenate([vals, vals])
        if layout == "dense":
            w: Matrix = np.zeros((n, n), dtype=dtype)
            w[sym_r, sym_c] = sym_v
        elif layout == "sparse":
            w = sparse.csr_array((sym_v, (sym_r, sym_c)), shape=(n, n), dtype=dtype)
            w.sort_indices()
        else:
            raise InvalidArgumentError(f"unknown layout {layout!r}")
        couplings = -(w.astype(np.int64) if integral else w)

        edge_plane = sign_plane = None
        if pm1:
            if layout == "dense":
                edge_plane = pack_rows(w != 0)
                sign_plane = pack_rows(w < 0)
            else:
                neg = sym_v < 0
                edge_plane = pack_pairs(n, sym_r, sym_c)
                sign_plane = pack_pairs(n, sym_r[neg], sym_c[neg])
            edge_plane.setflags(write=False)
            sign_plane.setflags(write=False)

        _freeze(w)
        _freeze(couplings)
        return cls(
            n=n,
            weights=w,
            couplings=couplings,
            total_weight=total_weight,
            edge_plane=edge_plane,
            sign_plane=sign_plane,
        )

    # ---------------------------------------------------------------- queries

    @property
    def is_integral(self) -> bool:
        """True for the exact integer weight classes (``±1`` and general integer)."""
        return self.weights.dtype.kind == "i"

    @property
    def is_sparse(self) -> bool:
        return sparse.issparse(self.weights)

    @property
    def layout(self) -> Layout:
        return "sparse" if self.is_sparse else "dense"

    @property
    def has_bitplanes(self) -> bool:
        return self.edge_plane is not None

    @property
    def words(self) -> int:
        """Number of 64-bit words per packed row."""
        return -(-self.n // WORD_BITS)

    def _upper(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Upper-triangle ``(rows, cols, vals)`` sorted by ``(i, j)``."""
        if self.is_sparse:
            w = self.weights
            rows = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(w.indptr))
            cols = w.indices.astype(np.int64)
            mask = rows < cols
            return rows[mask], cols[mask], w.data[mask]
        rows, cols = np.nonzero(np.triu(self.weights, 1))
        return rows, cols, self.weights[rows, cols]

    @property
    def num_edges(self) -> int:
        if self.is_sparse:
            return int(self.weights.nnz // 2)
        return int(np.count_nonzero(np.triu(self.weights, 1)))

    def edges(self) -> Iterator[Tuple[int, int, Weight]]:
        """Yield 0-based ``(i, j, w)`` with ``i < j``, sorted by ``(i, j)``."""
        rows, cols, vals = self._upper()
        yield from zip(rows.tolist(), cols.tolist(), vals.tolist())

    def dense_weights(self) -> np.ndarray:
        """Weights as a fresh dense ``(n, n)`` array."""
        return self.weights.toarray() if self.is_sparse else self.weights.copy()

    def coupling_row(self, i: int) -> Tuple[Union[slice, np.ndarray], np.ndarray]:
        """
        ``(index, values)`` with ``J[i, index] == values`` covering every
        non-zero of row ``i``: the whole row when dense, the CSR slice when
        sparse.
        """
        j = self.couplings
        if self.is_sparse:
            lo, hi = j.indptr[i], j.indptr[i + 1]
            return j.indices[lo:hi], j.data[lo:hi]
        return slice(None), j[i]

    def float_couplings(self) -> Matrix:
        """``J`` as ``float64`` in the instance layout (no copy for real instances)."""
        j = self.couplings
        return j if j.dtype == np.float64 else j.astype(np.float64)

    def local_fields(self, spins: np.ndarray) -> np.ndarray:
        """
        ``h_i = sum_j J_ij x_j`` for a ``±1`` vector (exact for integer
        instances).
        """
        x = np.asarray(spins, dtype=self.couplings.dtype)
        return np.asarray(self.couplings @ x)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IsingInstance):
            return NotImplemented
        if self.n != other.n or self.weights.dtype != other.weights.dtype:
            return False
        return all(np.array_equal(a, b) for a, b in zip(self._upper(), other._upper()))

    __hash__ = None  # type: ignore[assignment]


# ----------------------------------------------------------------- generation

def gen_complete_pm1(n: int, seed: int) -> IsingInstance:
    """
    Complete graph on ``n`` vertices with i.i.d. uniform ``±1`` weights.

    The upper triangle is filled in row-major ``(i, j), i < j`` order from
    one draw of ``rng.integers(0, 2, size=n(n-1)/2)`` on the PCG64 stream of
    :func:`isingbench.utils.utils.make_rng`; bit 1 means ``w_ij = -1``. Equal
    ``(n, seed)`` give bit-identical instances.

    Raises
    ------
    InvalidArgumentError
        If ``n < 2``.
    """
    if n < 2:
        raise InvalidArgumentError(f"a complete graph needs n >= 2, got {n}")
    rng = make_rng(seed)
    iu = np.triu_indices(n, 1)
    bits = rng.integers(0, 2, size=iu[0].size, dtype=np.int64)
    vals = (1 - 2 * bits).astype(np.int32)
    logger.debug("generated complete ±1 instance n=%d seed=%d", n, seed)
    return IsingInstance._assemble(n, iu[0], iu[1], vals, integral=True, layout="dense")


# ---------------------------------------------------------------------- I/O

def _parse_weight(token: str) -> Weight:
    try:
        return int(token)
    except ValueError:
        pass
    if "/" in token:
        return float(Fraction(token))
    return float(token)


def parse_edge_list(text: Union[str, TextIO]) -> IsingInstance:
    """
    Parse the edge-list format into an instance.

    Raises
    ------
    EdgeListParseError
        Malformed line, index outside ``[1, n]``, self-loop, duplicate edge,
        or an edge count that disagrees with the header. The error carries the
        1-based line number.
    """
    lines = text.splitlines() if isinstance(text, str) else text.read().splitlines()

    n = m = None
    triples = []
    seen = set()
    last = 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        last = lineno
        parts = line.split()
        if n is None:
            if len(parts) != 2:
                raise EdgeListParseError(f"expected header 'n m', got {raw!r}", lineno)
            try:
                n, m = int(parts[0]), int(parts[1])
            except ValueError:
                raise EdgeListParseError(f"non-integer header {raw!r}", lineno) from None
            if n < 1 or m < 0:
                raise EdgeListParseError(f"invalid header values n={n} m={m}", lineno)
            continue
        if len(triples) >= m:
            raise EdgeListParseError(f"more edge lines than the declared m={m}", lineno)
        if len(parts) != 3:
            raise EdgeListParseError(f"expected 'i j w', got {raw!r}", lineno)
        try:
            i, j = int(parts[0]), int(parts[1])
            wij = _parse_weight(parts[2])
        except (ValueError, ZeroDivisionError, OverflowError):
            raise EdgeListParseError(f"malformed edge line {raw!r}", lineno) from None
        if isinstance(wij, int):
            if not _INT64.min <= wij <= _INT64.max:
                raise EdgeListParseError(f"integer weight {wij} does not fit in int64", lineno)
        elif not math.isfinite(wij):
            raise EdgeListParseError(f"non-finite weight in {raw!r}", lineno)
        if not (1 <= i <= n and 1 <= j <= n):
            raise EdgeListParseError(f"vertex index out of range [1, {n}] in {raw!r}", lineno)
        if i == j:
            raise EdgeListParseError(f"self-loop on vertex {i}", lineno)
        key = (min(i, j), max(i, j))
        if key in seen:
            raise EdgeListParseError(f"duplicate edge {key}", lineno)
        seen.add(key)
        triples.append((i - 1, j - 1, wij))

    if n is None:
        raise EdgeListParseError("missing header 'n m'", max(last, 1))
    if len(triples) != m:
        raise EdgeListParseError(f"expected {m} edges, found {len(triples)}", max(last, 1))

    integral = all(isinstance(w, int) for _, _, w in triples)
    return IsingInstance.from_edges(n, triples, integral=integral)


def _format_weight(w: Weight) -> str:
    return str(w) if isinstance(w, int) else repr(float(w))


def write_edge_list(inst: IsingInstance) -> str:
    """
    Canonical edge-list text: header then edges sorted by ``(i, j)``, ``i < j``,
    1-based, LF line endings, no trailing newline after the last line.
    Integer weights are written as integers, reals with ``repr`` (lossless).
    """
    edges = list(inst.edges())
    lines = [f"{inst.n} {len(edges)}"]
    lines.extend(f"{i + 1} {j + 1} {_format_weight(w)}" for i, j, w in edges)
    return "\n".join(lines)


def read_instance(path: Union[str, Path]) -> IsingInstance:
    """Load an instance file (see :func:`parse_edge_list`)."""
    p = Path(path)
    if not p.exists() or not p.is_file():
        raise FileNotFoundError(f"Not a file: {p}")
    inst = parse_edge_list(p.read_text(encoding="utf-8"))
    logger.info("loaded %s: n=%d edges=%d W=%s", p.name, inst.n, inst.num_edges, inst.total_weight)
    return inst


def write_instance(inst: IsingInstance, path: Union[str, Path]) -> Path:
    """Write an instance file followed by a final newline."""
    p = Path(path)
    p.write_text(write_edge_list(inst) + "\n", encoding="utf-8", newline="\n")
    return p
