"""Dense GF(2) linear algebra on bit-packed integers.

Rows and columns are stored as Python ints used as bitsets: bit ``j`` of a
row is the entry in column ``j``, bit ``i`` of a column vector is the entry
in row ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

MAX_COLUMNS = 64
MAX_TABLE_COLUMNS = 26

IndexSet = Union[int, Iterable[int]]


@dataclass(frozen=True)
class Gf2Matrix:
    """Immutable ``rows x cols`` matrix over GF(2), stored row-major."""

    rows: int
    cols: int
    bits: tuple[int, ...]
    _columns: tuple[int, ...] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(self.bits) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(self.bits)}")
        limit = 1 << self.cols
        for i, row in enumerate(self.bits):
            if row < 0 or row >= limit:
                raise ValueError(f"row {i} has bits outside {self.cols} columns")
        cols = []
        for j in range(self.cols):
            v = 0
            for i, row in enumerate(self.bits):
                if (row >> j) & 1:
                    v |= 1 << i
            cols.append(v)
        object.__setattr__(self, "_columns", tuple(cols))

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], cols: int | None = None) -> "Gf2Matrix":
        entries = [list(r) for r in entries]
        if cols is None:
            cols = len(entries[0]) if entries else 0
        bits = []
        for r in entries:
            if len(r) != cols:
                raise ValueError("ragged matrix")
            v = 0
            for j, x in enumerate(r):
                if x % 2:
                    v |= 1 << j
            bits.append(v)
        return cls(len(entries), cols, tuple(bits))

    @classmethod
    def from_columns(cls, columns: Sequence[int], rows: int) -> "Gf2Matrix":
        bits = [0] * rows
        for j, c in enumerate(columns):
            if c >> rows:
                raise ValueError(f"column {j} does not fit in {rows} rows")
            for i in range(rows):
                if (c >> i) & 1:
                    bits[i] |= 1 << j
        return cls(rows, len(columns), tuple(bits))

    @property
    def columns(self) -> tuple[int, ...]:
        return self._columns

    def entry(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) out of range")
        return (self.bits[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[(row >> j) & 1 for j in range(self.cols)] for row in self.bits]

    def select_columns(self, idx: Sequence[int]) -> "Gf2Matrix":
        cols = self._columns
        return Gf2Matrix.from_columns([cols[j] for j in idx], self.rows)

    def __str__(self):
        return "\n".join("".join(str(x) for x in r) for r in self.to_lists())


def _as_indices(cols: IndexSet, ncols: int) -> list[int]:
    if isinstance(cols, (int, np.integer)):
        mask = int(cols)
        if mask < 0 or mask >> ncols:
            raise IndexError(f"column mask {mask:#x} exceeds {ncols} columns")
        return [j for j in range(ncols) if (mask >> j) & 1]
    idx = list(cols)
    for j in idx:
        if not 0 <= j < ncols:
            raise IndexError(f"column index {j} out of range for {ncols} columns")
    return idx


def reduce_vector(v: int, basis: dict[int, int]) -> int:
    """Reduce ``v`` against an XOR basis keyed by leading bit."""
    while v:
        top = v.bit_length() - 1
        b = basis.get(top)
        if b is None:
            return v
        v ^= b
    return 0


def reduce_fully(v: int, basis: dict[int, int]) -> int:
    """Canonical representative of ``v`` modulo the span of an echelon basis.

    Clears every pivot bit, so the map is linear (unlike ``reduce_vector``,
    which stops at the first non-pivot leading bit).
    """
    for pivot in sorted(basis, reverse=True):
        if (v >> pivot) & 1:
            v ^= basis[pivot]
    return v


def rank_of_vectors(vectors: Iterable[int]) -> int:
    basis: dict[int, int] = {}
    for v in vectors:
        v = reduce_vector(v, basis)
        if v:
            basis[v.bit_length() - 1] = v
    return len(basis)


def span_basis(vectors: Iterable[int]) -> list[int]:
    basis: dict[int, int] = {}
    for v in vectors:
        v = reduce_vector(v, basis)
        if v:
            basis[v.bit_length() - 1] = v
    return list(basis.values())


def rank_of_columns(m: Gf2Matrix, cols: IndexSet) -> int:
    """GF(2) rank of the submatrix formed by the selected columns.

    ``cols`` is either a bitmask over column indices or an iterable of
    indices.
    """
    if m.cols > MAX_COLUMNS:
        raise ValueError(f"rank queries support at most {MAX_COLUMNS} columns, matrix has {m.cols}")
    columns = m.columns
    return rank_of_vectors(columns[j] for j in _as_indices(cols, m.cols))


def nullspace_vectors(columns: Sequence[int]) -> list[int]:
    """Basis of the right null space as bitmasks over column positions."""
    basis: dict[int, tuple[int, int]] = {}
    out = []
    for j, c in enumerate(columns):
        combo = 1 << j
        v = c
        while v:
            top = v.bit_length() - 1
            hit = basis.get(top)
            if hit is None:
                break
            v ^= hit[0]
            combo ^= hit[1]
        if v:
            basis[v.bit_length() - 1] = (v, combo)
        else:
            out.append(combo)
    return out


def nullspace_basis(m: Gf2Matrix) -> list[frozenset[int]]:
    return [
        frozenset(j for j in range(m.cols) if (mask >> j) & 1)
        for mask in nullspace_vectors(m.columns)
    ]


def row_reduce(m: Gf2Matrix) -> Gf2Matrix:
    """Reduced row-echelon form; pivots taken left to right, zero rows last."""
    rows = list(m.bits)
    r = 0
    for j in range(m.cols):
        bit = 1 << j
        piv = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
        r += 1
        if r == len(rows):
            break
    return Gf2Matrix(m.rows, m.cols, tuple(rows))


def subspace_vectors(basis: Sequence[int]) -> np.ndarray:
    """All ``2**len(basis)`` elements of the span, as an int64 array."""
    out = np.zeros(1, dtype=np.int64)
    for b in basis:
        out = np.concatenate([out, out ^ np.int64(b)])
    return out


def popcounts(n: int) -> np.ndarray:
    pc = np.zeros(1, dtype=np.int8)
    for _ in range(n):
        pc = np.concatenate([pc, pc + 1])
    return pc


def all_subset_ranks(columns: Sequence[int]) -> np.ndarray:
    """Rank of every column subset, indexed by bitmask.

    Uses ``r(X) = |X| - log2 #{cycles C : C subset of X}``; the cycle counts
    come from a subset-sum (zeta) transform of the null space indicator.
    """
    n = len(columns)
    if n > MAX_TABLE_COLUMNS:
        raise ValueError(f"subset rank table limited to {MAX_TABLE_COLUMNS} columns, got {n}")
    cycles = subspace_vectors(nullspace_vectors(columns))
    cnt = np.zeros(1 << n, dtype=np.int32)
    cnt[cycles] = 1
    for i in range(n):
        view = cnt.reshape(-1, 2, 1 << i)
        view[:, 1, :] += view[:, 0, :]
    dep = np.log2(cnt).astype(np.int8)
    return popcounts(n) - dep
