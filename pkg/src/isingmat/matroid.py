"""Binary matroids given by GF(2) representations, with labelled ground sets."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Real
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from . import gf2
from .gf2 import Gf2Matrix


class UnknownElementError(KeyError):
    pass


class SumError(ValueError):
    """Raised when two matroids cannot be delta-summed as requested."""


class GroundSetTooLarge(ValueError):
    pass


MAX_CYCLE_ENUMERATION = 20


@dataclass(frozen=True)
class BinaryMatroid:
    matrix: Gf2Matrix
    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        object.__setattr__(self, "labels", labels)
        if len(set(labels)) != len(labels):
            raise ValueError("element labels must be distinct")
        if len(labels) != self.matrix.cols:
            raise ValueError(f"{len(labels)} labels for {self.matrix.cols} columns")

    # construction

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], labels: Sequence[str] | None = None,
                   cols: int | None = None) -> "BinaryMatroid":
        m = Gf2Matrix.from_lists(entries, cols=cols)
        if labels is None:
            labels = [f"e{j}" for j in range(m.cols)]
        return cls(m, tuple(labels))

    @classmethod
    def from_columns(cls, columns: Sequence[int], labels: Sequence[str], rows: int | None = None) -> "BinaryMatroid":
        if rows is None:
            rows = max((c.bit_length() for c in columns), default=0)
        return cls(Gf2Matrix.from_columns(list(columns), rows), tuple(labels))

    @classmethod
    def from_cycle_space(cls, cycle_vectors: Iterable[int], labels: Sequence[str]) -> "BinaryMatroid":
        """Binary matroid on ``labels`` whose circuit space is spanned by ``cycle_vectors``.

        Vectors are bitmasks over label positions. The representation's row
        space is the orthogonal complement of the cycle space.
        """
        n = len(labels)
        basis = gf2.span_basis(cycle_vectors)
        # column j of the generator matrix G (rows = basis)
        gcols = [sum(((b >> j) & 1) << i for i, b in enumerate(basis)) for j in range(n)]
        rows = gf2.nullspace_vectors(gcols)
        return cls(Gf2Matrix(len(rows), n, tuple(rows)), tuple(labels))

    @classmethod
    def from_graph(cls, edges: Sequence[tuple[int, int]], labels: Sequence[str] | None = None,
                   num_vertices: int | None = None) -> "BinaryMatroid":
        """Cycle matroid of a multigraph (vertex-edge incidence matrix over GF(2))."""
        if num_vertices is None:
            num_vertices = 1 + max((max(u, v) for u, v in edges), default=-1)
        columns = []
        for u, v in edges:
            columns.append(0 if u == v else (1 << u) | (1 << v))
        if labels is None:
            labels = [f"e{j}" for j in range(len(edges))]
        return cls(Gf2Matrix.from_columns(columns, num_vertices), tuple(labels))

    # element bookkeeping

    @cached_property
    def index(self) -> dict[str, int]:
        return {x: j for j, x in enumerate(self.labels)}

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def ground_set(self) -> frozenset[str]:
        return frozenset(self.labels)

    def mask(self, subset: Iterable[str]) -> int:
        idx = self.index
        m = 0
        for x in subset:
            try:
                m |= 1 << idx[x]
            except KeyError:
                raise UnknownElementError(x) from None
        return m

    def subset(self, mask: int) -> frozenset[str]:
        return frozenset(x for j, x in enumerate(self.labels) if (mask >> j) & 1)

    def column(self, label: str) -> int:
        try:
            return self.matrix.columns[self.index[label]]
        except KeyError:
            raise UnknownElementError(label) from None

    def _check(self, subset: Iterable[str]) -> list[str]:
        out = list(subset)
        for x in out:
            if x not in self.index:
                raise UnknownElementError(x)
        return out

    # rank function

    def rank(self, subset: Iterable[str] | None = None) -> int:
        if subset is None:
            return gf2.rank_of_vectors(self.matrix.columns)
        cols = self.matrix.columns
        idx = self.index
        try:
            return gf2.rank_of_vectors(cols[idx[x]] for x in subset)
        except KeyError as exc:
            raise UnknownElementError(exc.args[0]) from None

    def rank_mask(self, mask: int) -> int:
        cols = self.matrix.columns
        return gf2.rank_of_vectors(cols[j] for j in range(self.size) if (mask >> j) & 1)

    @cached_property
    def subset_ranks(self) -> np.ndarray:
        """Ranks of all subsets, indexed by bitmask over label positions."""
        return gf2.all_subset_ranks(self.matrix.columns)

    # minors and duality

    def delete(self, subset: Iterable[str]) -> "BinaryMatroid":
        drop = set(self._check(subset))
        keep = [j for j, x in enumerate(self.labels) if x not in drop]
        return BinaryMatroid(self.matrix.select_columns(keep), tuple(self.labels[j] for j in keep))

    def restrict(self, subset: Iterable[str]) -> "BinaryMatroid":
        keep_set = set(self._check(subset))
        return self.delete(x for x in self.labels if x not in keep_set)

    def contract(self, subset: Iterable[str]) -> "BinaryMatroid":
        """Contract by projecting every column modulo the span of ``subset``."""
        con = set(self._check(subset))
        cols = self.matrix.columns
        basis: dict[int, int] = {}
        for x in con:
            v = gf2.reduce_vector(cols[self.index[x]], basis)
            if v:
                basis[v.bit_length() - 1] = v
        keep = [j for j, x in enumerate(self.labels) if x not in con]
        new_cols = [gf2.reduce_fully(cols[j], basis) for j in keep]
        return BinaryMatroid(Gf2Matrix.from_columns(new_cols, self.matrix.rows),
                             tuple(self.labels[j] for j in keep))

    def dual(self) -> "BinaryMatroid":
        rows = gf2.nullspace_vectors(self.matrix.columns)
        return BinaryMatroid(Gf2Matrix(len(rows), self.size, tuple(rows)), self.labels)

    def relabel(self, mapping: Mapping[str, str]) -> "BinaryMatroid":
        return BinaryMatroid(self.matrix, tuple(mapping.get(x, x) for x in self.labels))

    def reordered(self, labels: Sequence[str]) -> "BinaryMatroid":
        if sorted(labels) != sorted(self.labels):
            raise ValueError("reordering must use the same ground set")
        return BinaryMatroid(self.matrix.select_columns([self.index[x] for x in labels]), tuple(labels))

    # element predicates

    def is_loop(self, e: str) -> bool:
        return self.column(e) == 0

    def is_coloop(self, e: str) -> bool:
        self._check([e])
        return self.rank(x for x in self.labels if x != e) == self.rank() - 1

    def is_independent(self, subset: Iterable[str]) -> bool:
        s = self._check(subset)
        return self.rank(s) == len(set(s))

    def is_circuit(self, subset: Iterable[str]) -> bool:
        s = set(self._check(subset))
        if not s or self.rank(s) != len(s) - 1:
            return False
        return all(self.rank(s - {x}) == len(s) - 1 for x in s)

    # circuit space

    def cycle_vectors(self) -> list[int]:
        """Basis of the circuit space as masks over label positions."""
        return gf2.nullspace_vectors(self.matrix.columns)

    def cycle_basis(self) -> list[frozenset[str]]:
        return [self.subset(v) for v in self.cycle_vectors()]

    def cycles(self) -> set[frozenset[str]]:
        basis = self.cycle_vectors()
        if len(basis) > MAX_CYCLE_ENUMERATION or self.size > 64:
            raise GroundSetTooLarge(f"circuit space of dimension {len(basis)} is too large to enumerate")
        return {self.subset(int(v)) for v in gf2.subspace_vectors(basis)}

    def circuits(self) -> set[frozenset[str]]:
        cyc = [c for c in self.cycles() if c]
        cyc.sort(key=len)
        out: list[frozenset[str]] = []
        for c in cyc:
            if not any(d <= c for d in out):
                out.append(c)
        return set(out)

    def same_cycle_space(self, other: "BinaryMatroid") -> bool:
        if set(self.labels) != set(other.labels):
            return False
        mine = self.cycle_vectors()
        theirs = [self.mask(other.subset(v)) for v in other.cycle_vectors()]
        if len(mine) != len(theirs):
            return False
        return gf2.rank_of_vectors(mine + theirs) == len(mine)

    def equals(self, other: "BinaryMatroid") -> bool:
        """Matroid equality: same ground set and same circuit space."""
        return self.same_cycle_space(other)

    def __str__(self):
        return f"BinaryMatroid(|E|={self.size}, rank={self.rank()})"


def _common_labels(m1: BinaryMatroid, m2: BinaryMatroid) -> list[str]:
    s2 = set(m2.labels)
    return [x for x in m1.labels if x in s2]


def check_sum_conditions(m1: BinaryMatroid, m2: BinaryMatroid, strict: bool = False) -> None:
    """Validate k-sum side conditions for the common set ``T``.

    Relaxed form: for ``|T| = 1`` the shared element is not a loop in either
    matroid, for ``|T| = 3`` it is a circuit of both. Strict form adds the
    size bounds and the loop/coloop and cocircuit exclusions of a genuine
    2-sum or 3-sum.
    """
    t = _common_labels(m1, m2)
    k = len(t)
    if k == 0:
        return
    if k == 1:
        p = t[0]
        for name, m in (("M1", m1), ("M2", m2)):
            if m.is_loop(p):
                raise SumError(f"{p} is a loop in {name}")
            if strict:
                if m.is_coloop(p):
                    raise SumError(f"{p} is a coloop in {name}")
                if m.size < 3:
                    raise SumError(f"{name} has {m.size} < 3 elements")
        return
    if k == 3:
        for name, m in (("M1", m1), ("M2", m2)):
            if not m.is_circuit(t):
                raise SumError(f"{sorted(t)} is not a circuit of {name}")
            if strict:
                if m.size < 7:
                    raise SumError(f"{name} has {m.size} < 7 elements")
                if m.rank(x for x in m.labels if x not in t) < m.rank():
                    raise SumError(f"{sorted(t)} contains a cocircuit of {name}")
        return
    raise SumError(f"no k-sum has {k} shared elements")


def delta_sum(m1: BinaryMatroid, m2: BinaryMatroid, validate: str | None = None) -> BinaryMatroid:
    """Delta-sum of two binary matroids agreeing on their common elements.

    The circuit space of the result is ``{C1 ^ C2}`` restricted to sets
    avoiding the common part ``T``. ``validate`` may be ``None``,
    ``"relaxed"`` or ``"strict"``.
    """
    t = _common_labels(m1, m2)
    tset = set(t)
    if t and not m1.restrict(t).same_cycle_space(m2.restrict(t)):
        raise SumError("restrictions to the common elements differ")
    if validate is not None:
        check_sum_conditions(m1, m2, strict=(validate == "strict"))
    e1 = [x for x in m1.labels if x not in tset]
    e2 = [x for x in m2.labels if x not in tset]
    order = e1 + e2 + t
    pos = {x: j for j, x in enumerate(order)}
    n = len(e1) + len(e2)
    gens = []
    for m in (m1, m2):
        for v in m.cycle_vectors():
            w = 0
            for j, x in enumerate(m.labels):
                if (v >> j) & 1:
                    w |= 1 << pos[x]
            gens.append(w)
    # echelon basis keyed by leading bit; T occupies the top bits
    kept = [b for b in gf2.span_basis(gens) if b.bit_length() <= n]
    return BinaryMatroid.from_cycle_space(kept, e1 + e2)


class FixedMatroids(NamedTuple):
    N1: BinaryMatroid
    N3: BinaryMatroid
    I2: BinaryMatroid
    I3: BinaryMatroid
    R10: BinaryMatroid


R10_ROW = (1, 1, 0, 0, 1)


def r10_matrix() -> Gf2Matrix:
    rows = []
    for i in range(5):
        shifted = R10_ROW[-i:] + R10_ROW[:-i] if i else R10_ROW
        rows.append([1 if j == i else 0 for j in range(5)] + list(shifted))
    return Gf2Matrix.from_lists(rows)


@functools.cache
def fixed_matroids() -> FixedMatroids:
    n1 = BinaryMatroid.from_lists([[1]], ["p"])
    n3 = BinaryMatroid.from_lists([[1, 0, 1], [0, 1, 1]], ["p1", "p2", "p3"])
    i2 = BinaryMatroid.from_lists([[1, 1]], ["p", "e"])
    i3 = BinaryMatroid.from_lists([[1, 0, 1, 1, 0, 1], [0, 1, 1, 0, 1, 1]],
                                  ["p1", "p2", "p3", "e1", "e2", "e3"])
    r10 = BinaryMatroid(r10_matrix(), tuple(f"r{j}" for j in range(10)))
    _verify_r10(r10)
    return FixedMatroids(n1, n3, i2, i3, r10)


def _verify_r10(r10: BinaryMatroid) -> None:
    from .decompose import is_cographic, is_graphic

    if r10.size != 10 or r10.rank() != 5:
        raise AssertionError("R10 must have 10 elements and rank 5")
    for x in r10.labels:
        if r10.is_loop(x) or r10.is_coloop(x):
            raise AssertionError(f"R10 element {x} is a loop or coloop")
    if is_graphic(r10) is not None or is_cographic(r10) is not None:
        raise AssertionError("R10 representation is graphic or cographic")


# weighted matroids

Weight = Real


def _coerce_weight(w) -> Fraction | float:
    if isinstance(w, Fraction):
        out = w
    elif isinstance(w, int):
        out = Fraction(w)
    elif isinstance(w, str):
        out = Fraction(w)
    else:
        out = float(w)
    if out < 0:
        raise ValueError(f"weights must be non-negative, got {w}")
    return out


@dataclass(frozen=True)
class WeightedMatroid:
    matroid: BinaryMatroid
    weights: tuple

    def __post_init__(self):
        ws = tuple(_coerce_weight(w) for w in self.weights)
        if len(ws) != self.matroid.size:
            raise ValueError(f"{len(ws)} weights for {self.matroid.size} elements")
        object.__setattr__(self, "weights", ws)

    @classmethod
    def from_mapping(cls, matroid: BinaryMatroid, weights: Mapping[str, Weight],
                     default: Weight | None = None) -> "WeightedMatroid":
        ws = []
        for x in matroid.labels:
            if x in weights:
                ws.append(weights[x])
            elif default is not None:
                ws.append(default)
            else:
                raise ValueError(f"no weight for element {x}")
        return cls(matroid, tuple(ws))

    @classmethod
    def uniform(cls, matroid: BinaryMatroid, weight: Weight = 1) -> "WeightedMatroid":
        return cls(matroid, (weight,) * matroid.size)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.matroid.labels

    @property
    def size(self) -> int:
        return self.matroid.size

    def weight(self, label: str):
        return self.weights[self.matroid.index[label]]

    def mapping(self) -> dict[str, Fraction | float]:
        return dict(zip(self.matroid.labels, self.weights))

    def is_exact(self) -> bool:
        return all(isinstance(w, Fraction) for w in self.weights)

    def with_weights(self, updates: Mapping[str, Weight]) -> "WeightedMatroid":
        ws = list(self.weights)
        for x, w in updates.items():
            try:
                ws[self.matroid.index[x]] = w
            except KeyError:
                raise UnknownElementError(x) from None
        return WeightedMatroid(self.matroid, tuple(ws))

    def _carry(self, m: BinaryMatroid) -> "WeightedMatroid":
        mp = self.mapping()
        return WeightedMatroid(m, tuple(mp[x] for x in m.labels))

    def delete(self, subset: Iterable[str]) -> "WeightedMatroid":
        return self._carry(self.matroid.delete(subset))

    def contract(self, subset: Iterable[str]) -> "WeightedMatroid":
        return self._carry(self.matroid.contract(subset))

    def restrict(self, subset: Iterable[str]) -> "WeightedMatroid":
        return self._carry(self.matroid.restrict(subset))

    def minor(self, contract: Iterable[str] = (), delete: Iterable[str] = ()) -> "WeightedMatroid":
        return self.contract(contract).delete(delete)


def weighted_delta_sum(w1: WeightedMatroid, w2: WeightedMatroid, validate: str | None = None) -> WeightedMatroid:
    """Delta-sum carrying the inherited weighting from each side."""
    m = delta_sum(w1.matroid, w2.matroid, validate=validate)
    mp = w2.mapping()
    mp.update(w1.mapping())
    return WeightedMatroid(m, tuple(mp[x] for x in m.labels))
