"""Random instances with planted structure, for tests and the check suites."""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .decompose import CertLeaf, CertSum, Certificate
from .gf2 import Gf2Matrix
from .matroid import BinaryMatroid, WeightedMatroid, delta_sum


def random_fraction(rng: np.random.Generator, max_num: int = 6, max_den: int = 4, zero_prob: float = 0.1) -> Fraction:
    if rng.random() < zero_prob:
        return Fraction(0)
    return Fraction(int(rng.integers(0, max_num + 1)), int(rng.integers(1, max_den + 1)))


def random_weights(rng: np.random.Generator, labels: Sequence[str], exact: bool = True, **kw) -> dict:
    if exact:
        return {x: random_fraction(rng, **kw) for x in labels}
    return {x: float(rng.exponential(1.5)) for x in labels}


def random_matroid(rng: np.random.Generator, n: int, rows: int, labels: Sequence[str] | None = None,
                   fixed: Sequence[int] = ()) -> BinaryMatroid:
    """Random binary matroid: ``fixed`` columns first, then random ones."""
    cols = list(fixed) + [int(rng.integers(0, 1 << rows)) for _ in range(n - len(fixed))]
    if labels is None:
        labels = [f"e{j}" for j in range(n)]
    return BinaryMatroid(Gf2Matrix.from_columns(cols, rows), tuple(labels))


def _nonzero(rng: np.random.Generator, rows: int) -> int:
    return int(rng.integers(1, 1 << rows))


def planted_element(rng: np.random.Generator, n: int, prefix: str, p: str = "p", rows: int | None = None) -> BinaryMatroid:
    """Random matroid on ``n`` elements plus a non-loop ``p`` (listed last)."""
    rows = rows or int(rng.integers(1, max(2, n) + 1))
    m = random_matroid(rng, n + 1, rows, [f"{prefix}{j}" for j in range(n)] + [p],
                       fixed=())
    cols = list(m.matrix.columns)
    cols[-1] = _nonzero(rng, rows)
    return BinaryMatroid(Gf2Matrix.from_columns(cols, rows), m.labels)


def planted_triangle(rng: np.random.Generator, n: int, prefix: str, t: Sequence[str] = ("p1", "p2", "p3"),
                     rows: int | None = None) -> BinaryMatroid:
    """Random matroid on ``n`` elements plus a triangle ``t`` (listed last)."""
    rows = rows or int(rng.integers(2, max(3, n) + 1))
    a = _nonzero(rng, rows)
    b = _nonzero(rng, rows)
    while b == a:
        b = _nonzero(rng, rows)
    cols = [int(rng.integers(0, 1 << rows)) for _ in range(n)] + [a, b, a ^ b]
    return BinaryMatroid(Gf2Matrix.from_columns(cols, rows), tuple(f"{prefix}{j}" for j in range(n)) + tuple(t))


def weighted(rng: np.random.Generator, m: BinaryMatroid, exact: bool = True, **kw) -> WeightedMatroid:
    return WeightedMatroid.from_mapping(m, random_weights(rng, m.labels, exact, **kw))


def random_2sum_pair(rng: np.random.Generator, max_side: int = 7, exact: bool = True):
    """Weighted pieces sharing a non-loop ``p``, each with at most ``max_side`` other elements."""
    m1 = planted_element(rng, int(rng.integers(0, max_side + 1)), "a")
    m2 = planted_element(rng, int(rng.integers(0, max_side + 1)), "b")
    return weighted(rng, m1, exact), weighted(rng, m2, exact), "p"


def random_3sum_pair(rng: np.random.Generator, max_side: int = 9, exact: bool = True, min_side: int = 0):
    """Weighted pieces sharing a triangle ``p1 p2 p3``."""
    m1 = planted_triangle(rng, int(rng.integers(min_side, max_side + 1)), "a")
    m2 = planted_triangle(rng, int(rng.integers(min_side, max_side + 1)), "b")
    return weighted(rng, m1, exact), weighted(rng, m2, exact), ("p1", "p2", "p3")


# graphic and cographic pieces


def random_connected_graph(rng: np.random.Generator, vertices: int, edges: int) -> list[tuple[int, int]]:
    """Random connected multigraph: a random spanning tree plus extra edges (no loops)."""
    order = rng.permutation(vertices)
    out = []
    for i in range(1, vertices):
        out.append((int(order[i]), int(order[rng.integers(0, i)])))
    while len(out) < edges:
        u, v = rng.choice(vertices, size=2, replace=False)
        out.append((int(u), int(v)))
    return out


def _strict_ok(m: BinaryMatroid, shared: Sequence[str]) -> bool:
    """Side conditions of a genuine 2-sum or 3-sum along ``shared``."""
    if len(shared) == 0:
        return True
    if len(shared) == 1:
        p = shared[0]
        return m.size >= 3 and not m.is_loop(p) and not m.is_coloop(p)
    return (m.size >= 7 and m.is_circuit(shared)
            and m.rank(x for x in m.labels if x not in set(shared)) == m.rank())


def _labels(prefix: str, size: int, glue: Sequence[Sequence[str]]) -> list[str]:
    planted = [x for g in glue for x in g]
    return [f"{prefix}{j}" for j in range(size - len(planted))] + planted


def graphic_piece(rng: np.random.Generator, size: int, prefix: str,
                  glue: Sequence[Sequence[str]] = (), tries: int = 500) -> BinaryMatroid:
    """Cycle matroid of a random graph with ``size`` edges and planted glue sets.

    Each glue set of one label is an extra edge, each of three labels a
    triangle; every set must meet the genuine sum side conditions.
    """
    planted = sum(len(g) for g in glue)
    for _ in range(tries):
        nv = int(rng.integers(3, max(4, size - planted + 2)))
        base = size - planted
        if base < nv - 1:
            continue
        g = random_connected_graph(rng, nv, base)
        for gs in glue:
            if len(gs) == 3:
                a, b, c = (int(x) for x in rng.choice(nv, size=3, replace=False))
                g += [(a, b), (b, c), (a, c)]
            else:
                u, v = (int(x) for x in rng.choice(nv, size=2, replace=False))
                g.append((u, v))
        m = BinaryMatroid.from_graph(g, _labels(prefix, size, glue), num_vertices=nv)
        if all(_strict_ok(m, gs) for gs in glue):
            return m
    raise RuntimeError(f"could not build a graphic piece of size {size}")


def cographic_piece(rng: np.random.Generator, size: int, prefix: str,
                    glue: Sequence[Sequence[str]] = (), tries: int = 500) -> BinaryMatroid:
    """Bond matroid of a random graph with planted glue sets.

    A triangle of the bond matroid is a three-edge bond, planted as the
    star of a new degree-3 vertex; a single glue label is an extra edge.
    """
    planted = sum(len(g) for g in glue)
    for _ in range(tries):
        base = size - planted
        nv = int(rng.integers(3, max(4, base // 2 + 2)))
        if base < nv - 1:
            continue
        g = random_connected_graph(rng, nv, base)
        total_v = nv
        for gs in glue:
            if len(gs) == 3:
                nbrs = [int(x) for x in rng.choice(total_v, size=3, replace=False)]
                g += [(total_v, w) for w in nbrs]
                total_v += 1
            else:
                u, v = (int(x) for x in rng.choice(total_v, size=2, replace=False))
                g.append((u, v))
        m = BinaryMatroid.from_graph(g, _labels(prefix, size, glue), num_vertices=total_v).dual()
        if all(_strict_ok(m, gs) for gs in glue):
            return m
    raise RuntimeError(f"could not build a cographic piece of size {size}")


def base_piece(rng: np.random.Generator, kind: str, size: int, prefix: str,
               glue: Sequence[Sequence[str]] = ()) -> BinaryMatroid:
    if kind == "graphic":
        return graphic_piece(rng, size, prefix, glue)
    if kind == "cographic":
        return cographic_piece(rng, size, prefix, glue)
    raise ValueError(f"unknown piece kind {kind!r}")


class PlantedInstance(NamedTuple):
    weighted: WeightedMatroid
    certificate: Certificate
    description: str


def planted_chain(rng: np.random.Generator, kinds: Sequence[str], sizes: Sequence[int],
                  ks: Sequence[int], exact: bool = True) -> PlantedInstance:
    """Base pieces ``P0, P1, ...`` glued in a chain, ``P(i)`` to ``P(i+1)`` by a ``ks[i]``-sum.

    The certificate nests to the left, so the right child of every sum node
    is a single base piece: ``sum(.., sum(.., P0, P1), P2)``.
    """
    if len(ks) != len(kinds) - 1 or len(sizes) != len(kinds):
        raise ValueError("need one size per piece and one sum order per glue")
    glues = [[f"g{i}_{j}" for j in range({1: 0, 2: 1, 3: 3}[k])] for i, k in enumerate(ks)]
    pieces = []
    for i, (kind, size) in enumerate(zip(kinds, sizes)):
        glue = []
        if i > 0 and glues[i - 1]:
            glue.append(glues[i - 1])
        if i < len(ks) and glues[i]:
            glue.append(glues[i])
        pieces.append(base_piece(rng, kind, size, f"x{i}_", glue))
    acc = pieces[0]
    cert: Certificate = CertLeaf(kinds[0], pieces[0].labels)
    for i in range(1, len(pieces)):
        acc = delta_sum(acc, pieces[i], validate="strict" if glues[i - 1] else None)
        cert = CertSum(ks[i - 1], tuple(glues[i - 1]), cert, CertLeaf(kinds[i], pieces[i].labels))
    weights = random_weights(rng, acc.labels, exact)
    desc = " ".join(f"{kd}[{sz}]" for kd, sz in zip(kinds, sizes))
    return PlantedInstance(WeightedMatroid.from_mapping(acc, weights), cert,
                           f"{desc} glued by {list(ks)}")


def random_planted_instance(rng: np.random.Generator, min_size: int = 14, max_size: int = 24,
                            max_piece: int = 12, exact: bool = True, tries: int = 1000) -> PlantedInstance:
    """A chain of two or three graphic/cographic pieces with total size in range.

    Piece sizes count the glue elements, so each piece (and hence each base
    case of the certificate) has at most ``max_piece`` elements.
    """
    glue_size = {1: 0, 2: 1, 3: 3}
    for _ in range(tries):
        count = int(rng.integers(2, 4))
        kinds = [str(rng.choice(["graphic", "cographic"])) for _ in range(count)]
        ks = [int(rng.choice([1, 2, 3])) for _ in range(count - 1)]
        sizes = []
        for i in range(count):
            glued = [ks[j] for j in (i - 1, i) if 0 <= j < len(ks)]
            low = max([3] + [7 if k == 3 else 3 for k in glued]) + sum(glue_size[k] for k in glued) // 2
            if low > max_piece:
                break
            sizes.append(int(rng.integers(low, max_piece + 1)))
        if len(sizes) != count:
            continue
        total = sum(sizes) - 2 * sum(glue_size[k] for k in ks)
        if not min_size <= total <= max_size:
            continue
        try:
            return planted_chain(rng, kinds, sizes, ks, exact)
        except RuntimeError:
            continue
    raise RuntimeError("could not build a planted instance in the requested size range")
