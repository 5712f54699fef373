"""Decomposition of binary matroids into 1-, 2- and 3-sums of base pieces.

Base pieces are graphic, cographic, R10, or merely small. Separations are
found by exhaustive search over the subset rank table, which is fine at the
sizes the exact oracle can handle; larger instances need a certificate
describing the tree, which is validated node by node instead.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

from . import gf2
from .gf2 import Gf2Matrix
from .matroid import BinaryMatroid, GroundSetTooLarge, SumError, check_sum_conditions, delta_sum

REALIZATION_LIMIT = 12
SEARCH_LIMIT = 24
SMALL_LIMIT = 6
LEAF_TAGS = ("graphic", "cographic", "r10", "small")


class DecompositionError(RuntimeError):
    """No decomposition was found, or a certificate failed validation."""

    def __init__(self, message: str, matroid: BinaryMatroid | None = None, path: str | None = None):
        super().__init__(message)
        self.matroid = matroid
        self.path = path


# graph realizations


class Graph(NamedTuple):
    """Multigraph with ``edges[j]`` realizing element ``j`` of a matroid."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]

    def cycle_matroid(self, labels: Sequence[str]) -> BinaryMatroid:
        return BinaryMatroid.from_graph(list(self.edges), labels, num_vertices=self.num_vertices)


def _cocircuit_masks(m: BinaryMatroid) -> list[int]:
    return sorted(m.mask(c) for c in m.dual().circuits())


def _double_cover(n: int, cocircuits: list[int], count: int) -> list[int] | None:
    """``count`` cocircuits covering each of ``n`` elements exactly twice.

    All but the last must be linearly independent, as the vertex stars of
    a connected graph are.
    """
    full = (1 << n) - 1
    by_elem = [[c for c in cocircuits if (c >> j) & 1] for j in range(n)]
    chosen: list[int] = []
    basis: dict[int, int] = {}
    failed: set[tuple[int, ...]] = set()

    def search(once: int, twice: int) -> bool:
        if twice == full:
            return len(chosen) == count
        if len(chosen) >= count:
            return False
        key = tuple(sorted(chosen))
        if key in failed:
            return False
        last = len(chosen) == count - 1
        best = None
        for j in range(n):
            if (twice >> j) & 1:
                continue
            cands = [c for c in by_elem[j] if not c & twice and (last or gf2.reduce_vector(c, basis))]
            if best is None or len(cands) < len(best):
                best = cands
                if len(cands) <= 1:
                    break
        for c in best:
            w = gf2.reduce_vector(c, basis)
            if w:
                basis[w.bit_length() - 1] = w
            chosen.append(c)
            if search(once ^ c, twice | (once & c)):
                return True
            chosen.pop()
            if w:
                del basis[w.bit_length() - 1]
        failed.add(key)
        return False

    return list(chosen) if search(0, 0) else None


def _realize_connected(m: BinaryMatroid) -> Graph | None:
    """Realization of a connected matroid with at least two elements.

    Its graph is 2-connected, so every vertex star is a cocircuit and every
    element lies in exactly two stars.
    """
    r = m.rank()
    stars = _double_cover(m.size, _cocircuit_masks(m), r + 1)
    if stars is None or gf2.rank_of_vectors(stars) != r:
        return None
    edges = []
    for j in range(m.size):
        a, b = (i for i, c in enumerate(stars) if (c >> j) & 1)
        edges.append((a, b))
    return Graph(r + 1, tuple(edges))


def is_graphic(m: BinaryMatroid, limit: int = REALIZATION_LIMIT) -> Graph | None:
    """A multigraph whose cycle matroid is ``m``, or ``None``.

    Each connected component is realized separately: a loop as a loop, a
    coloop as a bridge, and a larger component by choosing its vertex stars
    among the cocircuits. The components are placed side by side.
    """
    if m.size > limit:
        raise GroundSetTooLarge(f"graphic realization search limited to {limit} elements, got {m.size}")
    edges: list[tuple[int, int] | None] = [None] * m.size
    nv = 0
    hub = None  # shared vertex for loops and bridges, created on demand
    for comp in components(m):
        labels = [x for x in m.labels if x in comp]
        if len(labels) == 1:
            if hub is None:
                hub, nv = nv, nv + 1
            x = labels[0]
            if m.is_loop(x):
                edges[m.index[x]] = (hub, hub)
            else:
                edges[m.index[x]] = (hub, nv)
                nv += 1
            continue
        g = _realize_connected(m.restrict(labels))
        if g is None:
            return None
        for x, (a, b) in zip(labels, g.edges):
            edges[m.index[x]] = (nv + a, nv + b)
        nv += g.num_vertices
    return _verified(m, Graph(max(nv, 1), tuple(edges)))


def _verified(m: BinaryMatroid, g: Graph) -> Graph:
    if not g.cycle_matroid(m.labels).same_cycle_space(m):
        raise AssertionError("graph realization does not reproduce the cycle space")
    return g


def is_cographic(m: BinaryMatroid, limit: int = REALIZATION_LIMIT) -> Graph | None:
    """A graph whose cycle matroid is the dual of ``m``, or ``None``."""
    return is_graphic(m.dual(), limit)


def _circuit_masks(m: BinaryMatroid) -> set[int]:
    return {m.mask(c) for c in m.circuits()}


def is_r10(m: BinaryMatroid) -> bool:
    """Whether ``m`` is isomorphic to the reference R10.

    Backtracks over label bijections, requiring every fully assigned circuit
    of ``m`` to land on a circuit of R10.
    """
    from .matroid import fixed_matroids

    if m.size != 10 or m.rank() != 5:
        return False
    ref = fixed_matroids().R10
    mine = _circuit_masks(m)
    theirs = _circuit_masks(ref)
    if len(mine) != len(theirs):
        return False
    if sorted(bin(c).count("1") for c in mine) != sorted(bin(c).count("1") for c in theirs):
        return False

    def profile(circuits: set[int], j: int) -> tuple:
        return tuple(sorted(bin(c).count("1") for c in circuits if (c >> j) & 1))

    prof_m = [profile(mine, j) for j in range(10)]
    prof_r = [profile(theirs, j) for j in range(10)]
    by_elem: list[list[int]] = [[c for c in mine if (c >> j) & 1] for j in range(10)]
    image = [-1] * 10
    used = [False] * 10

    def consistent(j: int) -> bool:
        for c in by_elem[j]:
            img = 0
            for i in range(10):
                if (c >> i) & 1:
                    if image[i] < 0:
                        break
                    img |= 1 << image[i]
            else:
                if img not in theirs:
                    return False
        return True

    def go(j: int) -> bool:
        if j == 10:
            return True
        for t in range(10):
            if not used[t] and prof_m[j] == prof_r[t]:
                image[j], used[t] = t, True
                if consistent(j) and go(j + 1):
                    return True
                image[j], used[t] = -1, False
        return False

    return go(0)


# tree types


@dataclass(frozen=True, eq=False)
class Leaf:
    tag: str
    matroid: BinaryMatroid
    realization: Graph | None = None

    @property
    def size(self) -> int:
        return self.matroid.size

    def leaves(self) -> list["Leaf"]:
        return [self]

    def depth(self) -> int:
        return 0


@dataclass(frozen=True, eq=False)
class SumNode:
    k: int
    shared: tuple[str, ...]
    left: "DecompTree"
    right: "DecompTree"
    matroid: BinaryMatroid

    @property
    def size(self) -> int:
        return self.matroid.size

    def leaves(self) -> list[Leaf]:
        return self.left.leaves() + self.right.leaves()

    def depth(self) -> int:
        return 1 + max(self.left.depth(), self.right.depth())


DecompTree = Union[Leaf, SumNode]


@dataclass(frozen=True)
class CertLeaf:
    tag: str
    labels: tuple[str, ...]


@dataclass(frozen=True)
class CertSum:
    k: int
    shared: tuple[str, ...]
    left: "Certificate"
    right: "Certificate"


Certificate = Union[CertLeaf, CertSum]


def to_certificate(tree: DecompTree) -> Certificate:
    if isinstance(tree, Leaf):
        return CertLeaf(tree.tag, tree.matroid.labels)
    return CertSum(tree.k, tree.shared, to_certificate(tree.left), to_certificate(tree.right))


def certificate_ground(cert: Certificate) -> frozenset[str]:
    """Labels occurring exactly once among the leaves of ``cert``."""
    counts: dict[str, int] = {}

    def walk(c: Certificate):
        if isinstance(c, CertLeaf):
            for x in c.labels:
                counts[x] = counts.get(x, 0) + 1
        else:
            walk(c.left)
            walk(c.right)

    walk(cert)
    return frozenset(x for x, k in counts.items() if k == 1)


def tree_summary(tree: DecompTree) -> dict:
    leaves = tree.leaves()
    kinds: dict[str, int] = {}
    for lf in leaves:
        kinds[lf.tag] = kinds.get(lf.tag, 0) + 1
    sums: dict[int, int] = {}

    def walk(t):
        if isinstance(t, SumNode):
            sums[t.k] = sums.get(t.k, 0) + 1
            walk(t.left)
            walk(t.right)

    walk(tree)
    return {"leaves": kinds, "sums": sums, "depth": tree.depth(), "leaf_sizes": [lf.size for lf in leaves]}


# recognition


def recognize(m: BinaryMatroid, realization_limit: int = REALIZATION_LIMIT,
              small_limit: int = SMALL_LIMIT) -> Leaf | None:
    """Tag ``m`` as a base case, trying graphic, cographic, R10 and small in turn."""
    if m.size <= realization_limit:
        g = is_graphic(m, realization_limit)
        if g is not None:
            return Leaf("graphic", m, g)
        g = is_cographic(m, realization_limit)
        if g is not None:
            return Leaf("cographic", m, g)
        if is_r10(m):
            return Leaf("r10", m)
    if m.size <= small_limit:
        return Leaf("small", m)
    return None


def _check_leaf_tag(m: BinaryMatroid, tag: str, realization_limit: int, small_limit: int) -> Leaf | None:
    if tag == "graphic":
        g = is_graphic(m, max(realization_limit, m.size))
        return Leaf(tag, m, g) if g is not None else None
    if tag == "cographic":
        g = is_cographic(m, max(realization_limit, m.size))
        return Leaf(tag, m, g) if g is not None else None
    if tag == "r10":
        return Leaf(tag, m) if is_r10(m) else None
    if tag == "small":
        return Leaf(tag, m) if m.size <= small_limit else None
    raise DecompositionError(f"unknown leaf tag {tag!r}")


# separations


def components(m: BinaryMatroid) -> list[frozenset[str]]:
    """Connected components, via unions of fundamental circuits."""
    parent = list(range(m.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for circ in gf2.nullspace_vectors(m.matrix.columns):
        idx = [j for j in range(m.size) if (circ >> j) & 1]
        for j in idx[1:]:
            a, b = find(idx[0]), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[str]] = {}
    for j, x in enumerate(m.labels):
        groups.setdefault(find(j), []).append(x)
    return [frozenset(g) for _, g in sorted(groups.items())]


def find_1_separation(m: BinaryMatroid) -> tuple[frozenset[str], frozenset[str]] | None:
    """Split the components into two sides as evenly as possible."""
    comps = components(m)
    if len(comps) < 2:
        return None
    comps.sort(key=lambda c: (-len(c), min(m.index[x] for x in c)))
    a: set[str] = set()
    b: set[str] = set()
    for c in comps:
        (a if len(a) <= len(b) else b).update(c)
    return frozenset(a), frozenset(b)


class LabelFactory:
    """Fresh labels for shared elements, avoiding every label in use."""

    def __init__(self, used: Iterable[str] = (), prefix: str = "_v"):
        self.used = set(used)
        self.prefix = prefix
        self.counter = 0

    def fresh(self) -> str:
        while True:
            self.counter += 1
            name = f"{self.prefix}{self.counter}"
            if name not in self.used:
                self.used.add(name)
                return name


def _intersection_basis(xcols: list[int], ycols: list[int]) -> list[int]:
    vecs = []
    for combo in gf2.nullspace_vectors(xcols + ycols):
        v = 0
        for j, c in enumerate(xcols):
            if (combo >> j) & 1:
                v ^= c
        vecs.append(v)
    return sorted(gf2.span_basis(vecs))


def split_along(m: BinaryMatroid, side1: Iterable[str], shared: Sequence[str]) -> tuple[BinaryMatroid, BinaryMatroid]:
    """Pieces ``M1`` on ``X + T`` and ``M2`` on ``Y + T`` with ``M1 + M2 = M``.

    The shared elements are represented by the nonzero vectors of
    ``span(X) & span(Y)``: none for a 1-sum, one for a 2-sum and three (in
    the order ``u1, u2, u1 + u2``) for a 3-sum.
    """
    xs = [x for x in m.labels if x in set(side1)]
    ys = [x for x in m.labels if x not in set(side1)]
    cols = m.matrix.columns
    basis = _intersection_basis([cols[m.index[x]] for x in xs], [cols[m.index[y]] for y in ys])
    if len(basis) == 0:
        vectors = []
    elif len(basis) == 1:
        vectors = basis
    elif len(basis) == 2:
        vectors = [basis[0], basis[1], basis[0] ^ basis[1]]
    else:
        raise SumError(f"separation has connectivity {len(basis) + 1}")
    if len(vectors) != len(shared):
        raise SumError(f"separation needs {len(vectors)} shared elements, {len(shared)} given")
    rows = m.matrix.rows

    def piece(side):
        columns = [cols[m.index[x]] for x in side] + list(vectors)
        return BinaryMatroid(Gf2Matrix.from_columns(columns, rows), tuple(side) + tuple(shared))

    return piece(xs), piece(ys)


def _connectivity_table(m: BinaryMatroid) -> np.ndarray:
    ranks = m.subset_ranks.astype(np.int16)
    return ranks + ranks[::-1] - int(ranks[-1])


def _best_separation(m: BinaryMatroid, lam: int, min_side: int) -> int | None:
    n = m.size
    if n > SEARCH_LIMIT:
        raise GroundSetTooLarge(f"separation search limited to {SEARCH_LIMIT} elements, got {n}")
    if n < 2 * min_side:
        return None
    conn = _connectivity_table(m)
    sizes = gf2.popcounts(n).astype(np.int16)
    half = 1 << (n - 1)
    # each separation counted once: X avoids the last element
    ok = (conn[:half] == lam) & (sizes[:half] >= min_side) & (n - sizes[:half] >= min_side)
    cands = np.flatnonzero(ok)
    if len(cands) == 0:
        return None
    balance = np.minimum(sizes[cands], n - sizes[cands])
    best = cands[balance == balance.max()]
    return int(best.min())


def _find_sum(m: BinaryMatroid, k: int, labels: LabelFactory | None):
    lam, min_side = (1, 2) if k == 2 else (2, 4)
    mask = _best_separation(m, lam, min_side)
    if mask is None:
        return None
    if labels is None:
        labels = LabelFactory(m.labels)
    x = m.subset(mask)
    shared = [labels.fresh() for _ in range(k - 1 if k == 2 else 3)]
    m1, m2 = split_along(m, x, shared)
    if m2.size > m1.size:
        m1, m2 = m2, m1
    check_sum_conditions(m1, m2, strict=True)
    return m1, m2, tuple(shared)


def find_2sum(m: BinaryMatroid, labels: LabelFactory | None = None):
    """``(M1, M2, p)`` with ``M1 + M2 = M`` a 2-sum, or ``None``."""
    out = _find_sum(m, 2, labels)
    return None if out is None else (out[0], out[1], out[2][0])


def find_3sum(m: BinaryMatroid, labels: LabelFactory | None = None):
    """``(M1, M2, T)`` with ``M1 + M2 = M`` a 3-sum, or ``None``."""
    return _find_sum(m, 3, labels)


# decomposition


def _make_sum(k: int, shared: tuple[str, ...], left: DecompTree, right: DecompTree,
              m: BinaryMatroid) -> SumNode:
    if right.size > left.size:
        left, right = right, left
    return SumNode(k, tuple(shared), left, right, m)


def _search(m: BinaryMatroid, labels: LabelFactory, opts: dict, path: str) -> DecompTree:
    leaf = recognize(m, opts["realization_limit"], opts["small_limit"])
    if leaf is not None:
        return leaf
    sep = find_1_separation(m)
    if sep is not None:
        a, b = sep
        return _make_sum(1, (), _search(m.restrict(a), labels, opts, path + ".L"),
                         _search(m.restrict(b), labels, opts, path + ".R"), m)
    if m.size > opts["search_limit"]:
        raise DecompositionError(f"{path}: {m.size}-element piece exceeds the search limit "
                                 f"{opts['search_limit']}; supply a certificate", m, path)
    for k in (2, 3):
        found = _find_sum(m, k, labels)
        if found is not None:
            m1, m2, shared = found
            return _make_sum(k, shared, _search(m1, labels, opts, path + ".L"),
                             _search(m2, labels, opts, path + ".R"), m)
    raise DecompositionError(f"{path}: no decomposition found for a {m.size}-element piece "
                             f"of rank {m.rank()}", m, path)


def _ingest(m: BinaryMatroid, cert: Certificate, opts: dict, path: str) -> DecompTree:
    if isinstance(cert, CertLeaf):
        if set(cert.labels) != set(m.labels) or len(cert.labels) != m.size:
            raise DecompositionError(f"{path}: leaf labels do not match the piece's ground set", m, path)
        if cert.tag not in LEAF_TAGS:
            raise DecompositionError(f"{path}: unknown leaf tag {cert.tag!r}", m, path)
        leaf = _check_leaf_tag(m, cert.tag, opts["realization_limit"], opts["small_limit"])
        if leaf is None:
            raise DecompositionError(f"{path}: piece is not {cert.tag}", m, path)
        return leaf
    k, shared = cert.k, tuple(cert.shared)
    expected = {1: 0, 2: 1, 3: 3}.get(k)
    if expected is None or len(shared) != expected:
        raise DecompositionError(f"{path}: a {k}-sum needs {expected} shared labels, got {len(shared)}", m, path)
    gl = certificate_ground(cert.left)
    gr = certificate_ground(cert.right)
    if (gl & gr) != set(shared):
        raise DecompositionError(f"{path}: shared labels {sorted(shared)} do not match the children "
                                 f"(common labels {sorted(gl & gr)})", m, path)
    if (gl | gr) - set(shared) != set(m.labels):
        raise DecompositionError(f"{path}: children do not partition the ground set", m, path)
    side1 = gl - set(shared)
    first_error: Exception | None = None
    for order in itertools.permutations(shared):
        try:
            m1, m2 = split_along(m, side1, order)
            if k > 1:
                check_sum_conditions(m1, m2, strict=True)
            if not delta_sum(m1, m2).same_cycle_space(m):
                raise SumError("pieces do not reconstruct the piece")
            left = _ingest(m1, cert.left, opts, path + ".L")
            right = _ingest(m2, cert.right, opts, path + ".R")
            return _make_sum(k, order, left, right, m)
        except (SumError, DecompositionError) as exc:
            if first_error is None:
                first_error = exc
    if isinstance(first_error, DecompositionError):
        raise first_error
    raise DecompositionError(f"{path}: invalid {k}-sum: {first_error}", m, path)


def decompose(m: BinaryMatroid, certificate: Certificate | None = None,
              realization_limit: int = REALIZATION_LIMIT, small_limit: int = SMALL_LIMIT,
              search_limit: int = SEARCH_LIMIT) -> DecompTree:
    """Decomposition tree for ``m``, searched or validated from a certificate.

    Every sum node reconstructs its matroid exactly; the smaller piece is
    always the right child.
    """
    opts = dict(realization_limit=realization_limit, small_limit=small_limit, search_limit=search_limit)
    if certificate is not None:
        tree = _ingest(m, certificate, opts, "root")
    else:
        used = set(m.labels)
        tree = _search(m, LabelFactory(used), opts, "root")
    validate_tree(tree)
    return tree


def validate_tree(tree: DecompTree, path: str = "root") -> None:
    """Recheck reconstruction and side conditions at every sum node."""
    if isinstance(tree, Leaf):
        return
    m1, m2 = tree.left.matroid, tree.right.matroid
    try:
        if tree.k > 1:
            check_sum_conditions(m1, m2, strict=True)
        summed = delta_sum(m1, m2)
    except SumError as exc:
        raise DecompositionError(f"{path}: {exc}", tree.matroid, path) from None
    if not summed.same_cycle_space(tree.matroid):
        raise DecompositionError(f"{path}: children do not reconstruct the node", tree.matroid, path)
    if tree.right.size > tree.left.size:
        raise DecompositionError(f"{path}: right child is the larger piece", tree.matroid, path)
    validate_tree(tree.left, path + ".L")
    validate_tree(tree.right, path + ".R")


# minors of trees

_MINOR_CACHE: dict = {}


def tree_minor(tree: DecompTree, contract: Iterable[str] = (), delete: Iterable[str] = ()) -> DecompTree:
    """Decomposition of ``tree.matroid / contract \\ delete``.

    Deletions and contractions are pushed into the leaves holding those
    elements. If some sum node loses its relaxed side condition on the way
    (a shared element becomes a loop, or a shared triangle stops being a
    circuit), the minor is decomposed from scratch instead.
    """
    con, dele = frozenset(contract), frozenset(delete)
    key = (id(tree), con, dele)
    hit = _MINOR_CACHE.get(key)
    if hit is not None and hit[0] is tree:
        return hit[1]
    out = _push_minor(tree, con, dele)
    if out is None:
        out = decompose(tree.matroid.contract(con).delete(dele))
    _MINOR_CACHE[key] = (tree, out)
    return out


def clear_minor_cache() -> None:
    _MINOR_CACHE.clear()


def _push_minor(tree: DecompTree, con: frozenset, dele: frozenset) -> DecompTree | None:
    here = set(tree.matroid.labels)
    con, dele = con & here, dele & here
    if not con and not dele:
        return tree
    if isinstance(tree, Leaf):
        m = tree.matroid.contract(con).delete(dele)
        leaf = recognize(m)
        if leaf is None:
            leaf = Leaf("small", m)
        return leaf
    left = _push_minor(tree.left, con, dele)
    right = _push_minor(tree.right, con, dele)
    if left is None or right is None:
        return None
    try:
        if tree.k > 1:
            check_sum_conditions(left.matroid, right.matroid, strict=False)
        m = delta_sum(left.matroid, right.matroid)
    except SumError:
        return None
    return _make_sum(tree.k, tree.shared, left, right, m)
