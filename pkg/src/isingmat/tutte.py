"""Brute-force evaluation of the multivariate Tutte polynomial at q = 2.

The quantity computed throughout is

    Z(M; gamma) = sum over A subset of E of gamma_A * 2**(-r(A)),

with ``gamma_A`` the product of the weights in ``A``. Every sum is taken
over the all-subset rank table, either in floating point or exactly. The
exact path scales the weights to integers and evaluates the (integer)
numerator modulo several word-sized primes, then recombines by the Chinese
remainder theorem.
"""

from __future__ import annotations

import itertools
import math
import os
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .matroid import BinaryMatroid, GroundSetTooLarge, WeightedMatroid

EXHAUSTIVE_LIMIT_ENV = "ISINGMAT_EXHAUSTIVE_LIMIT"
DEFAULT_EXHAUSTIVE_LIMIT = 24
FLOAT_RTOL = 1e-12


def exhaustive_limit() -> int:
    raw = os.environ.get(EXHAUSTIVE_LIMIT_ENV)
    if raw is None:
        return DEFAULT_EXHAUSTIVE_LIMIT
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{EXHAUSTIVE_LIMIT_ENV} must be an integer, got {raw!r}") from None


def check_size(n: int) -> None:
    limit = exhaustive_limit()
    if n > limit:
        raise GroundSetTooLarge(f"{n} elements exceed the exhaustive limit of {limit}")


# word-sized primes for the modular evaluation


def _is_prime(n: int) -> bool:
    """Miller-Rabin with bases 2, 3, 5, 7 (deterministic below 3.2e9)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_PRIMES: list[int] = []


def _prime(k: int) -> int:
    """k-th largest prime below 2**31."""
    while len(_PRIMES) <= k:
        c = (_PRIMES[-1] if _PRIMES else 1 << 31) - 1
        while not _is_prime(c):
            c -= 1
        _PRIMES.append(c)
    return _PRIMES[k]


def _crt(residues: Sequence[int], moduli: Sequence[int]) -> int:
    x, m = 0, 1
    for r, p in zip(residues, moduli):
        t = (r - x) * pow(m, -1, p) % p
        x += m * t
        m *= p
    return x


# core sums


def weighted_rank_sum(weights: Sequence, ranks: np.ndarray, offset: int = 0,
                      select: np.ndarray | None = None, exact: bool = True):
    """Sum of ``gamma_A * 2**(offset - ranks[A])`` over subsets ``A``.

    ``ranks`` is indexed by bitmask over ``weights``; ``select`` optionally
    restricts the sum to a boolean mask of subsets.
    """
    n = len(weights)
    if len(ranks) != 1 << n:
        raise ValueError("rank table does not match the number of weights")
    if not exact:
        tab = np.ones(1)
        for g in weights:
            tab = np.concatenate([tab, tab * float(g)])
        vals = np.ldexp(tab, (offset - ranks.astype(np.int32)))
        if select is not None:
            vals = vals[select]
        return float(vals.sum())

    ws = [Fraction(w) for w in weights]
    den = 1
    for w in ws:
        den = math.lcm(den, w.denominator)
    nums = [w.numerator * (den // w.denominator) for w in ws]
    rmax = int(ranks.max())
    bound = 1 << rmax
    for a in nums:
        bound *= a + den
    shift = (rmax - ranks).astype(np.intp)
    residues, moduli = [], []
    modulus, k = 1, 0
    while modulus <= bound:
        p = _prime(k)
        k += 1
        tab = np.ones(1, dtype=np.int64)
        dp = den % p
        for a in nums:
            tab = np.concatenate([tab * dp % p, tab * (a % p) % p])
        pows = np.array([pow(2, j, p) for j in range(rmax + 1)], dtype=np.int64)
        vals = tab * pows[shift] % p
        if select is not None:
            vals = vals[select]
        residues.append(int(vals.sum() % p))
        moduli.append(p)
        modulus *= p
    total = _crt(residues, moduli)
    return Fraction(total, den ** n << rmax) * Fraction(2) ** offset


def _use_exact(w: WeightedMatroid, exact: bool | None) -> bool:
    return w.is_exact() if exact is None else exact


def tutte_exact(w: WeightedMatroid, exact: bool | None = None):
    """Evaluate Z(M; gamma) by summing over all subsets.

    Returns a ``Fraction`` when every weight is rational (or ``exact=True``),
    otherwise a float with relative error around ``FLOAT_RTOL``.
    """
    check_size(w.size)
    return weighted_rank_sum(w.weights, w.matroid.subset_ranks, exact=_use_exact(w, exact))


def tutte_by_recursion(w: WeightedMatroid):
    """Deletion/contraction evaluation, used to cross-check the subset sweep.

    Uses ``Z(M) = Z(M\\e) + gamma_e * 2**(-1) * Z(M/e)`` for non-loops and
    ``Z(M) = (1 + gamma_e) * Z(M\\e)`` for loops.
    """
    cache: dict = {}

    def go(m: BinaryMatroid, ws: tuple):
        if m.size == 0:
            return Fraction(1) if all(isinstance(x, Fraction) for x in w.weights) else 1.0
        key = (m.labels, m.matrix.columns, ws)
        if key in cache:
            return cache[key]
        e = m.labels[-1]
        g = ws[-1]
        rest = ws[:-1]
        if m.is_loop(e):
            val = (1 + g) * go(m.delete([e]), rest)
        else:
            val = go(m.delete([e]), rest) + g * go(m.contract([e]), rest) / 2
        cache[key] = val
        return val

    return go(w.matroid, w.weights)


# minor vectors


class MinorVector2(NamedTuple):
    z0: object
    z1: object


class MinorVector3(NamedTuple):
    z0: object
    z1: object
    z2: object
    z3: object
    z4: object


class ZHatVector(NamedTuple):
    z0: object
    z1: object
    z2: object
    z3: object
    z4: object


def _split_table(w: WeightedMatroid, shared: Sequence[str]) -> tuple[list, np.ndarray]:
    """Weights of ``E - shared`` and the rank table reshaped by shared subset.

    Row ``s`` of the returned table holds ``r(A + S)`` where bit ``j`` of
    ``s`` selects ``shared[j]``.
    """
    check_size(w.size)
    sset = set(shared)
    rest = [x for x in w.labels if x not in sset]
    m = w.matroid.reordered(rest + list(shared))
    table = m.subset_ranks.reshape(1 << len(shared), 1 << len(rest))
    mp = w.mapping()
    return [mp[x] for x in rest], table


def _require_nonloop(w: WeightedMatroid, p: str) -> None:
    if p not in w.matroid.index:
        raise KeyError(p)
    if w.matroid.is_loop(p):
        raise ValueError(f"{p} is a loop")


def _require_circuit(w: WeightedMatroid, t: Sequence[str]) -> None:
    if len(set(t)) != 3 or not w.matroid.is_circuit(t):
        raise ValueError(f"{list(t)} is not a 3-circuit")


def minor_vector_2(w: WeightedMatroid, p: str, method: str = "sweep",
                   exact: bool | None = None) -> MinorVector2:
    """``(Z(M\\p), Z(M/p))`` with weights restricted to ``E - p``."""
    _require_nonloop(w, p)
    ex = _use_exact(w, exact)
    if method == "minors":
        return MinorVector2(tutte_exact(w.delete([p]), ex), tutte_exact(w.contract([p]), ex))
    if method != "sweep":
        raise ValueError(f"unknown method {method!r}")
    ws, tab = _split_table(w, [p])
    return MinorVector2(weighted_rank_sum(ws, tab[0], exact=ex),
                        weighted_rank_sum(ws, tab[1], offset=1, exact=ex))


def minor_vector_3(w: WeightedMatroid, t: Sequence[str], method: str = "sweep",
                   exact: bool | None = None) -> MinorVector3:
    """Values of ``M\\T``, ``M/p_j\\(T-p_j)`` for ``j = 1, 2, 3`` and ``M/T``."""
    t = list(t)
    _require_circuit(w, t)
    ex = _use_exact(w, exact)
    if method == "minors":
        vals = [tutte_exact(w.delete(t), ex)]
        for j in range(3):
            others = [x for x in t if x != t[j]]
            vals.append(tutte_exact(w.contract([t[j]]).delete(others), ex))
        vals.append(tutte_exact(w.contract(t), ex))
        return MinorVector3(*vals)
    if method != "sweep":
        raise ValueError(f"unknown method {method!r}")
    ws, tab = _split_table(w, t)
    return MinorVector3(
        weighted_rank_sum(ws, tab[0], exact=ex),
        weighted_rank_sum(ws, tab[1], offset=1, exact=ex),
        weighted_rank_sum(ws, tab[2], offset=1, exact=ex),
        weighted_rank_sum(ws, tab[4], offset=1, exact=ex),
        weighted_rank_sum(ws, tab[7], offset=2, exact=ex),
    )


# excess-rank pattern (e1, e2, e3) -> predicate index
_PATTERN_CLASS = {0b000: 0, 0b110: 1, 0b101: 2, 0b011: 3, 0b111: 4}


def classify_subsets(table: np.ndarray) -> np.ndarray:
    """Predicate index 0..4 of each subset ``A`` of ``E - T``.

    ``table`` is the reshaped rank table from the sweep. Raises if some
    subset has an excess-rank pattern outside the five binary cases.
    """
    code = np.zeros(table.shape[1], dtype=np.int8)
    for j in range(3):
        code |= ((table[1 << j] - table[0]) << j).astype(np.int8)
    lookup = np.full(8, -1, dtype=np.int8)
    for pattern, k in _PATTERN_CLASS.items():
        lookup[pattern] = k
    cls = lookup[code]
    if (cls < 0).any():
        bad = int(np.flatnonzero(cls < 0)[0])
        raise ValueError(f"subset mask {bad:#x} has excess pattern {int(code[bad]):03b}, "
                         "impossible for a binary matroid")
    return cls


def zhat_vector(w: WeightedMatroid, t: Sequence[str], exact: bool | None = None) -> ZHatVector:
    """Partial sums of ``gamma_A 2**(-r(A))`` grouped by predicate class."""
    t = list(t)
    _require_circuit(w, t)
    ex = _use_exact(w, exact)
    ws, tab = _split_table(w, t)
    cls = classify_subsets(tab)
    return ZHatVector(*(weighted_rank_sum(ws, tab[0], select=(cls == k), exact=ex) for k in range(5)))


def zhat_vector_2(w: WeightedMatroid, p: str, exact: bool | None = None) -> MinorVector2:
    """Two-term analogue: sums over ``A`` with excess ``e(A, p)`` equal to 0 and 1."""
    _require_nonloop(w, p)
    ex = _use_exact(w, exact)
    ws, tab = _split_table(w, [p])
    exc = tab[1] - tab[0]
    return MinorVector2(weighted_rank_sum(ws, tab[0], select=(exc == 0), exact=ex),
                        weighted_rank_sum(ws, tab[0], select=(exc == 1), exact=ex))


# cross-checks


def potts_spin_sum(edges: Sequence[tuple[int, int]], weights: Sequence, num_vertices: int):
    """Ferromagnetic two-state Potts sum ``sum_sigma prod_e (1 + gamma_e [sigma_u = sigma_v])``."""
    total = 0
    for spins in itertools.product((0, 1), repeat=num_vertices):
        term = 1
        for (u, v), g in zip(edges, weights):
            if spins[u] == spins[v]:
                term = term * (1 + g)
        total = total + term
    return total


def potts_crosscheck(edges: Sequence[tuple[int, int]], weights: Sequence | None = None,
                     num_vertices: int | None = None):
    """Return ``(2**-|V| Z_Potts(G; 2, gamma), Z(cycle matroid of G; gamma))``."""
    if num_vertices is None:
        num_vertices = 1 + max((max(u, v) for u, v in edges), default=-1)
    if weights is None:
        weights = [Fraction(1)] * len(edges)
    weights = [w if isinstance(w, float) else Fraction(w) for w in weights]
    spin = potts_spin_sum(edges, weights, num_vertices)
    lhs = spin / Fraction(2) ** num_vertices if not isinstance(spin, float) else spin / 2 ** num_vertices
    m = BinaryMatroid.from_graph(edges, num_vertices=num_vertices)
    rhs = tutte_exact(WeightedMatroid(m, tuple(weights)))
    return lhs, rhs


def dual_evaluate(w: WeightedMatroid, check: bool = True, exact: bool | None = None):
    """Evaluate through the dual: ``gamma_E 2**(-r(E)) Z(M*; 2/gamma)``.

    Zero-weight elements are deleted first. With ``check`` the result is
    compared against the direct sum (exactly, or to ``FLOAT_RTOL``).
    """
    ex = _use_exact(w, exact)
    nz = w.delete([x for x, g in zip(w.labels, w.weights) if g == 0])
    two = Fraction(2) if ex else 2.0
    gamma_e = Fraction(1) if ex else 1.0
    for g in nz.weights:
        gamma_e = gamma_e * (Fraction(g) if ex else float(g))
    dual_weights = tuple(two / (Fraction(g) if ex else float(g)) for g in nz.weights)
    star = WeightedMatroid(nz.matroid.dual(), dual_weights)
    val = gamma_e / two ** nz.matroid.rank() * tutte_exact(star, ex)
    if check:
        direct = tutte_exact(w, ex)
        if ex:
            ok = direct == val
        else:
            ok = math.isclose(direct, val, rel_tol=1e-9)
        if not ok:
            raise AssertionError(f"dual evaluation {val} differs from direct value {direct}")
    return val


def close(a, b, rtol: float = FLOAT_RTOL) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return math.isclose(float(a), float(b), rel_tol=rtol)


def values_as_float(values: Iterable) -> list[float]:
    return [float(v) for v in values]
