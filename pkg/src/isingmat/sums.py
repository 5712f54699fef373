"""Splitting identities for 2-sums and 3-sums at q = 2.

For a delta-sum ``M1 + M2`` over a shared set ``T`` the Tutte value of the
sum is a bilinear form in the minor vectors of the two sides:

    Z(M1 + M2) = z1^T D z2.

The integer matrices here are the q = 2 specialisations; ``C = V^T D' V``
links the predicate-class sums ``zhat`` (with ``z = V zhat``) to ``D``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .matroid import BinaryMatroid, WeightedMatroid, delta_sum, weighted_delta_sum
from .tutte import minor_vector_2, minor_vector_3, tutte_exact

C2 = np.array([[2, 1], [1, 1]], dtype=np.int64)
V2 = np.array([[1, 1], [2, 1]], dtype=np.int64)
D2 = np.array([[2, -1], [-1, 1]], dtype=np.int64)

C3 = np.array([
    [4, 2, 2, 2, 1],
    [2, 2, 1, 1, 1],
    [2, 1, 2, 1, 1],
    [2, 1, 1, 2, 1],
    [1, 1, 1, 1, 1],
], dtype=np.int64)
V3 = np.array([
    [1, 1, 1, 1, 1],
    [2, 2, 1, 1, 1],
    [2, 1, 2, 1, 1],
    [2, 1, 1, 2, 1],
    [4, 2, 2, 2, 1],
], dtype=np.int64)
D3 = np.array([
    [4, -1, -1, -1],
    [-1, 1, 0, 0],
    [-1, 0, 1, 0],
    [-1, 0, 0, 1],
], dtype=np.int64)
D3_PADDED = np.zeros((5, 5), dtype=np.int64)
D3_PADDED[:4, :4] = D3

# correction exponents c(A, B) = -log2 C[j, k] for the triangle case
C3_EXPONENTS = -np.log2(C3).astype(np.int64)


class SplitMatrices(NamedTuple):
    C3: np.ndarray
    V3: np.ndarray
    D3: np.ndarray
    D3_padded: np.ndarray
    C2: np.ndarray
    V2: np.ndarray
    D2: np.ndarray


def split_matrices() -> SplitMatrices:
    return SplitMatrices(C3.copy(), V3.copy(), D3.copy(), D3_PADDED.copy(), C2.copy(), V2.copy(), D2.copy())


class IdentityReport(NamedTuple):
    residual3: int
    residual2: int
    rank_c3: int

    @property
    def ok(self) -> bool:
        return self.residual3 == 0 and self.residual2 == 0 and self.rank_c3 == 4


def matrix_identities() -> IdentityReport:
    """Check ``C = V^T D' V`` for both sum types and the rank drop of ``C3``."""
    r3 = int(np.abs(V3.T @ D3_PADDED @ V3 - C3).sum())
    r2 = int(np.abs(V2.T @ D2 @ V2 - C2).sum())
    rank = int(np.linalg.matrix_rank(C3.astype(float)))
    report = IdentityReport(r3, r2, rank)
    if not report.ok:
        raise AssertionError(f"matrix identities failed: {report}")
    return report


def bilinear(z1: Sequence, d: np.ndarray, z2: Sequence):
    """``z1^T d z2`` in the arithmetic of the entries (exact for Fractions)."""
    total = 0
    for i, a in enumerate(z1):
        for j, b in enumerate(z2):
            c = int(d[i, j])
            if c:
                total = total + c * a * b
    return total


# excess ranks and corrections


def excess_rank(m: BinaryMatroid, a: Iterable[str], s: Iterable[str]) -> int:
    """``r(A + S) - r(A)`` for disjoint ``A`` and ``S``."""
    a, s = set(a), set(s)
    if a & s:
        raise ValueError(f"sets overlap on {sorted(a & s)}")
    return m.rank(a | s) - m.rank(a)


def correction(m1: BinaryMatroid, m2: BinaryMatroid, a: Iterable[str], b: Iterable[str],
               summed: BinaryMatroid | None = None) -> int:
    """Rank defect ``r_sum(A + B) - r1(A) - r2(B)`` in the genuine delta-sum."""
    a, b = set(a), set(b)
    if summed is None:
        summed = delta_sum(m1, m2)
    return summed.rank(a | b) - m1.rank(a) - m2.rank(b)


class CorrectionData(NamedTuple):
    """All corrections for one pair, as arrays indexed ``[B mask, A mask]``.

    ``e1`` and ``e2`` hold the excess ranks over every subset ``S`` of ``T``
    (axis 0 indexed by ``S`` mask) for the sides ``E1 = E(M1) - T`` and
    ``E2 = E(M2) - T``.
    """

    shared: tuple[str, ...]
    side1: tuple[str, ...]
    side2: tuple[str, ...]
    c: np.ndarray
    e1: np.ndarray
    e2: np.ndarray


def _side_tables(m: BinaryMatroid, shared: list[str]) -> tuple[list[str], np.ndarray]:
    sset = set(shared)
    rest = [x for x in m.labels if x not in sset]
    tab = m.reordered(rest + shared).subset_ranks.reshape(1 << len(shared), 1 << len(rest))
    return rest, tab.astype(np.int64)


def correction_data(m1: BinaryMatroid, m2: BinaryMatroid) -> CorrectionData:
    s2 = set(m2.labels)
    shared = [x for x in m1.labels if x in s2]
    side1, t1 = _side_tables(m1, shared)
    side2, t2 = _side_tables(m2, shared)
    summed = delta_sum(m1, m2).reordered(side1 + side2)
    rs = summed.subset_ranks.astype(np.int64).reshape(1 << len(side2), 1 << len(side1))
    c = rs - t1[0][None, :] - t2[0][:, None]
    return CorrectionData(tuple(shared), tuple(side1), tuple(side2), c, t1 - t1[0], t2 - t2[0])


def correction_upper_bound(data: CorrectionData, ground: BinaryMatroid) -> np.ndarray:
    """``min over S of e1(A,S) + e2(B,S) - r_N(S)`` with ``N = ground | T``."""
    shared = list(data.shared)
    n = ground.restrict(shared).reordered(shared)
    best = None
    for s in range(1 << len(shared)):
        val = data.e1[s][None, :] + data.e2[s][:, None] - n.rank_mask(s)
        best = val if best is None else np.minimum(best, val)
    return best


def expected_corrections(data: CorrectionData) -> np.ndarray:
    """Corrections predicted from the excess-rank patterns alone.

    One shared element: ``-1`` exactly when both excesses vanish. A shared
    triangle: ``-log2`` of the ``C3`` entry for the predicate pair.
    """
    from .tutte import classify_subsets

    k = len(data.shared)
    if k == 0:
        return np.zeros_like(data.c)
    if k == 1:
        zero1 = data.e1[1] == 0
        zero2 = data.e2[1] == 0
        return -(zero2[:, None] & zero1[None, :]).astype(np.int64)
    if k == 3:
        # classify_subsets expects absolute ranks; excess tables work the same way
        k1 = classify_subsets(data.e1)
        k2 = classify_subsets(data.e2)
        return C3_EXPONENTS[k1[None, :], k2[:, None]]
    raise ValueError(f"no correction table for {k} shared elements")


# splitting identities


def verify_2sum_split(w1: WeightedMatroid, w2: WeightedMatroid, p: str):
    """Return ``(Z(M1 + M2), z1^T D2 z2)`` for a shared non-loop ``p``."""
    za = minor_vector_2(w1, p)
    zb = minor_vector_2(w2, p)
    lhs = tutte_exact(weighted_delta_sum(w1, w2, validate="relaxed"))
    return lhs, bilinear(za, D2, zb)


def verify_3sum_split(w1: WeightedMatroid, w2: WeightedMatroid, t: Sequence[str]):
    """Return ``(Z(M1 + M2), z1^T D3 z2)`` for a shared triangle ``T``."""
    t = list(t)
    za = minor_vector_3(w1, t)[:4]
    zb = minor_vector_3(w2, t)[:4]
    lhs = tutte_exact(weighted_delta_sum(w1, w2, validate="relaxed"))
    return lhs, bilinear(za, D3, zb)


def zhat_identity(zhat: Sequence, z: Sequence, v: np.ndarray = V3) -> bool:
    """Check ``z = V zhat`` exactly (or to floating tolerance)."""
    from .tutte import close

    for i in range(len(z)):
        acc = 0
        for j in range(len(zhat)):
            acc = acc + int(v[i, j]) * zhat[j]
        if not close(acc, z[i]):
            return False
    return True


def ineqs_violations(z: Sequence, rtol: float = 1e-9) -> list[str]:
    """Names of the minor-vector (in)equalities that fail for ``z = (z0, .., z4)``.

    ``"i"``: z0 > 0; ``"ii"``: z0 <= zj <= 2 z0; ``"iii"``: z4/2 < zj <= z4;
    ``"iv"``: z1 + z2 + z3 = 2 z0 + z4; ``"products"``: zj zk <= z0 z4.
    Comparisons are exact for rational entries; floats get a relative
    slack of ``rtol`` on the non-strict ones.
    """
    z0, z1, z2, z3, z4 = z
    exact = all(isinstance(x, (int, Fraction)) for x in z)
    tol = 0 if exact else rtol * float(z4)
    zs = (z1, z2, z3)
    out = []
    if not z0 > 0:
        out.append("i")
    if not all(z0 - tol <= x <= 2 * z0 + tol for x in zs):
        out.append("ii")
    if not all(z4 / 2 < x <= z4 + tol for x in zs):
        out.append("iii")
    if abs(z1 + z2 + z3 - 2 * z0 - z4) > tol:
        out.append("iv")
    if any(a * b > z0 * z4 * (1 + (0 if exact else rtol)) for a, b in itertools.combinations(zs, 2)):
        out.append("products")
    return out
