"""Signatures and replacement weights for the identity matroids I2 and I3.

A weighted matroid glued along a shared element ``p`` only enters the Tutte
value of the sum through the ratio ``Z(M/p)/Z(M\\p)``; glued along a shared
triangle it enters through the three-term signature. Both can be reproduced
by a tiny matroid (I2 or I3) with suitable weights, so the smaller side of a
2-sum or 3-sum can be swapped for a reweighting of the shared elements.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .matroid import WeightedMatroid
from .sums import D3
from .tutte import minor_vector_2, minor_vector_3, tutte_exact

RHO = 1 / 6000
# proximity constant in the signature clamp: e^{-K chi} s_i <= r_i <= e^{K chi} s_i
PROXIMITY_CONSTANT = 100
MAX_CLAMP_DELTA = 1 / 20
SIG_TOL = 1e-12

Estimator = Callable[[WeightedMatroid, float], float]


class Signature(NamedTuple):
    s1: float
    s2: float
    s3: float

    def violations(self, tol: float = SIG_TOL) -> list[str]:
        """Which feasibility constraint families fail.

        ``sig1`` (the three ``2 + s_i - s_j - s_k > 0``) is strict; ``sig2``
        (``s1 + s2 + s3 >= 3``) and ``sig3`` (``s1 + s2 + s3 - s_j s_k >= 2``)
        are checked with absolute slack ``tol``.
        """
        s = (self.s1, self.s2, self.s3)
        total = sum(s)
        out = []
        if not all(2 + 2 * s[i] - total > 0 for i in range(3)):
            out.append("sig1")
        if total - 3 < -tol:
            out.append("sig2")
        if any(total - s[j] * s[k] - 2 < -tol for j, k in ((1, 2), (0, 2), (0, 1))):
            out.append("sig3")
        return out

    def is_feasible(self, tol: float = SIG_TOL) -> bool:
        return not self.violations(tol)

    def in_range(self, tol: float = 0.0) -> bool:
        return all(1 - tol <= x <= 2 + tol for x in self)


class InfeasibleSignature(ValueError):
    def __init__(self, signature, failed: list[str]):
        super().__init__(f"signature {tuple(signature)} violates {', '.join(failed)}")
        self.signature = signature
        self.failed = failed


def signature_of(w: WeightedMatroid, t: Sequence[str]) -> Signature:
    """``(z1, z2, z3) / z0`` for the minors of ``w`` along the triangle ``t``."""
    z = minor_vector_3(w, t)
    return Signature(*(float(z[j] / z[0]) for j in (1, 2, 3)))


def i2_weight(z0, z1):
    """Weight ``d`` on ``e`` so that I2 has ratio ``Z(I2/p)/Z(I2\\p) = z1/z0``.

    Exact for rational inputs.
    """
    if not z0 > 0:
        raise ValueError("z0 must be positive")
    if z1 < z0:
        raise ValueError(f"z1 = {z1} < z0 = {z0}")
    if not z1 < 2 * z0:
        raise ValueError(f"z1 = {z1} is not below 2 z0 = {2 * z0}")
    return 2 * (z1 - z0) / (2 * z0 - z1)


class I3Weights(NamedTuple):
    d1: float
    d2: float
    d3: float
    R: float
    S1: float
    S2: float
    S3: float

    @property
    def weights(self) -> tuple[float, float, float]:
        return (self.d1, self.d2, self.d3)

    @property
    def base_value(self) -> float:
        """``Z(I3 \\ T)`` at these weights, i.e. ``sqrt(R / (S1 S2 S3))``."""
        return math.sqrt(self.R / (self.S1 * self.S2 * self.S3))


def i3_weights(s: Sequence[float], tol: float = SIG_TOL) -> I3Weights:
    """Non-negative weights on ``e1, e2, e3`` giving I3 the signature ``s``."""
    sig = Signature(*(float(x) for x in s))
    failed = sig.violations(tol)
    if failed:
        raise InfeasibleSignature(sig, failed)
    s1, s2, s3 = sig
    S = (2 + s1 - s2 - s3, 2 - s1 + s2 - s3, 2 - s1 - s2 + s3)
    R = s1 + s2 + s3 - 2
    ds = []
    for i in range(3):
        j, k = [x for x in range(3) if x != i]
        d = -1 + math.sqrt(R * S[i] / (S[j] * S[k]))
        # sig3 slack can leave a rounding-level negative value
        ds.append(max(d, 0.0))
    return I3Weights(ds[0], ds[1], ds[2], R, *S)


def i3_matroid_weights(weights: I3Weights) -> WeightedMatroid:
    from .matroid import fixed_matroids

    i3 = fixed_matroids().I3
    return WeightedMatroid.from_mapping(i3, {"e1": weights.d1, "e2": weights.d2, "e3": weights.d3}, default=0.0)


def clamp_delta(chi: float) -> float:
    return 4 * math.e * chi


def clamp_signature(s_tilde: Sequence[float], chi: float) -> Signature:
    """Move an ascending noisy signature onto the feasible region.

    With ``delta = 4 e chi``: if the two smallest entries are within
    ``5 delta`` they are merged (case 1), otherwise the smallest is raised by
    ``4 delta`` (case 2). The output is feasible for every ascending input
    that the two cases are designed for; if the input is an ``e^{+-chi}``
    perturbation of a feasible ascending ``r`` it is within
    ``e^{+-PROXIMITY_CONSTANT chi}`` of ``r``.
    """
    a, b, c = (float(x) for x in s_tilde)
    if not a <= b <= c:
        raise ValueError(f"clamp input must be sorted ascending, got {(a, b, c)}")
    if chi < 0:
        raise ValueError("chi must be non-negative")
    delta = clamp_delta(chi)
    if delta > MAX_CLAMP_DELTA:
        raise ValueError(f"chi = {chi} too large: 4 e chi = {delta:.4g} exceeds {MAX_CLAMP_DELTA}")
    if b - a <= 5 * delta:
        s12 = min(max(1.0, b), 2 - delta)
        return Signature(s12, s12, min(max(1.0, c), 2 - delta))
    return Signature(a + 4 * delta, min(b, 2.0), min(c, 2.0))


def clamp_signature_any_order(s_tilde: Sequence[float], chi: float) -> Signature:
    """``clamp_signature`` on the sorted entries, returned in the input order."""
    vals = [float(x) for x in s_tilde]
    order = sorted(range(3), key=lambda i: vals[i])
    clamped = clamp_signature([vals[i] for i in order], chi)
    out = [0.0] * 3
    for pos, i in enumerate(order):
        out[i] = clamped[pos]
    return Signature(*out)


def clamp_2sum(z0_tilde, z1_tilde, chi: float):
    """Adjust noisy ``(z0, z1)`` so that ``z0' <= z1' <= 2 z0'``.

    ``z0' = z0_tilde e^chi`` and ``z1'`` is clipped into ``[z0', 2 z0']``.
    With ``chi = 0`` rational inputs stay rational.
    """
    if not (z0_tilde > 0 and z1_tilde > 0):
        raise ValueError("estimates must be positive")
    z0p = z0_tilde * math.exp(chi) if chi else z0_tilde
    if z1_tilde <= z0p:
        z1p = z0p
    elif z1_tilde >= 2 * z0p:
        z1p = 2 * z0p
    else:
        z1p = z1_tilde
    return z0p, z1p


def bilinear_form_d3(z: Sequence[float], v: Sequence[float]) -> float:
    return float(np.asarray(z, dtype=float) @ D3 @ np.asarray(v, dtype=float))


def _check_ratio_vector(name: str, v: Sequence[float], tol: float = 1e-12) -> None:
    if len(v) != 4 or any(x <= 0 for x in v):
        raise ValueError(f"{name} must be a positive 4-vector")
    for x in v[1:]:
        q = x / v[0]
        if not 1 - tol <= q <= 2 + tol:
            raise ValueError(f"{name} has component ratio {q} outside [1, 2]")


def bilinear_stability_check(z: Sequence[float], s: Sequence[float], r: Sequence[float], eps: float) -> bool:
    """Whether ``e^{-56 eps} z^T D s <= z^T D r <= e^{56 eps} z^T D s``.

    Inputs must satisfy the ratio constraints and ``s``, ``r`` must agree
    componentwise to within ``e^{+-eps}`` with ``0 < eps < 1``.
    """
    for name, v in (("z", z), ("s", s), ("r", r)):
        _check_ratio_vector(name, v)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    slack = 1 + 1e-12
    for a, b in zip(s, r):
        if not (b <= a * math.exp(eps) * slack and a <= b * math.exp(eps) * slack):
            raise ValueError("s and r are not within e^{+-eps} of each other")
    zs = bilinear_form_d3(z, s)
    zr = bilinear_form_d3(z, r)
    return math.exp(-56 * eps) * zs <= zr <= math.exp(56 * eps) * zs


def bilinear_lower_bound(z: Sequence[float], v: Sequence[float]) -> bool:
    """``z^T D v >= z0 v0`` for vectors with component ratios at least 1."""
    return bilinear_form_d3(z, v) >= z[0] * v[0] * (1 - 1e-12)


# replacement


class Replacement(NamedTuple):
    """Outcome of replacing the small side of a sum.

    ``weighted`` is the large side reweighted on the shared elements and
    ``scale`` the factor with ``scale * Z(weighted)`` approximating the sum.
    """

    weighted: WeightedMatroid
    scale: object
    detail: object


def _exact_estimator(w: WeightedMatroid, accuracy: float):
    return tutte_exact(w)


def replace_2sum_from_estimates(w1: WeightedMatroid, p: str, z0_tilde, z1_tilde, chi: float) -> Replacement:
    """Swap the small side of a 2-sum for I2, given estimates of its minors."""
    z0p, z1p = clamp_2sum(z0_tilde, z1_tilde, chi)
    if z1p >= 2 * z0p:
        # only reachable through the clamp; the weight formula needs z1 < 2 z0
        z1p = 2 * z0p * (1 - 1e-15)
    d = i2_weight(z0p, z1p)
    scale = 2 * z0_tilde / (2 + d)
    return Replacement(w1.with_weights({p: d}), scale, d)


def replace_2sum(w1: WeightedMatroid, w2: WeightedMatroid, p: str, eps_local: float = 0.0,
                 estimator: Estimator | None = None) -> Replacement:
    """Replace ``w2`` in the 2-sum ``w1 + w2`` over ``p`` by a reweighting of ``p``.

    The minors of ``w2`` are estimated at accuracy ``eps_local * RHO``; with
    the default exact estimator and ``eps_local = 0`` the replacement is exact.
    """
    est = estimator or _exact_estimator
    acc = eps_local * RHO
    if estimator is None:
        z = minor_vector_2(w2, p)
        z0t, z1t = z.z0, z.z1
    else:
        z0t = est(w2.delete([p]), acc)
        z1t = est(w2.contract([p]), acc)
    return replace_2sum_from_estimates(w1, p, z0t, z1t, acc)


def replace_3sum_from_estimates(w1: WeightedMatroid, t: Sequence[str], z0_tilde: float,
                                s_tilde: Sequence[float], chi: float) -> Replacement:
    """Swap the small side of a 3-sum for I3, given ``z0`` and signature estimates."""
    s = clamp_signature_any_order(s_tilde, chi)
    weights = i3_weights(s)
    scale = float(z0_tilde) / weights.base_value
    updates = {t[i]: weights.weights[i] for i in range(3)}
    return Replacement(w1.with_weights(updates), scale, weights)


def replace_3sum(w1: WeightedMatroid, w2: WeightedMatroid, t: Sequence[str], eps_local: float = 0.0,
                 estimator: Estimator | None = None) -> Replacement:
    """Replace ``w2`` in the 3-sum ``w1 + w2`` over the triangle ``t``.

    The four minors of ``w2`` are estimated at accuracy ``eps_local * RHO / 2``
    each, so the signature ratios are within ``e^{+-eps_local * RHO}``.
    """
    t = list(t)
    acc = eps_local * RHO
    if estimator is None:
        z = minor_vector_3(w2, t)
        zs = [float(x) for x in z[:4]]
    else:
        zs = [estimator(w2.delete(t), acc / 2)]
        for j in range(3):
            others = [x for x in t if x != t[j]]
            zs.append(estimator(w2.contract([t[j]]).delete(others), acc / 2))
    s_tilde = [zs[j] / zs[0] for j in (1, 2, 3)]
    return replace_3sum_from_estimates(w1, t, zs[0], s_tilde, acc)
