"""Named property suites, each a randomized or exhaustive check of one identity.

Every suite takes a numpy ``Generator`` and a case count and returns a
``SuiteResult``; the first failing case is kept as a printable
counterexample. Exhaustive suites (``identity-replacement``, ``potts`` and
``matrix-identities``) ignore the count.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Callable, NamedTuple

import numpy as np

from . import generators as gen
from .gf2 import Gf2Matrix
from .io import format_instance
from .matroid import BinaryMatroid, WeightedMatroid, delta_sum, fixed_matroids
from .signatures import (PROXIMITY_CONSTANT, Signature, bilinear_lower_bound, bilinear_stability_check,
                         clamp_delta, clamp_signature, i3_matroid_weights, i3_weights, signature_of)
from .sums import (correction_data, correction_upper_bound, expected_corrections, ineqs_violations,
                   matrix_identities, verify_2sum_split, verify_3sum_split, zhat_identity)
from .tutte import dual_evaluate, minor_vector_2, minor_vector_3, potts_crosscheck, tutte_exact, zhat_vector


class SuiteResult(NamedTuple):
    name: str
    cases: int
    failures: int
    counterexample: str | None
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def report(self) -> str:
        lines = [f"suite: {self.name}", f"cases: {self.cases}", f"failures: {self.failures}"]
        lines += list(self.notes)
        if self.counterexample is not None:
            lines.append("counterexample:")
            lines += ["  " + ln for ln in self.counterexample.splitlines()]
        lines.append(f"result: {'pass' if self.ok else 'fail'}")
        return "\n".join(lines)


class _Tally:
    def __init__(self, name: str):
        self.name = name
        self.cases = 0
        self.failures = 0
        self.example: str | None = None
        self.notes: list[str] = []

    def record(self, ok: bool, describe: Callable[[], str]) -> None:
        self.cases += 1
        if not ok:
            self.failures += 1
            if self.example is None:
                self.example = describe()

    def result(self) -> SuiteResult:
        return SuiteResult(self.name, self.cases, self.failures, self.example, tuple(self.notes))


def _pair_text(w1: WeightedMatroid, w2: WeightedMatroid, extra: str = "") -> str:
    out = "M1:\n" + format_instance(w1) + "M2:\n" + format_instance(w2)
    return out + extra


# splitting identities


def two_circuit(a: str, b: str) -> BinaryMatroid:
    return BinaryMatroid.from_lists([[1, 1]], [a, b])


def suite_2sumsplit(rng: np.random.Generator, count: int = 200) -> SuiteResult:
    t = _Tally("2sumsplit")
    w1 = WeightedMatroid.uniform(two_circuit("a", "p"))
    w2 = WeightedMatroid.uniform(two_circuit("b", "p"))
    lhs, rhs = verify_2sum_split(w1, w2, "p")
    t.record(lhs == rhs == Fraction(5, 2), lambda: _pair_text(w1, w2, f"lhs={lhs} rhs={rhs}\n"))
    for _ in range(count):
        w1, w2, p = gen.random_2sum_pair(rng, max_side=7)
        lhs, rhs = verify_2sum_split(w1, w2, p)
        t.record(lhs == rhs, lambda: _pair_text(w1, w2, f"lhs={lhs} rhs={rhs}\n"))
    return t.result()


def suite_3sumsplit(rng: np.random.Generator, count: int = 100) -> SuiteResult:
    t = _Tally("3sumsplit")
    for _ in range(count):
        w1, w2, tri = gen.random_3sum_pair(rng, max_side=9)
        lhs, rhs = verify_3sum_split(w1, w2, tri)
        t.record(lhs == rhs, lambda: _pair_text(w1, w2, f"lhs={lhs} rhs={rhs}\n"))
    return t.result()


def suite_correction_tables(rng: np.random.Generator, count: int = 50) -> SuiteResult:
    """Corrections of the genuine sum against the predicted tables, for both shared sizes."""
    t = _Tally("correction-tables")
    for i in range(2 * count):
        if i % 2 == 0:
            m1 = gen.planted_element(rng, int(rng.integers(0, 7)), "a")
            m2 = gen.planted_element(rng, int(rng.integers(0, 7)), "b")
        else:
            m1 = gen.planted_triangle(rng, int(rng.integers(0, 7)), "a")
            m2 = gen.planted_triangle(rng, int(rng.integers(0, 7)), "b")
        data = correction_data(m1, m2)
        expected = expected_corrections(data)
        upper = correction_upper_bound(data, m1)
        ok = bool(np.array_equal(data.c, expected) and np.all(data.c <= upper) and np.all(data.c <= 0))
        t.record(ok, lambda: _pair_text(WeightedMatroid.uniform(m1), WeightedMatroid.uniform(m2),
                                        f"c=\n{data.c}\nexpected=\n{expected}\n"))
    return t.result()


# minor vectors and signatures


def suite_ineqs(rng: np.random.Generator, count: int = 500) -> SuiteResult:
    t = _Tally("ineqs")
    for _ in range(count):
        m = gen.planted_triangle(rng, int(rng.integers(0, 8)), "a")
        w = gen.weighted(rng, m)
        tri = ["p1", "p2", "p3"]
        z = minor_vector_3(w, tri)
        bad = ineqs_violations(z)
        zh = zhat_vector(w, tri)
        if not zhat_identity(tuple(zh), tuple(z)[:4]):
            bad.append("V zhat")
        if not zh.z4 > 0 or any(x < 0 for x in zh):
            bad.append("zhat sign")
        zp = minor_vector_2(w, "p1")
        if not zp.z0 <= zp.z1 < 2 * zp.z0:
            bad.append("z0 <= z1 < 2 z0")
        t.record(not bad, lambda: format_instance(w) + f"z={tuple(z)} failed={bad}\n")
    return t.result()


def suite_simsig(rng: np.random.Generator, count: int = 500, rtol: float = 1e-9) -> SuiteResult:
    """Signature of a random instance, through ``i3_weights``, back through I3."""
    t = _Tally("simsig")
    tri = ["p1", "p2", "p3"]
    worst = 0.0
    for _ in range(count):
        w = gen.weighted(rng, gen.planted_triangle(rng, int(rng.integers(0, 7)), "a"), exact=False)
        s = signature_of(w, tri)
        weights = i3_weights(s)
        i3w = i3_matroid_weights(weights)
        back = signature_of(i3w, tri)
        base = float(tutte_exact(i3w.delete(tri), exact=False))
        errs = [abs(a - b) / abs(a) for a, b in zip(s, back)] + [abs(base - weights.base_value) / base]
        worst = max(worst, *errs)
        t.record(max(errs) <= rtol and min(weights.weights) >= 0,
                 lambda: f"signature={tuple(s)} back={tuple(back)} base={base} formula={weights.base_value}\n")
    t.notes.append(f"max relative error: {worst:.3e}")
    return t.result()


def sample_feasible_signatures(rng: np.random.Generator, n: int) -> np.ndarray:
    """Ascending feasible signatures in ``[1, 2]^3``, by rejection sampling."""
    out = []
    while sum(len(b) for b in out) < n:
        r = np.sort(rng.uniform(1, 2, size=(4 * n, 3)), axis=1)
        total = r.sum(axis=1)
        ok = (2 + 2 * r[:, 0] - total > 0) & (total - r[:, 1] * r[:, 2] - 2 >= 0)
        out.append(r[ok])
    return np.concatenate(out)[:n]


def suite_clamp(rng: np.random.Generator, count: int = 100_000) -> SuiteResult:
    """Clamped genuine perturbations are feasible and close to the true signature."""
    t = _Tally("clamp")
    r = sample_feasible_signatures(rng, count)
    # a tenth of the samples sit on the face s1 = s2
    r[: count // 10, 0] = r[: count // 10, 1]
    chis = rng.uniform(0, 1 / (80 * math.e), size=count)
    noise = np.exp(rng.uniform(-1, 1, size=(count, 3)) * chis[:, None])
    worst = 0.0
    for i in range(count):
        ri = r[i]
        if not Signature(*ri).is_feasible():
            continue
        chi = float(chis[i])
        st = np.sort(ri * noise[i])
        out = clamp_signature(st, chi)
        bad = out.violations()
        delta = clamp_delta(chi)
        dev = max(abs(a - b) for a, b in zip(out, ri))
        ratio = max(abs(math.log(a / b)) for a, b in zip(out, ri))
        if chi > 0:
            worst = max(worst, ratio / chi)
        if dev > 6 * delta + 1e-12:
            bad.append("6 delta")
        if ratio > PROXIMITY_CONSTANT * chi + 1e-12:
            bad.append("proximity")
        t.record(not bad, lambda: f"r={tuple(ri)} chi={chi} s_tilde={tuple(st)} out={tuple(out)} failed={bad}\n")
    t.notes.append(f"max log-ratio / chi: {worst:.3f} (bound {PROXIMITY_CONSTANT})")
    return t.result()


def sample_ratio_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    v = np.empty((n, 4))
    v[:, 0] = rng.uniform(0.1, 10, size=n)
    v[:, 1:] = v[:, :1] * rng.uniform(1, 2, size=(n, 3))
    return v


def suite_yyy(rng: np.random.Generator, count: int = 100_000) -> SuiteResult:
    """The bilinear form is stable under componentwise ``e^{+-eps}`` changes."""
    t = _Tally("yyy")
    z = sample_ratio_vectors(rng, count)
    s = sample_ratio_vectors(rng, count)
    eps = rng.uniform(1e-6, 0.999, size=count)
    r = np.empty_like(s)
    todo = np.arange(count)
    while len(todo):
        cand = s[todo] * np.exp(rng.uniform(-1, 1, size=(len(todo), 4)) * eps[todo, None])
        q = cand[:, 1:] / cand[:, :1]
        good = np.all((q >= 1) & (q <= 2), axis=1)
        r[todo[good]] = cand[good]
        todo = todo[~good]
    for i in range(count):
        zi, si, ri, e = z[i], s[i], r[i], float(eps[i])
        ok = bilinear_stability_check(zi, si, ri, e) and bilinear_lower_bound(zi, ri)
        t.record(ok, lambda: f"z={tuple(zi)} s={tuple(si)} r={tuple(ri)} eps={e}\n")
    return t.result()


# replacement identities


def _matroids_with_planted(n: int, planted: str) -> list[tuple[BinaryMatroid, tuple[str, ...]]]:
    """One representative of every binary matroid on ``n`` elements with a planted set.

    Every matroid with a non-loop ``p`` has a basis containing ``p``, and
    every matroid with a triangle ``T`` has a basis containing two elements
    of ``T``; up to relabeling it is ``[I_r | A]`` with those basis elements
    first. Non-basis columns are enumerated as multisets, which covers every
    isomorphism class at least once.
    """
    out = []
    k = 1 if planted == "p" else 3
    tset = ("p",) if k == 1 else ("p1", "p2", "p3")
    for r in range(1 if k == 1 else 2, n + 1):
        fixed = [1 << i for i in range(r)]
        extra = n - r
        if k == 3:
            fixed.append(0b11)
            extra -= 1
        if extra < 0:
            continue
        for cols in itertools.combinations_with_replacement(range(1 << r), extra):
            columns = fixed + list(cols)
            if k == 1:
                labels = ["p"] + [f"x{j}" for j in range(1, n)]
            else:
                labels = ["p1", "p2"] + [f"x{j}" for j in range(2, r)] + ["p3"] + [f"x{j}" for j in range(r + 1, n)]
            out.append((BinaryMatroid(Gf2Matrix.from_columns(columns, r), tuple(labels)), tset))
    return out


def suite_identity_replacement(rng: np.random.Generator | None = None, count: int = 0,
                               max_size: int = 8) -> SuiteResult:
    """``M + I2`` and ``M + I3`` equal ``M`` after renaming ``e`` to ``p``."""
    t = _Tally("identity-replacement")
    fm = fixed_matroids()
    ren2 = {"e": "p"}
    ren3 = {"e1": "p1", "e2": "p2", "e3": "p3"}
    for n in range(1, max_size + 1):
        for m, _ in _matroids_with_planted(n, "p"):
            out = delta_sum(m, fm.I2, validate="relaxed").relabel(ren2)
            t.record(out.same_cycle_space(m), lambda: format_instance(WeightedMatroid.uniform(m)))
    for n in range(3, max_size + 1):
        for m, _ in _matroids_with_planted(n, "t"):
            out = delta_sum(m, fm.I3, validate="relaxed").relabel(ren3)
            t.record(out.same_cycle_space(m), lambda: format_instance(WeightedMatroid.uniform(m)))
    t.notes.append(f"exhaustive up to {max_size} elements")
    return t.result()


def suite_duality(rng: np.random.Generator, count: int = 100) -> SuiteResult:
    t = _Tally("duality")
    for _ in range(count):
        n = int(rng.integers(1, 11))
        m = gen.random_matroid(rng, n, int(rng.integers(1, n + 1)))
        w = gen.weighted(rng, m)
        via_dual = dual_evaluate(w, check=False)
        direct = tutte_exact(w)
        t.record(via_dual == direct, lambda: format_instance(w) + f"dual={via_dual} direct={direct}\n")
    return t.result()


def all_multigraphs(max_vertices: int = 4, max_edges: int = 6):
    """Every labelled multigraph (loops allowed) up to the given sizes, as ``(nv, edges)``."""
    for nv in range(1, max_vertices + 1):
        slots = [(u, v) for u in range(nv) for v in range(u, nv)]
        for ne in range(max_edges + 1):
            for edges in itertools.combinations_with_replacement(slots, ne):
                yield nv, list(edges)


def suite_potts(rng: np.random.Generator, count: int = 0) -> SuiteResult:
    t = _Tally("potts")
    for nv, edges in all_multigraphs():
        for weights in (None, [gen.random_fraction(rng) for _ in edges]):
            lhs, rhs = potts_crosscheck(edges, weights, nv)
            t.record(lhs == rhs, lambda: f"vertices={nv} edges={edges} weights={weights} potts={lhs} tutte={rhs}\n")
    t.notes.append("exhaustive: multigraphs with at most 4 vertices and 6 edges, unit and random weights")
    return t.result()


def suite_matrix_identities(rng: np.random.Generator | None = None, count: int = 0) -> SuiteResult:
    t = _Tally("matrix-identities")
    try:
        rep = matrix_identities()
        ok = True
    except AssertionError as exc:
        rep, ok = None, False
        t.notes.append(str(exc))
    t.record(ok, lambda: "identity residual nonzero")
    if rep is not None:
        t.notes.append(f"C3 = V3^T D3' V3 residual = {rep.residual3}")
        t.notes.append(f"C2 = V2^T D2 V2 residual = {rep.residual2}")
        t.notes.append(f"rank(C3) = {rep.rank_c3}")
    return t.result()


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "2sumsplit": suite_2sumsplit,
    "3sumsplit": suite_3sumsplit,
    "correction-tables": suite_correction_tables,
    "ineqs": suite_ineqs,
    "simsig": suite_simsig,
    "clamp": suite_clamp,
    "yyy": suite_yyy,
    "identity-replacement": suite_identity_replacement,
    "duality": suite_duality,
    "potts": suite_potts,
    "matrix-identities": suite_matrix_identities,
}


def run_suite(name: str, seed: int = 0, count: int | None = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    rng = np.random.default_rng(seed)
    fn = SUITES[name]
    return fn(rng) if count is None else fn(rng, count)
