"""Acceptance criteria 1 to 11, each at its pinned tolerance and time budget."""

import math
import time

import numpy as np

from isingmat import checks
from isingmat import generators as gen
from isingmat.decompose import decompose
from isingmat.fpras import estimate
from isingmat.matroid import weighted_delta_sum
from isingmat.signatures import RHO, replace_2sum_from_estimates, replace_3sum_from_estimates
from isingmat.sums import matrix_identities
from isingmat.tutte import minor_vector_2, minor_vector_3, tutte_exact

SEED = 20240601


def timed(fn, *args, **kw):
    start = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - start


def test_criterion_01_matrix_identities(acceptance):
    rep = matrix_identities()
    elapsed = min(timed(matrix_identities)[1] for _ in range(5))
    ok = rep.ok and elapsed < 1e-3
    detail = (f"C3 residual {rep.residual3}, C2 residual {rep.residual2}, rank(C3) = {rep.rank_c3}, "
              f"{elapsed * 1e3:.3f} ms (< 1 ms)")
    assert acceptance(1, ok, detail)


def test_criterion_02_two_sum_split(acceptance):
    res, elapsed = timed(checks.suite_2sumsplit, np.random.default_rng(SEED), 200)
    ok = res.ok and res.cases >= 201 and elapsed < 10
    assert acceptance(2, ok, f"{res.cases - res.failures}/{res.cases} exact equalities incl. the 5/2 example, "
                             f"{elapsed:.2f} s (< 10 s)"), res.report()


def test_criterion_03_three_sum_split(acceptance):
    res, elapsed = timed(checks.suite_3sumsplit, np.random.default_rng(SEED), 100)
    ok = res.ok and res.cases >= 100 and elapsed < 60
    assert acceptance(3, ok, f"{res.cases - res.failures}/{res.cases} exact equalities, "
                             f"{elapsed:.2f} s (< 60 s)"), res.report()


def test_criterion_04_correction_tables(acceptance):
    res = checks.suite_correction_tables(np.random.default_rng(SEED), 50)
    ok = res.ok and res.cases >= 100
    assert acceptance(4, ok, f"{res.cases - res.failures}/{res.cases} pairs (half one shared element, "
                             f"half a shared triangle) match every (A, B) entry"), res.report()


def test_criterion_05_minor_vector_inequalities(acceptance):
    res = checks.suite_ineqs(np.random.default_rng(SEED), 500)
    ok = res.ok and res.cases >= 500
    assert acceptance(5, ok, f"{res.cases - res.failures}/{res.cases} instances satisfy all inequalities "
                             f"(exact rationals)"), res.report()


def test_criterion_06_signature_round_trip(acceptance):
    res = checks.suite_simsig(np.random.default_rng(SEED), 500, rtol=1e-9)
    ok = res.ok and res.cases >= 500
    assert acceptance(6, ok, f"{res.cases - res.failures}/{res.cases} round trips within 1e-9; "
                             + "; ".join(res.notes)), res.report()


def test_criterion_07_identity_replacement(acceptance):
    res = checks.suite_identity_replacement(max_size=8)
    assert acceptance(7, res.ok, f"{res.cases - res.failures}/{res.cases} matroids up to 8 elements "
                                 f"(planted element and planted triangle), exact"), res.report()


def _sign(rng):
    return 1.0 if rng.random() < 0.5 else -1.0


def test_criterion_08_error_propagation(acceptance):
    violations, cases, worst = 0, 0, 0.0
    for eps in (0.1, 0.5, 1.0):
        acc = eps * RHO
        for seed in range(100):
            rng = np.random.default_rng([SEED, seed])
            w1, w2, p = gen.random_2sum_pair(rng, max_side=6)
            exact = float(tutte_exact(weighted_delta_sum(w1, w2)))
            z0, z1 = (float(x) for x in minor_vector_2(w2, p))
            z0t, z1t = z0 * math.exp(_sign(rng) * acc), z1 * math.exp(_sign(rng) * acc)
            rep = replace_2sum_from_estimates(w1, p, z0t, z1t, acc)
            val = float(rep.scale) * tutte_exact(rep.weighted, exact=False)
            dev = abs(math.log(val / exact)) / eps
            worst, cases = max(worst, dev), cases + 1
            violations += dev > 1

            w1, w2, t = gen.random_3sum_pair(rng, max_side=6)
            exact = float(tutte_exact(weighted_delta_sum(w1, w2)))
            z = [float(x) for x in minor_vector_3(w2, t)]
            z0t = z[0] * math.exp(_sign(rng) * acc)
            st = [z[j] / z[0] * math.exp(_sign(rng) * acc) for j in (1, 2, 3)]
            rep = replace_3sum_from_estimates(w1, t, z0t, st, acc)
            val = float(rep.scale) * tutte_exact(rep.weighted, exact=False)
            dev = abs(math.log(val / exact)) / eps
            worst, cases = max(worst, dev), cases + 1
            violations += dev > 1
    ok = violations == 0 and cases == 600
    assert acceptance(8, ok, f"{violations} sandwich violations in {cases} replacements (eps 0.1, 0.5, 1.0; "
                             f"100 seeds each; 2-sums and 3-sums); max |log ratio|/eps = {worst:.4f}")


def test_criterion_09_clamp_and_bilinear(acceptance):
    clamp = checks.suite_clamp(np.random.default_rng(SEED), 100_000)
    yyy = checks.suite_yyy(np.random.default_rng(SEED), 100_000)
    ok = clamp.ok and yyy.ok and clamp.cases == 100_000 and yyy.cases == 100_000
    assert acceptance(9, ok, f"clamp {clamp.cases - clamp.failures}/{clamp.cases} feasible and within "
                             f"e^(+-100 chi) ({clamp.notes[0]}); bilinear check "
                             f"{yyy.cases - yyy.failures}/{yyy.cases}"), clamp.report() + "\n" + yyy.report()


def test_criterion_10_end_to_end(acceptance):
    start = time.perf_counter()
    rng = np.random.default_rng(SEED)
    instances = [gen.random_planted_instance(rng, 14, 24, 12) for _ in range(20)]
    violations = runs = 0
    worst_noisy = worst_exact = 0.0
    sizes = []
    for inst in instances:
        w = inst.weighted
        tree = decompose(w.matroid, inst.certificate)
        sizes.append(w.size)
        assert max(leaf.size for leaf in tree.leaves()) <= 12
        exact = float(tutte_exact(w))
        for eps in (0.1, 1.0):
            for seed in range(50):
                res = estimate(w, eps, tree, oracle="noisy", seed=seed)
                runs += 1
                violations += not res.within(exact)
                worst_noisy = max(worst_noisy, abs(math.log(res.value / exact)) / eps)
            res = estimate(w, eps, tree, oracle="exact")
            worst_exact = max(worst_exact, abs(res.value - exact) / exact)
    elapsed = time.perf_counter() - start
    ok = violations == 0 and worst_exact <= 1e-6 and elapsed < 300 and min(sizes) >= 14 and max(sizes) <= 24
    assert acceptance(10, ok, f"{len(instances)} instances of {min(sizes)}-{max(sizes)} elements, "
                              f"{violations} violations in {runs} noisy runs (max |log ratio|/eps = "
                              f"{worst_noisy:.3f}), exact-oracle rel. error {worst_exact:.1e} (<= 1e-6), "
                              f"{elapsed:.1f} s (< 300 s)")


def test_criterion_11_duality_and_potts(acceptance):
    dual = checks.suite_duality(np.random.default_rng(SEED), 100)
    potts = checks.suite_potts(np.random.default_rng(SEED))
    ok = dual.ok and potts.ok and dual.cases >= 100
    assert acceptance(11, ok, f"duality {dual.cases - dual.failures}/{dual.cases} exact; Potts "
                              f"{potts.cases - potts.failures}/{potts.cases} multigraphs x weightings "
                              f"(<= 4 vertices, <= 6 edges)"), dual.report() + "\n" + potts.report()
