import math

import numpy as np
import pytest

from isingmat import generators as gen
from isingmat.decompose import CertLeaf, CertSum, decompose
from isingmat.fpras import AccuracyUnderflow, estimate, format_result, noisy_oracle, size_measure
from isingmat.matroid import BinaryMatroid, WeightedMatroid, fixed_matroids
from isingmat.signatures import RHO
from isingmat.tutte import tutte_exact

K4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def triangle_2sum():
    a = BinaryMatroid.from_graph([(0, 1), (1, 2), (0, 2)], ["a", "b", "p"])
    b = BinaryMatroid.from_graph([(0, 1), (1, 2), (0, 2)], ["p", "c", "d"])
    from isingmat.matroid import delta_sum
    m = delta_sum(a, b)
    cert = CertSum(2, ("p",), CertLeaf("graphic", ("a", "b", "p")), CertLeaf("graphic", ("p", "c", "d")))
    return m, cert


def test_graphic_base_case_is_the_oracle_value():
    w = WeightedMatroid.from_mapping(BinaryMatroid.from_graph(K4), {f"e{j}": 0.5 + j for j in range(6)})
    for eps in (0.01, 1.0):
        assert estimate(w, eps).value == tutte_exact(w, exact=False)


def test_planted_2sum_of_triangles_noisy():
    m, cert = triangle_2sum()
    w = WeightedMatroid.from_mapping(m, {"a": 1.5, "b": 0.25, "c": 2.0, "d": 0.0})
    tree = decompose(m, cert)
    exact = float(tutte_exact(w))
    for seed in range(100):
        res = estimate(w, 0.5, tree, oracle="noisy", seed=seed)
        assert res.within(exact)


def test_planted_3sum_exact_mode():
    rng = np.random.default_rng(21)
    inst = gen.planted_chain(rng, ["graphic", "cographic"], [10, 10], [3])
    w = inst.weighted
    res = estimate(w, 0.1, inst.certificate)
    exact = float(tutte_exact(w))
    assert res.tree.k == 3
    assert abs(res.value - exact) <= 1e-6 * exact


def test_size_measure():
    rng = np.random.default_rng(22)
    inst = gen.planted_chain(rng, ["graphic", "cographic"], [9, 8], [3])
    tree = decompose(inst.weighted.matroid, inst.certificate)
    assert size_measure(tree) == size_measure(tree.left) + size_measure(tree.right) - 6
    assert size_measure(tree.right) == 8  # five own elements plus the triangle
    assert size_measure(fixed_matroids().I3) == 6
    inst = gen.planted_chain(rng, ["graphic", "graphic"], [5, 6], [1])
    tree = decompose(inst.weighted.matroid, inst.certificate)
    assert size_measure(tree) == 11


def test_noisy_oracle():
    rng = np.random.default_rng(0)
    draws = [noisy_oracle(3.0, 0.2, rng) for _ in range(10_000)]
    assert all(math.exp(-0.2) * 3 <= d <= math.exp(0.2) * 3 for d in draws)
    assert noisy_oracle(3.0, 0.2, 5) == noisy_oracle(3.0, 0.2, 5)
    assert math.isclose(noisy_oracle(3.0, 1e-15, 1), 3.0, rel_tol=1e-14)
    with pytest.raises(ValueError):
        noisy_oracle(1.0, 0.0)


def test_budget_audit():
    rng = np.random.default_rng(23)
    inst = gen.planted_chain(rng, ["graphic", "cographic", "graphic"], [8, 9, 8], [3, 2])
    eps = 0.7
    res = estimate(inst.weighted, eps, inst.certificate, oracle="noisy", seed=1)
    assert res.stats.budget
    for entry in res.stats.budget:
        m, m2, e = entry.size, entry.small_size, entry.eps
        k = int(entry.kind[-1])
        share = {2: 2, 3: 4}[k]
        assert math.isclose(entry.minor_eps, e * RHO * m2 / (share * m), rel_tol=1e-15)
        assert math.isclose(entry.large_eps, e * (m - m2) / m, rel_tol=1e-15)
        assert math.isclose(entry.local_eps, e * m2 / (2 * m), rel_tol=1e-15)
        # the parts add up to no more than the node's own budget
        assert entry.large_eps + entry.local_eps <= e
    assert set(res.stats.large_calls.values()) == {1}
    assert res.stats.max_depth >= 2


def test_one_sum_budget_split():
    rng = np.random.default_rng(24)
    inst = gen.planted_chain(rng, ["graphic", "cographic"], [6, 7], [1])
    res = estimate(inst.weighted, 0.5, inst.certificate)
    (entry,) = res.stats.budget
    assert math.isclose(entry.minor_eps + entry.large_eps, 0.5)
    assert math.isclose(res.value, float(tutte_exact(inst.weighted)), rel_tol=1e-12)


def test_determinism():
    rng = np.random.default_rng(25)
    inst = gen.planted_chain(rng, ["cographic", "graphic"], [9, 9], [3])
    a = estimate(inst.weighted, 0.3, inst.certificate, oracle="noisy", seed=7).value
    b = estimate(inst.weighted, 0.3, inst.certificate, oracle="noisy", seed=7).value
    c = estimate(inst.weighted, 0.3, inst.certificate, oracle="noisy", seed=8).value
    assert a == b != c
    assert estimate(inst.weighted, 0.3, inst.certificate).value == estimate(inst.weighted, 0.3, inst.certificate).value


def test_invalid_accuracy():
    w = WeightedMatroid.uniform(BinaryMatroid.from_graph(K4))
    for eps in (0.0, -1.0, 1.5):
        with pytest.raises(ValueError):
            estimate(w, eps)
    with pytest.raises(AccuracyUnderflow):
        estimate(w, 1e-13)


def test_format_result_keys():
    w = WeightedMatroid.uniform(BinaryMatroid.from_graph(K4))
    text = format_result(estimate(w, 1.0))
    keys = [ln.split(":")[0] for ln in text.splitlines()]
    assert keys == ["estimate", "eps", "oracle", "tree.depth", "tree.leaves", "tree.sums", "stats.max_depth",
                    "stats.nodes", "stats.oracle_calls", "stats.base_sizes"]
