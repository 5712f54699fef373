import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isingmat import generators as gen
from isingmat.matroid import BinaryMatroid, GroundSetTooLarge, WeightedMatroid, fixed_matroids
from isingmat.tutte import (classify_subsets, dual_evaluate, exhaustive_limit, minor_vector_2, minor_vector_3,
                            potts_crosscheck, potts_spin_sum, tutte_by_recursion, tutte_exact, zhat_vector)

FM = fixed_matroids()
T = ["p1", "p2", "p3"]
K4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def two_circuit(a="a", b="p"):
    return BinaryMatroid.from_lists([[1, 1]], [a, b])


def test_small_values():
    empty = WeightedMatroid(BinaryMatroid.from_lists([], []), ())
    assert tutte_exact(empty) == 1
    single = WeightedMatroid(BinaryMatroid.from_lists([[1]], ["x"]), (F(3),))
    assert tutte_exact(single) == F(5, 2)
    assert tutte_exact(WeightedMatroid.uniform(two_circuit())) == F(5, 2)


def test_frozen_values():
    assert tutte_exact(WeightedMatroid.uniform(BinaryMatroid.from_graph(K4))) == F(27, 2)
    assert tutte_exact(WeightedMatroid.uniform(BinaryMatroid.from_graph(K4), F(1, 2))) == F(2025, 512)
    assert tutte_exact(WeightedMatroid.uniform(FM.R10)) == F(2225, 32)
    assert tutte_exact(WeightedMatroid.uniform(FM.I3)) == 19


def test_float_mode_agrees():
    w = WeightedMatroid.uniform(FM.R10, 0.75)
    exact = tutte_exact(WeightedMatroid.uniform(FM.R10, F(3, 4)))
    assert math.isclose(tutte_exact(w), float(exact), rel_tol=1e-12)


def test_recursion_agrees_with_sweep(rng):
    for _ in range(40):
        n = int(rng.integers(1, 9))
        w = gen.weighted(rng, gen.random_matroid(rng, n, int(rng.integers(1, n + 1))))
        assert tutte_by_recursion(w) == tutte_exact(w)


def test_size_limit(monkeypatch):
    monkeypatch.setenv("ISINGMAT_EXHAUSTIVE_LIMIT", "5")
    assert exhaustive_limit() == 5
    w = WeightedMatroid.uniform(BinaryMatroid.from_graph(K4))
    with pytest.raises(GroundSetTooLarge):
        tutte_exact(w)


def test_minor_vector_2_example():
    w = WeightedMatroid.uniform(two_circuit("a", "p"))
    assert tuple(minor_vector_2(w, "p")) == (F(3, 2), 2)


def test_minor_vector_3_examples():
    w = WeightedMatroid.uniform(FM.I3, 0)
    assert tuple(minor_vector_3(w, T)) == (1, 1, 1, 1, 1)
    assert tuple(zhat_vector(w, T)) == (0, 0, 0, 0, 1)
    w = WeightedMatroid.from_mapping(FM.I3, {"p1": 1, "p2": 2, "p3": F(1, 3), "e1": 0, "e2": 5, "e3": F(7, 2)})
    assert tuple(minor_vector_3(w, T)) == (F(77, 8), 14, F(33, 2), F(63, 4), 27)
    assert tuple(zhat_vector(w, T)) == (F(35, 8), 0, F(5, 2), F(7, 4), 1)


def test_minor_methods_agree(rng):
    for _ in range(30):
        w = gen.weighted(rng, gen.planted_triangle(rng, int(rng.integers(0, 7)), "a"))
        z = minor_vector_3(w, T)
        assert z == minor_vector_3(w, T, method="minors")
        assert z[1] + z[2] + z[3] == 2 * z[0] + z[4]
        p = gen.weighted(rng, gen.planted_element(rng, int(rng.integers(0, 7)), "a"))
        assert minor_vector_2(p, "p") == minor_vector_2(p, "p", method="minors")


def test_minor_vector_rejects_bad_shared_sets():
    w = WeightedMatroid.uniform(BinaryMatroid.from_lists([[0, 1]], ["p", "a"]))
    with pytest.raises(ValueError):
        minor_vector_2(w, "p")
    w = WeightedMatroid.uniform(BinaryMatroid.from_lists([[1, 0, 0], [0, 1, 0], [0, 0, 1]], T))
    with pytest.raises(ValueError):
        minor_vector_3(w, T)


def test_classification_never_single_excess(rng):
    for _ in range(30):
        m = gen.planted_triangle(rng, int(rng.integers(0, 7)), "a")
        rest = [x for x in m.labels if x not in T]
        tab = m.reordered(rest + T).subset_ranks.reshape(8, -1).astype(np.int64)
        exc = tab - tab[0]
        single = (exc[1] + exc[2] + exc[4]) == 1
        assert not single.any()
        cls = classify_subsets(tab)
        assert set(np.unique(cls)) <= {0, 1, 2, 3, 4}


def test_potts_examples():
    lhs, rhs = potts_crosscheck([(0, 1)], [1])
    assert potts_spin_sum([(0, 1)], [1], 2) == 6
    assert lhs == rhs == F(3, 2)
    assert potts_crosscheck([], [], 3) == (1, 1)
    tri = potts_crosscheck([(0, 1), (1, 2), (0, 2)])
    assert tri[0] == tri[1] == F(7, 2)


def test_dual_evaluate_examples(rng):
    free = WeightedMatroid(BinaryMatroid.from_lists([[1]], ["x"]), (F(2),))
    assert dual_evaluate(free) == 2
    empty = WeightedMatroid(BinaryMatroid.from_lists([], []), ())
    assert dual_evaluate(empty) == 1
    w = gen.weighted(rng, gen.random_matroid(rng, 8, 4))
    assert dual_evaluate(w, check=False) == tutte_exact(w)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_z0_z1_inequality(seed):
    rng = np.random.default_rng(seed)
    w = gen.weighted(rng, gen.planted_element(rng, int(rng.integers(0, 7)), "a"))
    z0, z1 = minor_vector_2(w, "p")
    assert z0 <= z1 < 2 * z0
