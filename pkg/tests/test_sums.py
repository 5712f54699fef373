from fractions import Fraction as F

import numpy as np

from isingmat import generators as gen
from isingmat.matroid import BinaryMatroid, WeightedMatroid, fixed_matroids
from isingmat.sums import (C3, D2, D3, V3, correction, correction_data, correction_upper_bound, excess_rank,
                           expected_corrections, ineqs_violations, matrix_identities, verify_2sum_split,
                           verify_3sum_split, zhat_identity)
from isingmat.tutte import minor_vector_3, zhat_vector

FM = fixed_matroids()
T = ["p1", "p2", "p3"]


def two_circuit(a, b):
    return BinaryMatroid.from_lists([[1, 1]], [a, b])


def test_printed_matrices():
    assert C3[1, 2] == 1
    assert D3[0].tolist() == [4, -1, -1, -1]
    assert D2.tolist() == [[2, -1], [-1, 1]]
    rep = matrix_identities()
    assert (rep.residual3, rep.residual2, rep.rank_c3) == (0, 0, 4)


def test_excess_rank_examples():
    assert excess_rank(FM.I3, [], []) == 0
    assert excess_rank(FM.I3, [], ["p1"]) == 1
    assert excess_rank(two_circuit("a", "p"), ["a"], ["p"]) == 0


def test_correction_direct_sum_is_zero():
    m1 = BinaryMatroid.from_lists([[1, 1]], ["a", "b"])
    m2 = BinaryMatroid.from_lists([[1, 0], [0, 1]], ["c", "d"])
    assert correction(m1, m2, ["a", "b"], ["c", "d"]) == 0
    assert (correction_data(m1, m2).c == 0).all()


def test_correction_one_shared_element():
    m1, m2 = two_circuit("a", "p"), two_circuit("p", "b")
    data = correction_data(m1, m2)
    # A = {a}, B = {b}: both excesses vanish, so the sum loses one rank
    assert data.c[1, 1] == -1
    assert data.c[0, 0] == 0
    assert np.array_equal(data.c, expected_corrections(data))


def test_correction_tables_random(rng):
    for _ in range(20):
        for planted in (gen.planted_element, gen.planted_triangle):
            m1 = planted(rng, int(rng.integers(0, 6)), "a")
            m2 = planted(rng, int(rng.integers(0, 6)), "b")
            data = correction_data(m1, m2)
            assert np.array_equal(data.c, expected_corrections(data))
            assert (data.c <= correction_upper_bound(data, m1)).all()


def test_2sum_worked_example():
    w1 = WeightedMatroid.uniform(two_circuit("a", "p"))
    w2 = WeightedMatroid.uniform(two_circuit("p", "b"))
    assert verify_2sum_split(w1, w2, "p") == (F(5, 2), F(5, 2))


def test_splits_with_zero_weights(rng):
    m1 = gen.planted_element(rng, 4, "a")
    m2 = gen.planted_element(rng, 3, "b")
    lhs, rhs = verify_2sum_split(WeightedMatroid.uniform(m1, 0), WeightedMatroid.uniform(m2, 0), "p")
    assert lhs == rhs == 1
    t1 = gen.planted_triangle(rng, 4, "a")
    t2 = gen.planted_triangle(rng, 4, "b")
    lhs, rhs = verify_3sum_split(WeightedMatroid.uniform(t1, 0), WeightedMatroid.uniform(t2, 0), T)
    assert lhs == rhs == 1


def test_3sum_of_two_i3():
    a = FM.I3.relabel({"e1": "a1", "e2": "a2", "e3": "a3"})
    b = FM.I3.relabel({"e1": "b1", "e2": "b2", "e3": "b3"})
    lhs, rhs = verify_3sum_split(WeightedMatroid.uniform(a), WeightedMatroid.uniform(b), T)
    assert lhs == rhs


def test_v_times_zhat(rng):
    for _ in range(100):
        w = gen.weighted(rng, gen.planted_triangle(rng, int(rng.integers(0, 6)), "a"))
        z = minor_vector_3(w, T)
        zh = zhat_vector(w, T)
        assert zhat_identity(tuple(zh), tuple(z)[:4], V3)
        assert zh.z4 > 0


def test_ineqs_flags_bad_vectors():
    assert ineqs_violations((F(1), F(1), F(1), F(1), F(1))) == []
    assert "i" in ineqs_violations((0, 1, 1, 1, 1))
    assert "iv" in ineqs_violations((F(1), F(2), F(2), F(2), F(3)))
