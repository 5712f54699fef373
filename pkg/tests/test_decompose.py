import numpy as np
import pytest

from isingmat import generators as gen
from isingmat.decompose import (CertLeaf, CertSum, DecompositionError, Leaf, SumNode, certificate_ground, decompose,
                                find_1_separation, find_2sum, find_3sum, is_cographic, is_graphic, is_r10,
                                to_certificate, tree_minor, validate_tree)
from isingmat.matroid import BinaryMatroid, check_sum_conditions, delta_sum, fixed_matroids

FM = fixed_matroids()
K4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
PETERSEN = [(i, (i + 1) % 5) for i in range(5)] + [(i, i + 5) for i in range(5)] + \
           [(5 + i, 5 + (i + 2) % 5) for i in range(5)]


def triangle(labels):
    return BinaryMatroid.from_graph([(0, 1), (1, 2), (0, 2)], labels)


def test_one_separation():
    m = delta_sum(triangle(["a", "b", "c"]), triangle(["d", "e", "f"]))
    a, b = find_1_separation(m)
    assert {a, b} == {frozenset("abc"), frozenset("def")}
    assert find_1_separation(triangle(["a", "b", "c"])) is None


def test_one_separation_block_matrix():
    m = BinaryMatroid.from_lists([[1, 1, 0, 0, 0], [0, 0, 1, 1, 0], [0, 0, 0, 1, 1]], list("abcde"))
    a, b = find_1_separation(m)
    assert m.rank(a) + m.rank(b) == m.rank()


def test_find_2sum_of_triangles():
    m = delta_sum(triangle(["a", "b", "p"]), triangle(["p", "c", "d"]))
    found = find_2sum(m)
    assert found is not None
    m1, m2, p = found
    check_sum_conditions(m1, m2, strict=True)
    assert delta_sum(m1, m2).same_cycle_space(m)


def test_no_sums_in_r10():
    assert find_2sum(FM.R10) is None
    assert find_3sum(FM.R10) is None


def test_find_3sum_of_planted_pieces():
    rng = np.random.default_rng(11)
    inst = gen.planted_chain(rng, ["graphic", "cographic"], [7, 7], [3])
    m = inst.weighted.matroid
    found = find_3sum(m)
    assert found is not None
    m1, m2, t = found
    check_sum_conditions(m1, m2, strict=True)
    assert delta_sum(m1, m2).same_cycle_space(m)


def test_graphic_recognition():
    m = BinaryMatroid.from_graph(K4)
    g = is_graphic(m)
    assert g is not None and g.num_vertices == 4
    assert g.cycle_matroid(m.labels).same_cycle_space(m)
    assert is_cographic(m.dual()) is not None
    assert is_graphic(FM.R10) is None and is_cographic(FM.R10) is None


def test_random_multigraphs_are_graphic():
    rng = np.random.default_rng(12)
    for _ in range(200):
        nv = int(rng.integers(1, 7))
        ne = int(rng.integers(0, 13))
        edges = [tuple(int(x) for x in rng.integers(0, nv, size=2)) for _ in range(ne)]
        m = BinaryMatroid.from_graph(edges, num_vertices=nv)
        g = is_graphic(m)
        assert g is not None
        assert g.cycle_matroid(m.labels).same_cycle_space(m)


def test_r10_recognition():
    assert is_r10(FM.R10)
    perm = list(np.random.default_rng(0).permutation(10))
    shuffled = FM.R10.reordered([FM.R10.labels[i] for i in perm])
    assert is_r10(shuffled)
    assert not is_r10(BinaryMatroid.from_graph(PETERSEN))


def test_decompose_graphic_is_single_leaf():
    tree = decompose(BinaryMatroid.from_graph(K4))
    assert isinstance(tree, Leaf) and tree.tag == "graphic"
    tree = decompose(FM.R10)
    assert isinstance(tree, Leaf) and tree.tag == "r10"


def test_decompose_with_certificate():
    rng = np.random.default_rng(13)
    inst = gen.planted_chain(rng, ["graphic", "cographic"], [8, 7], [2])
    tree = decompose(inst.weighted.matroid, inst.certificate)
    assert isinstance(tree, SumNode) and tree.k == 2
    assert {leaf.tag for leaf in tree.leaves()} == {"graphic", "cographic"}
    validate_tree(tree)
    again = decompose(inst.weighted.matroid, to_certificate(tree))
    assert to_certificate(again) == to_certificate(tree)


def test_searched_trees_reconstruct():
    rng = np.random.default_rng(14)
    for kinds, sizes, ks in ((["graphic", "cographic"], [8, 7], [2]), (["cographic", "graphic"], [9, 8], [3]),
                             (["cographic", "cographic"], [6, 6], [1])):
        inst = gen.planted_chain(rng, kinds, sizes, ks)
        tree = decompose(inst.weighted.matroid)
        validate_tree(tree)
        assert tree.matroid.same_cycle_space(inst.weighted.matroid)


def test_wrong_certificate_is_rejected():
    rng = np.random.default_rng(15)
    inst = gen.planted_chain(rng, ["graphic", "cographic"], [9, 8], [3])
    cert = inst.certificate
    left, right = cert.left, cert.right
    stray = left.labels[0]
    bad_shared = (stray,) + cert.shared[1:]
    bad = CertSum(3, bad_shared, left, right)
    with pytest.raises(DecompositionError) as info:
        decompose(inst.weighted.matroid, bad)
    assert info.value.path == "root"
    wrong_tag = CertSum(3, cert.shared, CertLeaf("r10", left.labels), right)
    with pytest.raises(DecompositionError, match="root.L"):
        decompose(inst.weighted.matroid, wrong_tag)


def test_certificate_ground():
    cert = CertSum(2, ("p",), CertLeaf("graphic", ("a", "b", "p")), CertLeaf("graphic", ("p", "c", "d")))
    assert certificate_ground(cert) == frozenset("abcd")


def test_tree_minor_matches_matroid_minor():
    rng = np.random.default_rng(16)
    inst = gen.planted_chain(rng, ["graphic", "cographic", "graphic"], [8, 9, 7], [3, 2])
    tree = decompose(inst.weighted.matroid, inst.certificate)
    labels = list(inst.weighted.labels)
    for _ in range(10):
        pick = rng.choice(len(labels), size=3, replace=False)
        con, dele = [labels[pick[0]]], [labels[pick[1]], labels[pick[2]]]
        minor = tree_minor(tree, contract=con, delete=dele)
        expected = inst.weighted.matroid.contract(con).delete(dele)
        assert minor.matroid.same_cycle_space(expected)


def test_k5_three_summed_with_k33_bonds(data_dir):
    from isingmat.io import read_instance
    m = read_instance(data_dir / "planted_3sum.txt").matroid
    assert is_graphic(m, limit=m.size) is None
    assert is_cographic(m, limit=m.size) is None
    tree = decompose(m)
    assert isinstance(tree, SumNode) and tree.k == 3
    assert len(tree.shared) == 3
    assert {tree.left.size, tree.right.size} == {10, 9}
    assert {leaf.tag for leaf in tree.leaves()} == {"graphic", "cographic"}
    validate_tree(tree)
