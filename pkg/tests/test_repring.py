from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

import pytest

from kgraph import _linalg, ksystem as ks, repring as rr
from kgraph.measures import Cocycle, is_invariant


def test_weyl_dimension_examples():
    assert rr.weyl_dim(2, [5]) == 6
    assert [rr.weyl_dim(3, lam) for lam in ((0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (3, 0))] == [1, 3, 3, 6, 8, 10]
    assert rr.weyl_dim(4, (1, 1, 0)) == 6
    assert rr.weyl_dim(4, (2, 1, 0)) == 20


def test_normalize():
    assert rr.normalize(4, [2]) == (2, 0, 0)
    assert rr.normalize(3, [1, 1, 0, 0]) == (1, 1)
    with pytest.raises(ValueError):
        rr.normalize(3, [1, 2])
    with pytest.raises(ValueError):
        rr.normalize(3, [1, 1, 1])


def test_pieri_examples():
    assert rr.pieri_exterior(3, (0, 0), 1) == [(1, 0)]
    assert rr.pieri_exterior(3, (1, 0), 1) == [(1, 1), (2, 0)]
    # a full column of length 3 is removed
    assert rr.pieri_exterior(3, (1, 1), 1) == [(0, 0), (2, 1)]
    assert rr.pieri_exterior(3, (1, 0), 2) == [(0, 0), (2, 1)]
    with pytest.raises(ValueError):
        rr.pieri_exterior(3, (1, 0), 3)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_pieri_dimension_identity(n):
    for lam in rr.window(n, 3):
        for i in range(1, n):
            total = sum(rr.weyl_dim(n, nu) for nu in rr.pieri_exterior(n, lam, i))
            assert total == comb(n, i) * rr.weyl_dim(n, lam)


@pytest.mark.parametrize("n", [3, 4])
def test_fusion_matrices_commute_away_from_the_edge(n):
    level = 6
    support = rr.window(n, level)
    mats = [rr.fusion_matrix(n, i, support) for i in range(1, n)]
    inner = [t for t, lam in enumerate(support) if lam[0] <= level - 2]
    for a, b in itertools.combinations(mats, 2):
        ab = _linalg.matmul(a, b)
        ba = _linalg.matmul(b, a)
        for x in inner:
            for y in inner:
                assert ab[x][y] == ba[x][y]


def test_n2_is_a_path_graph():
    sys, interior = rr.dr_ksystem(2, 4)
    assert sys.rank == 1
    assert sys.vertices == ("0", "1", "2", "3", "4")
    b = sys.adjacency(1)
    for x in range(5):
        for y in range(5):
            assert b[x][y] == int(abs(x - y) == 1)
    assert interior == ["0", "1", "2"]
    assert ks.validate(sys).ok


@pytest.mark.parametrize("level", [2, 3, 5, 8])
def test_n3_windows_validate(level):
    sys, interior = rr.dr_ksystem(3, level)
    assert len(sys.vertices) == (level + 1) * (level + 2) // 2
    assert len(interior) == (level - 1) * level // 2
    rep = ks.validate(sys)
    assert rep.ok
    b1, b2 = sys.adjacency_matrices()
    assert b1 == _linalg.transpose(b2)


def test_quantum_dimensions_invariant_at_interior():
    for n, level in ((2, 6), (3, 6), (4, 4)):
        sys, interior = rr.dr_ksystem(n, level)
        lam, c = rr.quantum_dimension_measure(n, sys)
        for ci, b in zip(c, sys.adjacency_matrices()):
            got = _linalg.matvec(b, lam)
            for v in interior:
                t = sys.vertex_index[v]
                assert ci * got[t] == lam[t]


def test_quantum_dimensions_fail_at_the_window_edge():
    sys, _ = rr.dr_ksystem(3, 5)
    lam, c = rr.quantum_dimension_measure(3, sys)
    assert c == [Fraction(1, 3), Fraction(1, 3)]
    assert not is_invariant(sys, Cocycle.of(c), lam)


def test_bad_arguments():
    with pytest.raises(ValueError):
        rr.dr_ksystem(1, 3)
    with pytest.raises(ValueError):
        rr.dr_ksystem(3, 1)
