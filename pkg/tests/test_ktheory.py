from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from kgraph import _linalg, generators, ktheory as kt
from kgraph.ksystem import build
from kgraph.ktheory import AbelianGroupPresentation as G
from kgraph.ktheory import LaurentPoly as L

int_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def test_smith_example():
    u, d, v = kt.smith_normal_form([[2, 4], [6, 8]])
    assert d == [[2, 0], [0, 4]]
    assert _linalg.matmul(_linalg.matmul(u, [[2, 4], [6, 8]]), v) == d


@settings(max_examples=200, deadline=None)
@given(int_matrices)
def test_smith_properties_and_sympy_agreement(m):
    u, d, v = kt.smith_normal_form(m)
    assert _linalg.matmul(_linalg.matmul(u, m), v) == d
    assert kt.is_unimodular(u) and kt.is_unimodular(v)
    diag = kt.diagonal(d)
    for i, row in enumerate(d):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    assert all(x >= 0 for x in diag)
    nonzero = [x for x in diag if x]
    assert diag[:len(nonzero)] == nonzero
    for a, b in zip(nonzero, nonzero[1:]):
        assert b % a == 0
    want = [abs(int(x)) for x in invariant_factors(Matrix(m), domain=ZZ)]
    assert sorted(nonzero) == sorted(x for x in want if x)


@settings(max_examples=100, deadline=None)
@given(int_matrices, st.randoms())
def test_smith_invariant_under_permutation(m, rnd):
    rows = list(range(len(m)))
    cols = list(range(len(m[0])))
    rnd.shuffle(rows)
    rnd.shuffle(cols)
    pm = [[m[i][j] for j in cols] for i in rows]
    assert kt.diagonal(kt.smith_normal_form(pm)[1]) == kt.diagonal(kt.smith_normal_form(m)[1])


def test_group_formatting():
    assert G.from_invariants(0, [2, 3]).format() == "Z/6"
    assert G.from_invariants(1, [4, 6]).format() == "Z ⊕ Z/2 ⊕ Z/12"
    assert G(0).format() == "0" and G(0).is_trivial
    assert G.from_invariants(0, [0, 1]).format() == "Z"
    with pytest.raises(ValueError):
        G(0, (4, 6))


def test_rank1_examples(o2, single_loop, two_vertex):
    for n in (2, 3, 4):
        k0, k1 = kt.k_rank1(generators.cuntz(n))
        assert k0 == (G(0) if n == 2 else G(0, (n - 1,)))
        assert k1 == G(0)
    assert kt.k_rank1(single_loop) == (G(1), G(1))
    assert kt.k_rank1(two_vertex) == (G(1), G(1))
    sink = build(1, ["1", "2"], {1: [("a", "1", "2"), ("l", "2", "2"), ("m", "2", "2"), ("n", "2", "2")]})
    assert kt.k_groups(sink).k0.format() == "Z/2"


def test_rank2_examples(flip22, transpose22):
    for sys in (flip22, transpose22):
        g = kt.k_groups(sys)
        assert g.k0.is_trivial and g.k1.is_trivial and g.method == "Koszul homology"
    # one vertex, m and n loops: K0 = K1 = Z/gcd(m - 1, n - 1)
    for m, n in ((3, 3), (3, 5), (4, 7), (2, 5)):
        g = kt.k_rank2_from_matrices([[m]], [[n]])
        want = G.from_invariants(0, [math.gcd(m - 1, n - 1)])
        assert g.k0 == want and g.k1 == want
    g = kt.k_groups(generators.grid(1, 1))
    assert (g.k0, g.k1) == (G(2), G(2))


def test_rank3_refused():
    sys = build(3, ["v"], {1: [("a", "v", "v")], 2: [("b", "v", "v")], 3: [("c", "v", "v")]})
    with pytest.raises(kt.KTheoryError):
        kt.k_groups(sys)


def test_noncommuting_refused():
    with pytest.raises(kt.KTheoryError):
        kt.k_rank2_from_matrices([[0, 1], [0, 0]], [[0, 0], [1, 0]])


def _tensor(a: G, b: G) -> G:
    parts = [0] * (a.free_rank * b.free_rank)
    parts += list(b.torsion) * a.free_rank + list(a.torsion) * b.free_rank
    parts += [math.gcd(x, y) for x in a.torsion for y in b.torsion]
    return G.from_invariants(0, parts)


def _tor(a: G, b: G) -> G:
    return G.from_invariants(0, [math.gcd(x, y) for x in a.torsion for y in b.torsion])


def _one_graph_groups(a):
    sys = generators.from_matrix(a, [str(i) for i in range(len(a))])
    return kt.k_rank1(sys)


def _kron_with_identity(a, size, left):
    n = len(a)
    out = [[0] * (n * size) for _ in range(n * size)]
    for x, xx in itertools.product(range(n), repeat=2):
        for y in range(size):
            if left:
                out[x * size + y][xx * size + y] = a[x][xx]
            else:
                out[y * n + x][y * n + xx] = a[x][xx]
    return out


small_square = st.integers(1, 3).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 3), min_size=n, max_size=n), min_size=n, max_size=n)
)


@settings(max_examples=60, deadline=None)
@given(small_square, small_square)
def test_koszul_matches_kunneth_for_products(a, c):
    b1 = _kron_with_identity(a, len(c), left=True)
    b2 = _kron_with_identity(c, len(a), left=False)
    assert _linalg.matmul(b1, b2) == _linalg.matmul(b2, b1)
    a0, a1 = _one_graph_groups(a)
    c0, c1 = _one_graph_groups(c)
    g = kt.k_rank2_from_matrices(b1, b2)
    assert g.k0 == _tensor(a0, c0) + _tensor(a1, c1)
    assert g.k1 == _tensor(a0, c1) + _tensor(a1, c0) + _tor(a0, c0)


@settings(max_examples=60, deadline=None)
@given(small_square)
def test_boundaries_compose_to_zero(a):
    b2 = _linalg.matmul(a, a)
    d1, d2 = kt.koszul_boundaries(a, b2)
    assert not any(any(r) for r in _linalg.matmul(d1, d2))


def test_kernel_basis(o2):
    kb = kt.kernel_basis([[1, -1, 0], [0, 0, 0]], 3)
    assert len(kb) == 3 and len(kb[0]) == 2
    assert not any(any(r) for r in _linalg.matmul([[1, -1, 0]], kb))


def test_unit_fibre_examples(o2, single_loop, two_vertex, flip22):
    f = kt.unit_fibre_k0(o2)
    assert f.transition == ((2,),) and f.eventual_rank == 1
    assert kt.unit_fibre_k0(single_loop).transition == ((1,),)
    f = kt.unit_fibre_k0(two_vertex)
    assert f.transition == ((1, 0), (1, 2)) and f.eventual_rank == 2
    assert kt.unit_fibre_k0(flip22).transition == ((4,),)
    nil = build(1, ["1", "2"], {1: [("a", "1", "2")]})
    assert kt.unit_fibre_k0(nil).eventual_rank == 0


def test_laurent_arithmetic():
    x = L.var(2, 0)
    y = L.var(2, 1)
    xi = L.var(2, 0, -1)
    assert x * xi == L.const(2, 1)
    assert (x + y) * (x - y) == x * x - y * y
    assert (x - x).is_zero()
    assert kt.laurent_eval_ones(x * x - y) == 0
    with pytest.raises(ValueError):
        L.make(2, {(1,): 1})


@pytest.mark.parametrize("p", [
    L.const(1, 7),
    L.var(1, 0, 5),
    L.var(1, 0, -3) + L.const(1, 4),
    L.var(3, 0, 2) * L.var(3, 2, -1) - L.var(3, 1),
    L.make(2, {(-2, 3): 4, (1, -1): -5, (0, 0): 2}),
])
def test_ideal_certificates(p):
    qs = kt.ideal_certificate(p)
    assert len(qs) == p.nvars
    assert kt.verify_certificate(p, qs)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.just(n),
    st.dictionaries(st.tuples(*(st.integers(-3, 3),) * n), st.integers(-5, 5), max_size=6))))
def test_certificates_for_random_polynomials(data):
    n, coeffs = data
    p = L.make(n, coeffs)
    assert kt.verify_certificate(p, kt.ideal_certificate(p))


def test_bad_certificate_rejected():
    p = L.var(1, 0, 2)
    qs = kt.ideal_certificate(p)
    assert not kt.verify_certificate(p, [qs[0] + L.const(1, 1)])


@pytest.mark.parametrize("n", range(2, 9))
def test_dr_quotient_is_integers(n):
    rep = kt.dr_k0_check(n)
    assert rep.confirmed
    assert rep.to_dict()["quotient"] == "Z"


def test_dr_check_range():
    with pytest.raises(ValueError):
        kt.dr_k0_check(9)
    with pytest.raises(ValueError):
        kt.dr_k0_check(1)
