from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgraph import monoid as mo
from kgraph.monoid import Fraction as Frac

heis = mo.Heisenberg()
n2 = mo.GridNk(2)

h_elem = st.tuples(*(st.integers(0, 6),) * 3)
n2_elem = st.tuples(st.integers(0, 8), st.integers(0, 8))


def test_heisenberg_product():
    assert mo.multiply(heis, (1, 0, 0), (0, 1, 0)) == (1, 1, 1)
    assert mo.multiply(heis, (0, 1, 0), (1, 0, 0)) == (1, 1, 0)


def test_grid_product_and_unit():
    assert mo.multiply(n2, (1, 2), (3, 0)) == (4, 2)
    for m, a in ((n2, (3, 1)), (heis, (2, 5, 1)), (mo.FreeWords(2), (0, 1, 1))):
        assert mo.multiply(m, m.unit, a) == a
        assert mo.multiply(m, a, m.unit) == a


def test_heisenberg_common_multiple_example():
    y1, y2 = mo.common_multiple(heis, (1, 0, 0), (0, 1, 0))
    assert (y1, y2) == ((0, 1, 0), (1, 0, 1))
    assert mo.multiply(heis, (1, 0, 0), y1) == mo.multiply(heis, (0, 1, 0), y2) == (1, 1, 1)


def test_grid_common_multiple_example():
    assert mo.common_multiple(n2, (2, 0), (0, 3)) == ((0, 3), (2, 0))


def test_free_monoid_has_no_common_multiple():
    f = mo.FreeWords(2)
    assert mo.common_multiple(f, (0,), (1,)) is None
    assert mo.common_multiple(f, (0,), (0, 1)) == ((1,), ())


def test_bad_elements_rejected():
    with pytest.raises(mo.MonoidError):
        heis.multiply((1, -1, 0), (0, 0, 0))
    with pytest.raises(mo.MonoidError):
        n2.multiply((1, 2, 3), (0, 0))


@settings(max_examples=200, deadline=None)
@given(h_elem, h_elem)
def test_heisenberg_common_multiple_reverifies(x1, x2):
    y1, y2 = mo.common_multiple(heis, x1, x2)
    assert heis.multiply(x1, y1) == heis.multiply(x2, y2)


def test_check_ore_verdicts():
    assert mo.check_ore(n2).is_ore
    assert mo.check_ore(heis, 200, 7).is_ore
    rep = mo.check_ore(mo.FreeWords(2))
    assert rep.o1.status == mo.FAILS
    assert rep.o1.witness == ((0,), (1,))
    assert rep.to_dict(mo.FreeWords(2))["o1"]["witness"] == ["a1", "a2"]
    assert mo.check_ore(mo.FreeWords(1)).is_ore


def _elements(m, rng, count):
    return [m.random_element(rng) for _ in range(count)]


@pytest.mark.parametrize("m", [n2, heis], ids=["N2", "heisenberg"])
def test_fraction_eq_is_an_equivalence(m):
    rng = random.Random(3)
    # build fractions that are often equal: (p t, q t) for shared (p, q)
    base = [Frac(m.random_element(rng), m.random_element(rng)) for _ in range(20)]
    pool = []
    for f in base:
        for _ in range(4):
            t = m.random_element(rng, 2)
            pool.append(Frac(m.multiply(f.numerator, t), m.multiply(f.denominator, t)))
    for f in pool:
        assert mo.fraction_eq(m, f, f)
    for _ in range(10_000):
        a, b, c = rng.choice(pool), rng.choice(pool), rng.choice(pool)
        ab = mo.fraction_eq(m, a, b)
        assert ab == mo.fraction_eq(m, b, a)
        if ab and mo.fraction_eq(m, b, c):
            assert mo.fraction_eq(m, a, c)


@pytest.mark.parametrize("m", [n2, heis], ids=["N2", "heisenberg"])
def test_fraction_group_laws(m):
    rng = random.Random(11)
    one = mo.fraction_unit(m)
    for _ in range(500):
        a, b, c = (Frac(m.random_element(rng), m.random_element(rng)) for _ in range(3))
        left = mo.fraction_mul(m, mo.fraction_mul(m, a, b), c)
        right = mo.fraction_mul(m, a, mo.fraction_mul(m, b, c))
        assert mo.fraction_eq(m, left, right)
        assert mo.fraction_eq(m, mo.fraction_mul(m, a, mo.fraction_inv(a)), one)
        assert mo.fraction_eq(m, mo.fraction_mul(m, one, a), a)


def test_fraction_examples():
    g1 = mo.GridNk(1)
    prod = mo.fraction_mul(g1, Frac((3,), (1,)), Frac((1,), (2,)))
    assert mo.fraction_eq(g1, prod, Frac((4,), (3,)))
    assert mo.fraction_eq(g1, prod, Frac((1,), (0,)))
    hp = mo.fraction_mul(heis, Frac((1, 0, 0), heis.unit), Frac((0, 1, 0), heis.unit))
    assert mo.fraction_eq(heis, hp, Frac((1, 1, 1), heis.unit))
    assert not mo.fraction_eq(heis, hp, Frac((1, 1, 0), heis.unit))


def test_cofinal_chain_examples():
    ch = mo.cofinal_chain(n2, [(1, 0), (0, 1), (2, 2)], 3)
    assert ch.chain == ((0, 0), (1, 0), (1, 1), (2, 2))
    assert ch.verify(n2)
    rng = random.Random(5)
    hs = _elements(heis, rng, 5)
    ch = mo.cofinal_chain(heis, hs, 5)
    assert len(ch.chain) == 6 and ch.verify(heis)
    for e, r, j in ch.certificates:
        assert heis.multiply(e, r) == ch.chain[j]
    assert mo.cofinal_chain(heis, [], 0).chain == (heis.unit,)


# -- finite tables ------------------------------------------------------------

Z3_TEXT = """
# cyclic group of order 3
unit 0
3
0 1 2
1 2 0
2 0 1
"""

# {1, a} with a·a = a, plus a left-zero-like element: not Ore
LEFT_ZERO_TEXT = """
unit 0
3
0 1 2
1 1 1
2 2 2
"""


def test_table_parsing_and_validation():
    m = mo.parse_table(Z3_TEXT)
    assert m.size == 3 and m.is_cancellative()
    assert mo.check_ore(m).is_ore
    with pytest.raises(mo.MonoidError):
        mo.parse_table("unit 0\n2\n0 1\n1 1\n1 0\n")
    with pytest.raises(mo.MonoidError):
        mo.parse_table("3\n0 1 2\n1 2 0\n2 0 1\n")
    with pytest.raises(mo.MonoidError, match="associative"):
        mo.parse_table("unit 0\n3\n0 1 2\n1 2 2\n2 1 1\n")


def test_table_left_zeros_fail_o1():
    m = mo.parse_table(LEFT_ZERO_TEXT)
    rep = mo.check_ore(m)
    assert rep.o1.status == mo.FAILS
    x1, x2 = rep.o1.witness
    assert all(m.multiply(x1, y1) != m.multiply(x2, y2) for y1 in range(3) for y2 in range(3))


def _all_monoid_tables(n):
    """All associative tables on 0..n-1 with unit 0 (small n only)."""
    others = range(1, n)
    cells = [(a, b) for a in others for b in others]
    for vals in itertools.product(range(n), repeat=len(cells)):
        t = [[0] * n for _ in range(n)]
        for i in range(n):
            t[0][i] = t[i][0] = i
        for (a, b), v in zip(cells, vals):
            t[a][b] = v
        if all(t[t[a][b]][c] == t[a][t[b][c]] for a in range(n) for b in range(n) for c in range(n)):
            yield tuple(map(tuple, t))


def test_table_check_ore_matches_double_loop():
    count = 0
    for table in _all_monoid_tables(3):
        m = mo.FiniteTable(table, 0)
        els = range(3)
        o1 = all(any(table[x1][y1] == table[x2][y2] for y1 in els for y2 in els)
                 for x1 in els for x2 in els)
        o2 = all(any(table[y1][z] == table[y2][z] for z in els)
                 for x in els for y1 in els for y2 in els if table[x][y1] == table[x][y2])
        rep = mo.check_ore(m)
        assert (rep.o1.status == mo.HOLDS) == o1
        assert (rep.o2.status == mo.HOLDS) == o2
        count += 1
    assert count > 5


def test_table_fraction_eq_definitional():
    m = mo.parse_table(Z3_TEXT)
    assert mo.fraction_eq(m, Frac(1, 0), Frac(2, 1))
    assert not mo.fraction_eq(m, Frac(1, 0), Frac(2, 0))
