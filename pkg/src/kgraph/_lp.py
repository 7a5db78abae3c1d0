"""A small exact simplex method over the rationals.

Only what the measure computations need: minimise a linear objective over
``{x >= 0 : A x = b}``. Bland's rule keeps it terminating and deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class Infeasible(Exception):
    pass


class Unbounded(Exception):
    pass


def _pivot(t: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    inv = 1 / t[r][c]
    t[r] = [x * inv for x in t[r]]
    for i, row in enumerate(t):
        if i != r and row[c] != 0:
            f = row[c]
            t[i] = [x - f * y for x, y in zip(row, t[r])]
    basis[r] = c


def _simplex(t: list[list[Fraction]], basis: list[int], cost: list[Fraction], allowed: int) -> None:
    """Minimise ``cost`` on tableau ``t`` (last column = rhs), columns < allowed only."""
    m = len(t)
    while True:
        # reduced costs
        entering = None
        for j in range(allowed):
            if j in basis:
                continue
            rc = cost[j] - sum(cost[basis[i]] * t[i][j] for i in range(m))
            if rc < 0:
                entering = j
                break
        if entering is None:
            return
        best = None
        for i in range(m):
            a = t[i][entering]
            if a > 0:
                ratio = t[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            raise Unbounded()
        _pivot(t, basis, best[1], entering)


def minimize(
    a: Sequence[Sequence], b: Sequence, c: Sequence
) -> tuple[Fraction, list[Fraction]]:
    """Return (optimum, optimal basic solution). Raises Infeasible / Unbounded."""
    m = len(a)
    n = len(c)
    rows = []
    for i in range(m):
        row = [Fraction(x) for x in a[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        rows.append(row + [Fraction(int(i == j)) for j in range(m)] + [rhs])
    basis = [n + i for i in range(m)]
    # phase one: drive the artificials out
    phase1 = [Fraction(0)] * n + [Fraction(1)] * m
    _simplex(rows, basis, phase1, n + m)
    if sum(rows[i][-1] for i in range(m) if basis[i] >= n) != 0:
        raise Infeasible()
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if rows[i][j] != 0), None)
            if col is not None:
                _pivot(rows, basis, i, col)
    # rows whose artificial could not be removed are redundant
    keep = [i for i in range(m) if basis[i] < n]
    rows = [rows[i] for i in keep]
    basis = [basis[i] for i in keep]
    cost = [Fraction(x) for x in c] + [Fraction(0)] * m
    _simplex(rows, basis, cost, n)
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        x[j] = rows[i][-1]
    return sum(ci * xi for ci, xi in zip(cost, x)), x


def lexmin(a: Sequence[Sequence], b: Sequence, n: int) -> list[Fraction]:
    """Lexicographically least point of the bounded polytope {x >= 0 : A x = b}."""
    a = [list(r) for r in a]
    b = list(b)
    x: list[Fraction] = []
    for i in range(n):
        c = [Fraction(int(j == i)) for j in range(n)]
        val, x = minimize(a, b, c)
        a.append([int(j == i) for j in range(n)])
        b.append(val)
    return x
