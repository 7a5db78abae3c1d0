"""SU(n) representation combinatorics and truncated fusion systems.

Irreducibles are partitions with at most n - 1 rows. Fusing with the i-th
exterior power of the standard representation adds a vertical strip of
size i (Pieri rule); a full column of length n is then removed.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb
from typing import Sequence

from kgraph.ksystem import KSystem, build

Partition = tuple[int, ...]


def normalize(n: int, lam: Sequence[int]) -> Partition:
    """Pad/validate to exactly n - 1 rows."""
    lam = [int(x) for x in lam]
    while len(lam) > n - 1 and lam[-1] == 0:
        lam.pop()
    if len(lam) > n - 1:
        raise ValueError(f"{tuple(lam)} has more than {n - 1} rows")
    lam += [0] * (n - 1 - len(lam))
    if any(x < 0 for x in lam) or any(a < b for a, b in zip(lam, lam[1:])):
        raise ValueError(f"{tuple(lam)} is not a partition")
    return tuple(lam)


def weyl_dim(n: int, lam: Sequence[int]) -> int:
    full = normalize(n, lam) + (0,)
    num = Fraction(1)
    for i, j in itertools.combinations(range(n), 2):
        num *= Fraction(full[i] - full[j] + j - i, j - i)
    assert num.denominator == 1
    return int(num)


def pieri_exterior(n: int, lam: Sequence[int], i: int) -> list[Partition]:
    if not 1 <= i <= n - 1:
        raise ValueError(f"exterior power index {i} outside 1..{n - 1}")
    full = list(normalize(n, lam)) + [0]
    out = set()
    for rows in itertools.combinations(range(n), i):
        mu = list(full)
        for r in rows:
            mu[r] += 1
        if any(a < b for a, b in zip(mu, mu[1:])):
            continue
        if mu[-1] > 0:
            mu = [x - mu[-1] for x in mu]
        out.add(tuple(mu[:-1]))
    return sorted(out)


def vertex_id(lam: Partition) -> str:
    return ".".join(str(x) for x in lam)


def window(n: int, level: int) -> list[Partition]:
    """Partitions with at most n - 1 rows and first row <= level."""
    out = []
    for lam in itertools.product(range(level + 1), repeat=n - 1):
        if all(a >= b for a, b in zip(lam, lam[1:])):
            out.append(tuple(lam))
    return sorted(out)


def dr_ksystem(n: int, level: int) -> tuple[KSystem, list[str]]:
    """The fusion system on the window lambda_1 <= level, with declared interior.

    Colour-i edges go from source lam to range nu for nu in pieri_exterior(lam, i).
    For colours i < j, the two-step paths with given range and source are
    matched across the two colour orders by sorting on the intermediate vertex.
    """
    if n < 2 or level < 2:
        raise ValueError("need n >= 2 and level >= 2")
    verts = window(n, level)
    vset = set(verts)
    ids = {lam: vertex_id(lam) for lam in verts}
    edges: dict[int, list[tuple[str, str, str]]] = {}
    edge_of: dict[tuple[int, Partition, Partition], str] = {}
    for i in range(1, n):
        rows = []
        for lam in verts:
            for nu in pieri_exterior(n, lam, i):
                if nu in vset:
                    eid = f"e{i}:{ids[lam]}>{ids[nu]}"
                    rows.append((eid, ids[nu], ids[lam]))
                    edge_of[(i, lam, nu)] = eid
        edges[i] = rows
    # out-neighbours by colour: lam -> nu
    succ: dict[tuple[int, Partition], list[Partition]] = {}
    for (i, lam, nu) in edge_of:
        succ.setdefault((i, lam), []).append(nu)
    squares: dict[tuple[int, int], list[tuple[str, str, str, str]]] = {}
    for i, j in itertools.combinations(range(1, n), 2):
        rows = []
        for src in verts:
            # paths (e, f): f of colour j first from src, then e of colour i into rng.
            by_range_ij: dict[Partition, list[Partition]] = {}
            for mid in sorted(succ.get((j, src), [])):
                for rng in succ.get((i, mid), []):
                    by_range_ij.setdefault(rng, []).append(mid)
            by_range_ji: dict[Partition, list[Partition]] = {}
            for mid in sorted(succ.get((i, src), [])):
                for rng in succ.get((j, mid), []):
                    by_range_ji.setdefault(rng, []).append(mid)
            for rng in sorted(set(by_range_ij) | set(by_range_ji)):
                a = sorted(by_range_ij.get(rng, []))
                b = sorted(by_range_ji.get(rng, []))
                for m1, m2 in zip(a, b):
                    e = edge_of[(i, m1, rng)]
                    f = edge_of[(j, src, m1)]
                    f2 = edge_of[(j, m2, rng)]
                    e2 = edge_of[(i, src, m2)]
                    rows.append((e, f, f2, e2))
        squares[(i, j)] = rows
    sys = build(n - 1, [ids[v] for v in verts], edges, squares)
    interior = [ids[v] for v in verts if v[0] <= level - 2]
    return sys, interior


def fusion_matrix(n: int, i: int, support: Sequence[Partition]) -> list[list[int]]:
    """B[nu][lam] = 1 if nu occurs in pieri_exterior(lam, i); rows and columns over ``support``."""
    idx = {lam: t for t, lam in enumerate(support)}
    b = [[0] * len(support) for _ in support]
    for lam in support:
        for nu in pieri_exterior(n, lam, i):
            if nu in idx:
                b[idx[nu]][idx[lam]] = 1
    return b


def quantum_dimension_measure(n: int, sys: KSystem) -> tuple[list[Fraction], list[Fraction]]:
    """(lam, c) with lam(v) = weyl_dim(v) and c_i = 1 / binomial(n, i)."""
    lam = [Fraction(weyl_dim(n, [int(t) for t in v.split(".")])) for v in sys.vertices]
    c = [Fraction(1, comb(n, i)) for i in range(1, n)]
    return lam, c
