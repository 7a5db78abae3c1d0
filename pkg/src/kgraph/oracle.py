"""Brute-force reference implementations for cross-checking.

Nothing here uses the normal-form machinery, the lattice search, the exact
LP or the Smith form of the main modules; the only shared piece is the
:class:`KSystem` container. Paths are handled as equivalence classes of
edge strings under the factorisation squares, which is slow but close to
the definitions.
"""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from typing import Any, Iterable, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from kgraph.ksystem import Edge, KSystem

Word = tuple[str, ...]


# ---------------------------------------------------------------------------
# paths as classes of words


def _words(sys: KSystem, colors: Sequence[int], start: str | None = None) -> list[Word]:
    """All composable edge strings (range end first) with the given colour sequence."""
    into: dict[tuple[int, str], list[str]] = {}
    for e in sys.edges.values():
        into.setdefault((e.color, e.range), []).append(e.id)
    out: list[Word] = []

    def go(prefix: list[str], at: str) -> None:
        if len(prefix) == len(colors):
            out.append(tuple(prefix))
            return
        for eid in into.get((colors[len(prefix)], at), []):
            prefix.append(eid)
            go(prefix, sys.edges[eid].source)
            prefix.pop()

    for v in ([start] if start is not None else sys.vertices):
        go([], v)
    return out


def _square_moves(sys: KSystem) -> dict[tuple[str, str], tuple[str, str]]:
    """Both directions of every factorisation square as string rewrites."""
    moves: dict[tuple[str, str], tuple[str, str]] = {}
    for table in sys.squares.values():
        for (e, f), (f2, e2) in table.items():
            moves[(e, f)] = (f2, e2)
            moves[(f2, e2)] = (e, f)
    return moves


class PathClasses:
    """Degree-d paths of a system as classes of words under square moves."""

    def __init__(self, sys: KSystem, d: Sequence[int]):
        self.sys = sys
        self.degree = tuple(d)
        letters = [c for c in range(1, sys.rank + 1) for _ in range(self.degree[c - 1])]
        orders = sorted(set(itertools.permutations(letters)))
        words: list[Word] = []
        for order in orders:
            words.extend(_words(sys, order))
        moves = _square_moves(sys)
        self.class_of: dict[Word, int] = {}
        self.classes: list[frozenset[Word]] = []
        for w in words:
            if w in self.class_of:
                continue
            seen = {w}
            stack = [w]
            while stack:
                cur = stack.pop()
                for t in range(len(cur) - 1):
                    pair = (cur[t], cur[t + 1])
                    if pair in moves:
                        nxt = cur[:t] + moves[pair] + cur[t + 2:]
                        if nxt not in seen:
                            seen.add(nxt)
                            stack.append(nxt)
            idx = len(self.classes)
            self.classes.append(frozenset(seen))
            for x in seen:
                self.class_of[x] = idx
        if not letters:
            self.classes = [frozenset({(v,)}) for v in sys.vertices]
            self.class_of = {(v,): t for t, v in enumerate(sys.vertices)}

    def range_of(self, idx: int) -> str:
        w = next(iter(self.classes[idx]))
        if not sum(self.degree):
            return w[0]
        return self.sys.edges[w[0]].range

    def source_of(self, idx: int) -> str:
        w = next(iter(self.classes[idx]))
        if not sum(self.degree):
            return w[0]
        return self.sys.edges[w[-1]].source

    def normal_word(self, idx: int) -> Word:
        """The member whose colours are sorted, if any (unit paths: the vertex)."""
        if not sum(self.degree):
            return next(iter(self.classes[idx]))
        for w in sorted(self.classes[idx]):
            cs = [self.sys.edges[e].color for e in w]
            if cs == sorted(cs):
                return w
        raise ValueError("class without a sorted representative")


def naive_paths(sys: KSystem, d: Sequence[int]) -> list[Word]:
    """One representative word per path class: the colour-sorted one.

    Degree zero gives the one-letter words ``(vertex,)``.
    """
    pc = PathClasses(sys, d)
    return [pc.normal_word(i) for i in range(len(pc.classes))]


def _piece(pc_full: PathClasses, idx: int, before: Sequence[int], length: Sequence[int]) -> Word:
    """Word of the degree-``length`` piece after a degree-``before`` prefix (as a set key)."""
    sys = pc_full.sys
    nb, nl = sum(before), sum(length)
    for w in sorted(pc_full.classes[idx]):
        cs = Counter(sys.edges[e].color for e in w[:nb])
        cl = Counter(sys.edges[e].color for e in w[nb:nb + nl])
        if all(cs[c] == before[c - 1] for c in range(1, sys.rank + 1)) and all(
            cl[c] == length[c - 1] for c in range(1, sys.rank + 1)
        ):
            if nl:
                return w[nb:nb + nl]
            # unit piece: the vertex reached after the prefix
            if nb:
                return (sys.edges[w[nb - 1]].source,)
            return (sys.edges[w[0]].range,)
    raise ValueError("no word with the requested colour blocks")


def _canonical_piece(sys: KSystem, w: Word, length: Sequence[int], cache: dict) -> Any:
    if not sum(length):
        return ("vertex", w[0])
    key = tuple(length)
    if key not in cache:
        cache[key] = PathClasses(sys, length)
    return ("class", key, cache[key].class_of[w])


# ---------------------------------------------------------------------------
# hereditary & saturated sets


def naive_hs_family(sys: KSystem, max_vertices: int = 20) -> list[frozenset[str]]:
    verts = list(sys.vertices)
    if len(verts) > max_vertices:
        raise ValueError(f"too many vertices for a subset scan ({len(verts)})")
    edges = list(sys.edges.values())
    out = []
    for mask in range(1 << len(verts)):
        b = {v for t, v in enumerate(verts) if mask >> t & 1}
        hereditary = all(e.source in b for e in edges if e.range in b)
        if not hereditary:
            continue
        saturated = True
        for x in verts:
            if x in b:
                continue
            for c in range(1, sys.rank + 1):
                if all(e.source in b for e in edges if e.color == c and e.range == x):
                    saturated = False
        if saturated:
            out.append(frozenset(b))
    return sorted(out, key=lambda s: (len(s), sorted(verts.index(v) for v in s)))


def _possible(sys: KSystem) -> set[str]:
    cur = set(sys.vertices)
    while True:
        nxt = set()
        for x in cur:
            if all(any(e.source in cur for e in sys.edges.values() if e.color == c and e.range == x)
                   for c in range(1, sys.rank + 1)):
                nxt.add(x)
        if nxt == cur:
            return cur
        cur = nxt


def naive_restrict(sys: KSystem) -> KSystem:
    keep = _possible(sys)
    edges = {k: e for k, e in sys.edges.items() if e.source in keep and e.range in keep}
    squares = {
        key: {dom: cod for dom, cod in tab.items() if all(x in edges for x in dom + cod)}
        for key, tab in sys.squares.items()
    }
    return KSystem(sys.rank, tuple(v for v in sys.vertices if v in keep), edges, squares)


# ---------------------------------------------------------------------------
# effectivity straight from the definition


def _grid(k: int, bound: int) -> list[tuple[int, ...]]:
    return [t for t in itertools.product(range(bound + 1), repeat=k) if sum(t) <= bound]


def naive_effectivity(
    sys_r: KSystem, pair_bound: int, ext_bound: int, f_bound: int | None = None
) -> dict[tuple[tuple[int, ...], tuple[int, ...], str], tuple | None]:
    """For each reduced pair and vertex: a tuple (a, f, g, word) with
    mid_{p,a,f}(y) != mid_{q,a,g}(y), or None if none exists with
    |a| <= ext_bound and |f| <= f_bound (default pair_bound + ext_bound).

    f and g range freely subject to p + a + f == q + a + g.
    """
    if f_bound is None:
        f_bound = pair_bound + ext_bound
    k = sys_r.rank
    pairs = []
    for p in _grid(k, pair_bound):
        for q in _grid(k, pair_bound):
            if p != q and sum(p) + sum(q) <= pair_bound and all(min(x, y) == 0 for x, y in zip(p, q)):
                pairs.append((p, q))
    cache: dict = {}
    classes: dict[tuple[int, ...], PathClasses] = {}
    table: dict = {}
    for p, q in pairs:
        for x in sys_r.vertices:
            found = None
            for a in _grid(k, ext_bound):
                for f in _grid(k, f_bound):
                    g = tuple(pi + fi - qi for pi, fi, qi in zip(p, f, q))
                    if any(t < 0 for t in g):
                        continue
                    d = tuple(pi + ai + fi for pi, ai, fi in zip(p, a, f))
                    if d not in classes:
                        classes[d] = PathClasses(sys_r, d)
                    pc = classes[d]
                    for idx in range(len(pc.classes)):
                        if pc.range_of(idx) != x:
                            continue
                        m1 = _piece(pc, idx, p, a)
                        m2 = _piece(pc, idx, q, a)
                        c1 = _canonical_piece(sys_r, m1, a, cache)
                        c2 = _canonical_piece(sys_r, m2, a, cache)
                        if c1 != c2:
                            found = (a, f, g, pc.normal_word(idx))
                            break
                    if found:
                        break
                if found:
                    break
            table[(p, q, x)] = found
    return table


# ---------------------------------------------------------------------------
# general local contractivity, tiny scale


def naive_contracting_general(
    sys_r: KSystem, x: str, deg_bound: int = 1, set_bound: int = 1, n_max: int = 2
) -> dict[str, Any] | None:
    """Search the n-piece definition with S = {x}; returns a re-verified witness or None."""
    k = sys_r.rank
    degs = _grid(k, deg_bound)
    pcs: dict[tuple[int, ...], PathClasses] = {}

    def pc(d):
        d = tuple(d)
        if d not in pcs:
            pcs[d] = PathClasses(sys_r, d)
        return pcs[d]

    def candidates(p, q):
        """All W in M'_p x_s M'_q with injective projections, |W| <= set_bound, r(pr_2 W) = {x}."""
        pp, qq = pc(p), pc(q)
        pairs = []
        for i in range(len(pp.classes)):
            for j in range(len(qq.classes)):
                if pp.source_of(i) == qq.source_of(j) and qq.range_of(j) == x:
                    pairs.append((i, j))
        for size in range(1, set_bound + 1):
            for w in itertools.combinations(pairs, size):
                if len({a for a, _ in w}) == size and len({b for _, b in w}) == size:
                    yield w

    def extensions(prefix_deg, idxs, d):
        """Classes of degree d whose degree-prefix_deg head lies in idxs."""
        big = pc(d)
        head = pc(prefix_deg)
        out = set()
        n = sum(prefix_deg)
        for idx, cls in enumerate(big.classes):
            for w in cls:
                cs = Counter(sys_r.edges[e].color for e in w[:n])
                if all(cs[c] == prefix_deg[c - 1] for c in range(1, k + 1)):
                    hw = w[:n] if n else (sys_r.edges[w[0]].range,)
                    if head.class_of[hw] in idxs:
                        out.add(idx)
                    break
        return out

    pqs = [(p, q) for p in degs for q in degs if p != q]
    for n in range(1, n_max + 1):
        for combo in itertools.combinations(pqs, n):
            diffs = {tuple(a - b for a, b in zip(p, q)) for p, q in combo}
            if len(diffs) != n:                                  # distinct fractions
                continue
            d = tuple(max(v[c] for pq in combo for v in pq) for c in range(k))
            for ws in itertools.product(*(list(candidates(p, q)) for p, q in combo)):
                left: list[set[int]] = []
                right: list[set[int]] = []
                for (p, q), w in zip(combo, ws):
                    left.append(extensions(p, {a for a, _ in w}, d))
                    right.append(extensions(q, {b for _, b in w}, d))
                if sum(map(len, left)) != len(set().union(*left)):
                    continue
                if sum(map(len, right)) != len(set().union(*right)):
                    continue
                lu, ru = set().union(*left), set().union(*right)
                if lu < ru:
                    big = pc(d)
                    return {
                        "n": n,
                        "pieces": [
                            {"p": list(p), "q": list(q),
                             "W": [[pc(p).normal_word(a), pc(q).normal_word(b)] for a, b in w]}
                            for (p, q), w in zip(combo, ws)
                        ],
                        "degree": list(d),
                        "gap": big.normal_word(min(ru - lu)),
                    }
    return None


# ---------------------------------------------------------------------------
# measures with sympy


def _solve_unique(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Unique solution of a (possibly overdetermined) system, else None."""
    m = [r[:] + [b] for r, b in zip(rows, rhs)]
    ncols = len(rows[0])
    piv_row = 0
    where = [-1] * ncols
    for col in range(ncols):
        sel = next((r for r in range(piv_row, len(m)) if m[r][col] != 0), None)
        if sel is None:
            return None                      # free column: not unique
        m[piv_row], m[sel] = m[sel], m[piv_row]
        lead = m[piv_row][col]
        m[piv_row] = [x / lead for x in m[piv_row]]
        for r in range(len(m)):
            if r != piv_row and m[r][col] != 0:
                fac = m[r][col]
                m[r] = [x - fac * y for x, y in zip(m[r], m[piv_row])]
        where[col] = piv_row
        piv_row += 1
    if any(m[r][-1] != 0 for r in range(piv_row, len(m))):
        return None                          # inconsistent
    return [m[where[c]][-1] for c in range(ncols)]


def naive_measure(sys: KSystem, c: Sequence, max_vertices: int = 8) -> dict[str, Any]:
    """Nullspace dimension (sympy) and the lexicographically least probability
    vector, found among the vertices of the feasibility polytope by
    enumerating supports."""
    verts = list(sys.vertices)
    n = len(verts)
    if n > max_vertices:
        raise ValueError("too many vertices for vertex enumeration")
    c = [Fraction(t) for t in c]
    rows = []
    for ci, color in zip(c, range(1, sys.rank + 1)):
        for x in verts:
            row = [Fraction(int(x == y)) for y in verts]
            for e in sys.edges.values():
                if e.color == color and e.range == x:
                    row[verts.index(e.source)] -= ci
            rows.append(row)
    if not n:
        return {"dimension": 0, "representative": None}
    a = DomainMatrix([[QQ(x.numerator, x.denominator) for x in r] for r in rows], (len(rows), n), QQ)
    dim = n - a.rank()
    best = None
    if dim:
        out_of = {(verts.index(e.source), verts.index(e.range)) for e in sys.edges.values()}
        for size in range(1, n + 1):
            for support in itertools.combinations(range(n), size):
                # each vertex is found at its exact positive support S; there
                # lambda vanishes off S, so no edge may leave S towards its range
                if any(src in support and rng not in support for src, rng in out_of):
                    continue
                sub = [[r[t] for t in support] for r in rows] + [[Fraction(1)] * size]
                sol = _solve_unique(sub, [Fraction(0)] * len(rows) + [Fraction(1)])
                if sol is None or any(v <= 0 for v in sol):
                    continue
                full = [Fraction(0)] * n
                for t, v in zip(support, sol):
                    full[t] = v
                if best is None or full < best:
                    best = full
    return {"dimension": dim, "representative": best}


# ---------------------------------------------------------------------------
# indicator round trip


def truncated_indicator_roundtrip(sys: KSystem, b: Iterable[str], depth: int) -> bool:
    """x is outside B iff some path of degree depth*(1,...,1) with range x
    keeps every vertex it passes outside B."""
    b = set(b)
    k = sys.rank
    colors = [c for _ in range(depth) for c in range(1, k + 1)]

    def avoids(x: str) -> bool:
        if x in b:
            return False

        def go(t: int, at: str) -> bool:
            if t == len(colors):
                return True
            for e in sys.edges.values():
                if e.color == colors[t] and e.range == at and e.source not in b:
                    if go(t + 1, e.source):
                        return True
            return False

        return go(0, x)

    for x in sys.vertices:
        if (x not in b) != avoids(x):
            return False
    return True


# ---------------------------------------------------------------------------
# test families


def rank1_family(max_vertices: int = 3, max_parallel: int = 2) -> Iterable[KSystem]:
    """Every 1-graph on 1..max_vertices labelled vertices with at most
    ``max_parallel`` parallel edges per ordered pair."""
    for n in range(1, max_vertices + 1):
        names = [str(i + 1) for i in range(n)]
        cells = [(x, y) for x in range(n) for y in range(n)]
        for counts in itertools.product(range(max_parallel + 1), repeat=len(cells)):
            edges = {}
            for (x, y), m in zip(cells, counts):
                for t in range(m):
                    eid = f"e{names[x]}{names[y]}{t}"
                    edges[eid] = Edge(eid, 1, names[x], names[y])
            yield KSystem(1, tuple(names), edges, {})


def single_vertex_rank2_family(sizes: Sequence[int] = (1, 2)) -> Iterable[KSystem]:
    """One vertex, m colour-1 and n colour-2 loops, every square bijection."""
    for m in sizes:
        for n in sizes:
            a = [f"a{i + 1}" for i in range(m)]
            x = [f"x{j + 1}" for j in range(n)]
            edges = {e: Edge(e, 1, "v", "v") for e in a}
            edges.update({e: Edge(e, 2, "v", "v") for e in x})
            dom = [(e, f) for e in a for f in x]
            cod = [(f, e) for e in a for f in x]
            for perm in itertools.permutations(cod):
                yield KSystem(2, ("v",), dict(edges), {(1, 2): dict(zip(dom, perm))})
