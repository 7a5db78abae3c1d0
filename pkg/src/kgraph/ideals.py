"""Hereditary and saturated vertex sets and their lattice.

Both conditions are checked on the generating colours only. A vertex that
receives no edge of some colour is forced into every saturated set, which
is why the bottom of the lattice is ``X \\ X'`` rather than the empty set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable

from kgraph.ksystem import KSystem, possible_vertices

VertexSubset = frozenset


class LatticeCapExceeded(RuntimeError):
    pass


def _check_subset(sys: KSystem, b: Iterable[str]) -> frozenset[str]:
    b = frozenset(b)
    unknown = b - set(sys.vertices)
    if unknown:
        raise ValueError(f"not vertices of the system: {sorted(unknown)}")
    return b


def is_hereditary(sys: KSystem, b: Iterable[str]) -> bool:
    """r(e) in B implies s(e) in B, for every edge of every colour."""
    b = _check_subset(sys, b)
    return all(e.source in b for e in sys.edges.values() if e.range in b)


def is_saturated(sys: KSystem, b: Iterable[str]) -> bool:
    """If every colour-i edge into x starts in B, then x is in B."""
    b = _check_subset(sys, b)
    for x in sys.vertices:
        if x in b:
            continue
        for c in range(1, sys.rank + 1):
            if all(e.source in b for e in sys.edges_into(c, x)):
                return False
    return True


def hs_closure(sys: KSystem, b: Iterable[str]) -> frozenset[str]:
    """Smallest hereditary and saturated superset of ``b``."""
    cur = set(_check_subset(sys, b))
    changed = True
    while changed:
        changed = False
        stack = list(cur)
        while stack:
            x = stack.pop()
            for c in range(1, sys.rank + 1):
                for e in sys.edges_into(c, x):
                    if e.source not in cur:
                        cur.add(e.source)
                        stack.append(e.source)
                        changed = True
        for x in sys.vertices:
            if x in cur:
                continue
            if any(
                all(e.source in cur for e in sys.edges_into(c, x))
                for c in range(1, sys.rank + 1)
            ):
                cur.add(x)
                changed = True
    return frozenset(cur)


@dataclass(frozen=True)
class HSLattice:
    vertices: tuple[str, ...]
    members: tuple[frozenset[str], ...]   # sorted by size, then by vertex order

    @property
    def bottom(self) -> frozenset[str]:
        return self.members[0]

    @property
    def top(self) -> frozenset[str]:
        return self.members[-1]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, b: object) -> bool:
        return frozenset(b) in set(self.members)  # type: ignore[arg-type]

    def hasse_edges(self) -> list[tuple[int, int]]:
        """Covering relations ``(i, j)``: member i is covered by member j."""
        out = []
        ms = self.members
        for i, a in enumerate(ms):
            for j, b in enumerate(ms):
                if a < b and not any(a < c < b for c in ms):
                    out.append((i, j))
        return out

    def ordered(self, b: frozenset[str]) -> list[str]:
        return [v for v in self.vertices if v in b]

    def to_dict(self) -> dict[str, Any]:
        return {
            "count": len(self.members),
            "members": [self.ordered(m) for m in self.members],
            "hasse": [list(e) for e in self.hasse_edges()],
        }


def _sort_key(vertices: tuple[str, ...]):
    index = {v: i for i, v in enumerate(vertices)}
    return lambda s: (len(s), sorted(index[v] for v in s))


def hs_lattice(sys: KSystem, cap: int = 4096) -> HSLattice:
    """All hereditary saturated sets, generated as joins of single-vertex closures."""
    bottom = hs_closure(sys, ())
    atoms = {}
    for x in sys.vertices:
        atoms[x] = hs_closure(sys, (x,))
    seen = {bottom}
    frontier = [bottom]
    while frontier:
        nxt = []
        for m in frontier:
            for x in sys.vertices:
                if x in m:
                    continue
                j = hs_closure(sys, m | atoms[x])
                if j not in seen:
                    seen.add(j)
                    nxt.append(j)
                    if len(seen) > cap:
                        raise LatticeCapExceeded(f"more than {cap} hereditary saturated sets")
        frontier = nxt
    members = tuple(sorted(seen, key=_sort_key(sys.vertices)))
    return HSLattice(sys.vertices, members)


@dataclass(frozen=True)
class Minimality:
    minimal: bool
    degenerate: bool = False

    def __bool__(self) -> bool:
        return self.minimal

    def to_dict(self) -> dict[str, Any]:
        return {"minimal": self.minimal, "degenerate": self.degenerate}


def is_minimal(sys: KSystem, lattice: HSLattice | None = None) -> Minimality:
    """True iff the only hereditary saturated sets are X \\ X' and X.

    With X' empty the lattice collapses to {X}, which passes the test
    vacuously; that case carries the ``degenerate`` flag.
    """
    xp = possible_vertices(sys)
    if not xp:
        return Minimality(True, degenerate=True)
    if lattice is None:
        lattice = hs_lattice(sys)
    full = frozenset(sys.vertices)
    return Minimality(set(lattice.members) == {full - xp, full})


def gauge_invariant_ideal_count(sys: KSystem) -> int:
    return len(hs_lattice(sys))
