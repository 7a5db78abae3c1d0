"""Finite actions of N^k by proper correspondences, i.e. finite k-graphs.

A :class:`KSystem` holds vertices, one edge table per colour and, for each
colour pair ``i < j``, a factorisation table ``sigma_ij`` sending a path
``(e, f)`` (colour ``i`` edge at the range end, colour ``j`` edge after it)
to the equivalent path ``(f', e')`` with the colours in the other order.

Paths are stored in normal form: colour blocks in increasing colour order,
read from the range end. Edges point from source to range; a path
``[e1, e2, ...]`` satisfies ``s(e1) == r(e2)``.
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path as FilePath
from typing import Any, Iterable, Iterator, Mapping, Sequence

from kgraph import _linalg

Degree = tuple[int, ...]

DEFAULT_PATH_BOUND = 12


class KSystemError(ValueError):
    """Malformed or inconsistent system data."""


class PathError(ValueError):
    """Invalid path operation (non-composable, bad degree)."""


@dataclass(frozen=True)
class Edge:
    id: str
    color: int
    range: str
    source: str


@dataclass(frozen=True)
class Path:
    degree: Degree
    edges: tuple[str, ...]
    range: str
    source: str

    def __len__(self) -> int:
        return len(self.edges)


@dataclass
class KSystem:
    rank: int
    vertices: tuple[str, ...]
    edges: dict[str, Edge]
    squares: dict[tuple[int, int], dict[tuple[str, str], tuple[str, str]]] = field(
        default_factory=dict
    )

    def __post_init__(self) -> None:
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self.by_color: dict[int, list[Edge]] = {c: [] for c in range(1, self.rank + 1)}
        for e in self.edges.values():
            self.by_color.setdefault(e.color, []).append(e)
        self._into: dict[tuple[int, str], list[Edge]] = {}
        for c, es in self.by_color.items():
            for e in es:
                self._into.setdefault((c, e.range), []).append(e)
        self._inverse: dict[tuple[int, int], dict[tuple[str, str], tuple[str, str]]] = {}
        for key, table in self.squares.items():
            inv: dict[tuple[str, str], tuple[str, str]] = {}
            for dom, cod in table.items():
                inv.setdefault(cod, dom)
            self._inverse[key] = inv

    # -- basic queries -------------------------------------------------

    def edges_into(self, color: int, vertex: str) -> list[Edge]:
        return self._into.get((color, vertex), [])

    def color(self, edge_id: str) -> int:
        return self.edges[edge_id].color

    def adjacency(self, color: int) -> list[list[int]]:
        """Matrix ``B[x][y]`` = number of colour-``color`` edges with range x, source y."""
        n = len(self.vertices)
        b = _linalg.zeros(n, n)
        idx = self.vertex_index
        for e in self.by_color.get(color, []):
            b[idx[e.range]][idx[e.source]] += 1
        return b

    def adjacency_matrices(self) -> list[list[list[int]]]:
        return [self.adjacency(c) for c in range(1, self.rank + 1)]

    def unit_path(self, vertex: str) -> Path:
        if vertex not in self.vertex_index:
            raise PathError(f"unknown vertex {vertex!r}")
        return Path((0,) * self.rank, (), vertex, vertex)

    def path_from_edges(self, edge_ids: Sequence[str]) -> Path:
        """Build a path from an edge list in any colour order, then normalise it."""
        if not edge_ids:
            raise PathError("use unit_path for degree zero")
        for a, b in zip(edge_ids, edge_ids[1:]):
            if self.edges[a].source != self.edges[b].range:
                raise PathError(f"edges {a} and {b} do not compose")
        deg = [0] * self.rank
        for e in edge_ids:
            deg[self.edges[e].color - 1] += 1
        want = sorted(self.edges[e].color for e in edge_ids)
        normal = self._reorder(list(edge_ids), want)
        return Path(
            tuple(deg), tuple(normal), self.edges[normal[0]].range, self.edges[normal[-1]].source
        )

    # -- rewriting -----------------------------------------------------

    def _swap(self, x: str, y: str) -> tuple[str, str]:
        """Rewrite the adjacent pair ``x y`` (different colours) into the other order."""
        ci, cj = self.edges[x].color, self.edges[y].color
        if ci < cj:
            table = self.squares.get((ci, cj), {})
            if (x, y) not in table:
                raise KSystemError(f"no factorisation square for ({x}, {y})")
            return table[(x, y)]
        inv = self._inverse.get((cj, ci), {})
        if (x, y) not in inv:
            raise KSystemError(f"no factorisation square with image ({x}, {y})")
        return inv[(x, y)]

    def _reorder(self, edges: list[str], target_colors: Sequence[int]) -> list[str]:
        """Rewrite ``edges`` so its colour sequence becomes ``target_colors``.

        Same-coloured edges keep their relative order; adjacent transpositions
        are realised by the factorisation squares.
        """
        if self.rank == 1:
            return list(edges)
        seen: dict[int, int] = {}
        slots: dict[tuple[int, int], int] = {}
        for pos, c in enumerate(target_colors):
            slots[(c, seen.get(c, 0))] = pos
            seen[c] = seen.get(c, 0) + 1
        seen.clear()
        keys = []
        for e in edges:
            c = self.edges[e].color
            keys.append(slots[(c, seen.get(c, 0))])
            seen[c] = seen.get(c, 0) + 1
        edges = list(edges)
        if all(a < b for a, b in zip(keys, keys[1:])):
            return edges
        n = len(edges)
        for end in range(n - 1, 0, -1):
            for t in range(end):
                if keys[t] > keys[t + 1]:
                    edges[t], edges[t + 1] = self._swap(edges[t], edges[t + 1])
                    keys[t], keys[t + 1] = keys[t + 1], keys[t]
        return edges

    def _color_sequence(self, degree: Degree) -> list[int]:
        return [c for c in range(1, self.rank + 1) for _ in range(degree[c - 1])]


# ---------------------------------------------------------------------------
# construction / IO


def from_dict(doc: Mapping[str, Any], strict: bool = True) -> KSystem:
    """Parse the JSON document form. Structural problems raise :class:`KSystemError`."""
    allowed = {"rank", "vertices", "edges", "squares"}
    if strict:
        unknown = set(doc) - allowed
        if unknown:
            raise KSystemError(f"unknown keys: {sorted(unknown)}")
    try:
        rank = int(doc["rank"])
        vertices = [str(v) for v in doc["vertices"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise KSystemError(f"missing or bad rank/vertices: {exc}") from exc
    if rank < 1:
        raise KSystemError("rank must be >= 1")
    if len(set(vertices)) != len(vertices):
        raise KSystemError("duplicate vertex ids")
    vset = set(vertices)
    edges: dict[str, Edge] = {}
    raw_edges = doc.get("edges", {})
    if not isinstance(raw_edges, Mapping):
        raise KSystemError("edges must be an object keyed by colour")
    for key, rows in raw_edges.items():
        try:
            color = int(key)
        except ValueError as exc:
            raise KSystemError(f"bad colour key {key!r}") from exc
        if not 1 <= color <= rank:
            raise KSystemError(f"colour {color} outside 1..{rank}")
        for row in rows:
            if len(row) != 3:
                raise KSystemError(f"edge record must be [id, range, source]: {row!r}")
            eid, rng, src = (str(x) for x in row)
            if eid in edges:
                raise KSystemError(f"duplicate edge id {eid!r}")
            if rng not in vset or src not in vset:
                raise KSystemError(f"edge {eid!r} references unknown vertex")
            edges[eid] = Edge(eid, color, rng, src)
    squares: dict[tuple[int, int], dict[tuple[str, str], tuple[str, str]]] = {}
    raw_sq = doc.get("squares", {})
    if not isinstance(raw_sq, Mapping):
        raise KSystemError("squares must be an object keyed by 'i,j'")
    for key, rows in raw_sq.items():
        try:
            i, j = (int(t) for t in str(key).split(","))
        except ValueError as exc:
            raise KSystemError(f"bad square key {key!r}") from exc
        if not 1 <= i < j <= rank:
            raise KSystemError(f"square key {key!r} must satisfy 1 <= i < j <= rank")
        table = squares.setdefault((i, j), {})
        for row in rows:
            if len(row) != 4:
                raise KSystemError(f"square record must be [e, f, f2, e2]: {row!r}")
            e, f, f2, e2 = (str(x) for x in row)
            for eid, col in ((e, i), (f, j), (f2, j), (e2, i)):
                if eid not in edges:
                    raise KSystemError(f"square {row!r} references unknown edge {eid!r}")
                if edges[eid].color != col:
                    raise KSystemError(f"square {row!r}: edge {eid!r} has wrong colour")
            if (e, f) in table:
                raise KSystemError(f"square domain pair ({e}, {f}) listed twice")
            table[(e, f)] = (f2, e2)
    return KSystem(rank, tuple(vertices), edges, squares)


def to_dict(sys: KSystem) -> dict[str, Any]:
    edges: dict[str, list[list[str]]] = {}
    for c in range(1, sys.rank + 1):
        edges[str(c)] = [[e.id, e.range, e.source] for e in sys.by_color.get(c, [])]
    squares = {}
    for (i, j) in sorted(sys.squares):
        squares[f"{i},{j}"] = [[e, f, f2, e2] for (e, f), (f2, e2) in sys.squares[(i, j)].items()]
    return {"rank": sys.rank, "vertices": list(sys.vertices), "edges": edges, "squares": squares}


def load(path: str | FilePath, strict: bool = True) -> KSystem:
    try:
        doc = json.loads(FilePath(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise KSystemError(f"{path}: not valid JSON ({exc})") from exc
    return from_dict(doc, strict=strict)


def dump(sys: KSystem, path: str | FilePath) -> None:
    FilePath(path).write_text(json.dumps(to_dict(sys), indent=2) + "\n", encoding="utf-8")


def build(
    rank: int,
    vertices: Sequence[str],
    edges: Mapping[int, Sequence[tuple[str, str, str]]],
    squares: Mapping[tuple[int, int], Sequence[tuple[str, str, str, str]]] | None = None,
) -> KSystem:
    """Convenience constructor from Python literals."""
    doc = {
        "rank": rank,
        "vertices": list(vertices),
        "edges": {str(c): [list(r) for r in rows] for c, rows in edges.items()},
        "squares": {f"{i},{j}": [list(r) for r in rows] for (i, j), rows in (squares or {}).items()},
    }
    return from_dict(doc)


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    mode: str
    square_errors: list[dict[str, Any]]
    cube_errors: list[dict[str, Any]]
    commute_errors: list[dict[str, Any]]
    flags: dict[str, dict[str, bool]]
    saturated_fell: bool
    interior: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not (self.square_errors or self.cube_errors or self.commute_errors)

    def to_dict(self) -> dict[str, Any]:
        return {
            "mode": self.mode,
            "ok": self.ok,
            "square_errors": self.square_errors,
            "cube_errors": self.cube_errors,
            "commute_errors": self.commute_errors,
            "flags": self.flags,
            "saturated_fell": self.saturated_fell,
            "interior": list(self.interior),
        }


class ValidationError(KSystemError):
    def __init__(self, report: ValidationReport):
        errs = report.square_errors + report.cube_errors + report.commute_errors
        super().__init__(f"{len(errs)} validation error(s); first: {errs[0]['message']}")
        self.report = report


def _composable_pairs(sys: KSystem, i: int, j: int) -> list[tuple[str, str]]:
    """All paths (x, y) with x of colour i at the range end and y of colour j."""
    out = []
    for x in sys.by_color.get(i, []):
        for y in sys.edges_into(j, x.source):
            out.append((x.id, y.id))
    return out


def validate(sys: KSystem, mode: str = "strict") -> ValidationReport:
    """Check squares, the cube condition and commuting adjacency matrices.

    ``strict`` raises :class:`ValidationError` on any problem. ``partial``
    returns the report; its ``interior`` lists the vertices not touched by any
    error (errors implicate the range and source of the offending path).
    """
    if mode not in ("strict", "partial"):
        raise ValueError(f"unknown validation mode {mode!r}")
    sq_err: list[dict[str, Any]] = []
    cube_err: list[dict[str, Any]] = []
    com_err: list[dict[str, Any]] = []
    bad: set[str] = set()
    E = sys.edges

    def blame(*vs: str) -> None:
        bad.update(vs)

    for i, j in itertools.combinations(range(1, sys.rank + 1), 2):
        table = sys.squares.get((i, j), {})
        domain = set(_composable_pairs(sys, i, j))
        codomain = set(_composable_pairs(sys, j, i))
        images: dict[tuple[str, str], tuple[str, str]] = {}
        for (e, f), (f2, e2) in table.items():
            if (e, f) not in domain:
                sq_err.append({"colors": [i, j], "pair": [e, f],
                               "message": f"({e},{f}) is not a composable colour-{i},{j} path"})
                blame(E[e].range, E[f].source)
                continue
            if (f2, e2) not in codomain:
                sq_err.append({"colors": [i, j], "pair": [e, f],
                               "message": f"image ({f2},{e2}) of ({e},{f}) is not composable"})
                blame(E[e].range, E[f].source)
                continue
            if E[f2].range != E[e].range or E[e2].source != E[f].source:
                sq_err.append({"colors": [i, j], "pair": [e, f],
                               "message": f"square ({e},{f})->({f2},{e2}) changes range or source"})
                blame(E[e].range, E[f].source, E[f2].range, E[e2].source)
                continue
            if (f2, e2) in images:
                other = images[(f2, e2)]
                sq_err.append({"colors": [i, j], "pair": [e, f],
                               "message": f"({e},{f}) and ({other[0]},{other[1]}) share image ({f2},{e2})"})
                blame(E[e].range, E[f].source)
                continue
            images[(f2, e2)] = (e, f)
        for e, f in sorted(domain - set(table)):
            sq_err.append({"colors": [i, j], "pair": [e, f],
                           "message": f"composable pair ({e},{f}) has no square"})
            blame(E[e].range, E[f].source)
        for f2, e2 in sorted(codomain - set(images)):
            sq_err.append({"colors": [j, i], "pair": [f2, e2],
                           "message": f"composable pair ({f2},{e2}) is not the image of any square"})
            blame(E[f2].range, E[e2].source)

    mats = sys.adjacency_matrices()
    verts = sys.vertices
    for a, b in itertools.combinations(range(sys.rank), 2):
        ab = _linalg.matmul(mats[a], mats[b])
        ba = _linalg.matmul(mats[b], mats[a])
        for x in range(len(verts)):
            for y in range(len(verts)):
                if ab[x][y] != ba[x][y]:
                    com_err.append({"colors": [a + 1, b + 1], "entry": [verts[x], verts[y]],
                                    "message": f"B{a + 1}B{b + 1} != B{b + 1}B{a + 1} at ({verts[x]},{verts[y]})"})
                    blame(verts[x], verts[y])

    if sys.rank >= 3 and not sq_err:
        cube_err.extend(_cube_errors(sys, blame))

    flags: dict[str, dict[str, bool]] = {}
    vset = set(verts)
    for c in range(1, sys.rank + 1):
        es = sys.by_color.get(c, [])
        rs = [e.range for e in es]
        ss = [e.source for e in es]
        r_onto = set(rs) == vset
        s_onto = set(ss) == vset
        flags[str(c)] = {
            "full": s_onto,
            "regular": r_onto,
            "left_injective": r_onto,
            "imprimitivity": r_onto and s_onto and len(es) == len(vset),
        }
    saturated = all(f["full"] for f in flags.values())
    interior = tuple(v for v in verts if v not in bad)
    report = ValidationReport(mode, sq_err, cube_err, com_err, flags, saturated, interior)
    if mode == "strict" and not report.ok:
        raise ValidationError(report)
    return report


def _cube_errors(sys: KSystem, blame) -> list[dict[str, Any]]:
    """Both rewriting routes from colours (i, j, l) to (l, j, i) must agree."""
    errors = []
    for i, j, l in itertools.combinations(range(1, sys.rank + 1), 3):
        for e in sys.by_color.get(i, []):
            for f in sys.edges_into(j, e.source):
                for g in sys.edges_into(l, f.source):
                    w = [e.id, f.id, g.id]
                    # route A: swap (1,2), (2,3), (1,2)
                    a = list(w)
                    a[0], a[1] = sys._swap(a[0], a[1])
                    a[1], a[2] = sys._swap(a[1], a[2])
                    a[0], a[1] = sys._swap(a[0], a[1])
                    # route B: swap (2,3), (1,2), (2,3)
                    b = list(w)
                    b[1], b[2] = sys._swap(b[1], b[2])
                    b[0], b[1] = sys._swap(b[0], b[1])
                    b[1], b[2] = sys._swap(b[1], b[2])
                    if a != b:
                        errors.append({"colors": [i, j, l], "triple": w,
                                       "message": f"cube condition fails for ({e.id},{f.id},{g.id})"})
                        blame(e.range, g.source)
    return errors


# ---------------------------------------------------------------------------
# paths


def _check_degree(sys: KSystem, d: Sequence[int]) -> Degree:
    d = tuple(int(x) for x in d)
    if len(d) != sys.rank or any(x < 0 for x in d):
        raise PathError(f"degree {d} is not in N^{sys.rank}")
    return d


def compose(sys: KSystem, ending: Path, beginning: Path) -> Path:
    """The path whose range-end segment is ``ending`` followed by ``beginning``."""
    if ending.source != beginning.range:
        raise PathError(
            f"cannot compose: source {ending.source!r} != range {beginning.range!r}"
        )
    if not ending.edges:
        return beginning
    if not beginning.edges:
        return ending
    degree = tuple(a + b for a, b in zip(ending.degree, beginning.degree))
    edges = sys._reorder(list(ending.edges + beginning.edges), sys._color_sequence(degree))
    return Path(degree, tuple(edges), ending.range, beginning.source)


def segment(sys: KSystem, y: Path, u: Sequence[int]) -> tuple[Path, Path]:
    """Split ``y`` of degree d into its degree-u ending and degree-(d-u) beginning."""
    u = _check_degree(sys, u)
    if any(a > b for a, b in zip(u, y.degree)):
        raise PathError(f"{u} is not <= {y.degree}")
    v = tuple(b - a for a, b in zip(u, y.degree))
    n_u = sum(u)
    if n_u == 0:
        return sys.unit_path(y.range), y
    if n_u == len(y.edges):
        return y, sys.unit_path(y.source)
    target = sys._color_sequence(u) + sys._color_sequence(v)
    edges = sys._reorder(list(y.edges), target)
    head, tail = tuple(edges[:n_u]), tuple(edges[n_u:])
    mid = sys.edges[head[-1]].source
    return Path(u, head, y.range, mid), Path(v, tail, mid, y.source)


def mid_plan(sys: KSystem, d: Sequence[int], offset: Sequence[int], length: Sequence[int]):
    """Precompute the reorder that cuts the (offset, length) piece out of degree-d paths."""
    return _mid_plan(sys.rank, _check_degree(sys, d), _check_degree(sys, offset),
                     _check_degree(sys, length))


@functools.lru_cache(maxsize=4096)
def _mid_plan(rank: int, d: Degree, offset: Degree, length: Degree):
    rest = tuple(t - a - b for t, a, b in zip(d, offset, length))
    if any(t < 0 for t in rest):
        raise PathError(f"{offset} + {length} is not <= {d}")

    def colors(deg: Degree) -> list[int]:
        return [c for c in range(1, rank + 1) for _ in range(deg[c - 1])]

    # one reorder into the colour order (offset, length, rest) splits all three at once
    return tuple(colors(offset) + colors(length) + colors(rest)), sum(offset), sum(length)


def mid_cut(sys: KSystem, y: Path, plan) -> tuple[str, tuple[str, ...]]:
    """(range vertex, edges) of the piece described by ``plan``."""
    target, n0, n1 = plan
    edges = sys._reorder(list(y.edges), target)
    rng = sys.edges[edges[n0 - 1]].source if n0 else y.range
    return rng, tuple(edges[n0:n0 + n1])


def mid(sys: KSystem, y: Path, offset: Sequence[int], length: Sequence[int]) -> Path:
    """The degree-``length`` piece of ``y`` starting ``offset`` steps from the range end."""
    rng, piece = mid_cut(sys, y, mid_plan(sys, y.degree, offset, length))
    if not piece:
        return sys.unit_path(rng)
    return Path(tuple(length), piece, rng, sys.edges[piece[-1]].source)


def count_paths(sys: KSystem, d: Sequence[int]) -> list[list[int]]:
    """Entry (x, y) = number of degree-d paths with range x and source y."""
    d = _check_degree(sys, d)
    m = _linalg.identity(len(sys.vertices))
    for c in range(1, sys.rank + 1):
        m = _linalg.matmul(m, _linalg.matpow(sys.adjacency(c), d[c - 1]))
    return m


def iter_paths(sys: KSystem, d: Sequence[int], range_filter: str | None = None) -> Iterator[Path]:
    d = _check_degree(sys, d)
    colors = sys._color_sequence(d)
    starts = [range_filter] if range_filter is not None else list(sys.vertices)
    if not colors:
        for v in starts:
            yield sys.unit_path(v)
        return
    n = len(colors)

    def extend(prefix: list[str], at: str) -> Iterator[list[str]]:
        t = len(prefix)
        if t == n:
            yield prefix
            return
        for e in sys.edges_into(colors[t], at):
            prefix.append(e.id)
            yield from extend(prefix, e.source)
            prefix.pop()

    for v in starts:
        for edges in extend([], v):
            yield Path(d, tuple(edges), v, sys.edges[edges[-1]].source)


def enumerate_paths(
    sys: KSystem,
    d: Sequence[int],
    range_filter: str | None = None,
    bound: int = DEFAULT_PATH_BOUND,
) -> list[Path]:
    """All normal-form paths of degree ``d`` (optionally with a fixed range)."""
    d = _check_degree(sys, d)
    if sum(d) > bound:
        raise PathError(f"|d| = {sum(d)} exceeds the configured bound {bound}")
    if range_filter is not None and range_filter not in sys.vertex_index:
        raise PathError(f"unknown vertex {range_filter!r}")
    return list(iter_paths(sys, d, range_filter))


# ---------------------------------------------------------------------------
# possible situations


def possible_vertices(sys: KSystem) -> frozenset[str]:
    """Greatest Y with: every x in Y has, for each colour, an incoming edge from Y."""
    current = set(sys.vertices)
    while True:
        nxt = {
            x for x in current
            if all(
                any(e.source in current for e in sys.edges_into(c, x))
                for c in range(1, sys.rank + 1)
            )
        }
        if nxt == current:
            return frozenset(current)
        current = nxt


def restrict(sys: KSystem, keep: Iterable[str]) -> KSystem:
    """Induced subsystem: vertices in ``keep``, edges and squares inside it."""
    keep = set(keep)
    verts = tuple(v for v in sys.vertices if v in keep)
    edges = {k: e for k, e in sys.edges.items() if e.source in keep and e.range in keep}
    squares = {}
    for key, table in sys.squares.items():
        squares[key] = {
            dom: cod for dom, cod in table.items()
            if all(x in edges for x in dom + cod)
        }
    return KSystem(sys.rank, verts, edges, squares)


def restrict_to_possible(sys: KSystem) -> KSystem:
    """The action on X' with M'_p = s_p^{-1}(X')."""
    xp = possible_vertices(sys)
    out = restrict(sys, xp)
    dropped = [
        e.id for e in sys.edges.values()
        if e.source in xp and e.range not in xp
    ]
    if dropped:
        raise KSystemError(f"edges {dropped} leave X'; the system is not a valid action")
    return out


def same_system(a: KSystem, b: KSystem) -> bool:
    return to_dict(a) == to_dict(b)
