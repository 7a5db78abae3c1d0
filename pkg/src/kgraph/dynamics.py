"""Effectivity (aperiodicity), local contractivity and the composite verdicts.

For rank one, effectivity is decided exactly by looking for cycles without
entrances. For higher rank only bounded searches are available and their
outcome is reported as LIKELY_EFFECTIVE or UNDETERMINED together with the
bounds that were used.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Sequence

from kgraph import ideals
from kgraph.ksystem import (
    KSystem,
    Path,
    iter_paths,
    mid,
    mid_cut,
    mid_plan,
    possible_vertices,
    restrict_to_possible,
    segment,
)
from kgraph.monoid import grid_upto

EFFECTIVE_CERTIFIED = "EFFECTIVE_CERTIFIED"
NOT_EFFECTIVE_CERTIFIED = "NOT_EFFECTIVE_CERTIFIED"
LIKELY_EFFECTIVE = "LIKELY_EFFECTIVE"
UNDETERMINED = "UNDETERMINED"

YES, NO, UNKNOWN = "yes", "no", "unknown"
HOLDS = "HOLDS"


@dataclass(frozen=True)
class Bounds:
    pair_bound: int = 4
    ext_bound: int = 3
    deg_bound: int = 2
    set_bound: int = 3

    def to_dict(self) -> dict[str, int]:
        return {
            "pair_bound": self.pair_bound,
            "ext_bound": self.ext_bound,
            "deg_bound": self.deg_bound,
            "set_bound": self.set_bound,
        }


def _vec_sum(*vs: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(t) for t in zip(*vs))


def join(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    return tuple(max(a, b) for a, b in zip(p, q))


def reduced_pairs(k: int, bound: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Pairs (p, q) in N^k with min(p, q) = 0, p != q and |p| + |q| <= bound."""
    out = []
    if bound < 1:
        return out
    elems = grid_upto(k, bound)
    for p in elems:
        for q in elems:
            if p == q or sum(p) + sum(q) > bound:
                continue
            if any(min(a, b) for a, b in zip(p, q)):
                continue
            out.append((p, q))
    # by total size, then larger p first: (1,0), (0,1), (2,0), (0,2), ...
    out.sort(key=lambda pq: (sum(pq[0]) + sum(pq[1]), [-t for t in pq[0] + pq[1]]))
    return out


# ---------------------------------------------------------------------------
# effectivity


@dataclass(frozen=True)
class MidWitness:
    p: tuple[int, ...]
    q: tuple[int, ...]
    vertex: str
    a: tuple[int, ...]
    path: Path
    mid_p: Path
    mid_q: Path

    def verify(self, sys: KSystem) -> bool:
        pq = join(self.p, self.q)
        if self.path.range != self.vertex or self.path.degree != _vec_sum(pq, self.a):
            return False
        m1 = mid(sys, self.path, self.p, self.a)
        m2 = mid(sys, self.path, self.q, self.a)
        return m1 == self.mid_p and m2 == self.mid_q and m1 != m2

    def to_dict(self) -> dict[str, Any]:
        return {
            "p": list(self.p),
            "q": list(self.q),
            "vertex": self.vertex,
            "a": list(self.a),
            "path": list(self.path.edges),
            "mid_p": _path_repr(self.mid_p),
            "mid_q": _path_repr(self.mid_q),
        }


def _path_repr(y: Path) -> list[str]:
    return list(y.edges) if y.edges else [y.range]


def mid_witness(sys: KSystem, p, q, x: str, a) -> MidWitness | None:
    """A path of degree (p v q) + a with range x whose two degree-a middles differ.

    The middles start at offsets p and q from the range end. ``sys`` is
    expected to be restricted to its possible vertices already.
    """
    p, q, a = tuple(p), tuple(q), tuple(a)
    d = _vec_sum(join(p, q), a)
    plan_p = mid_plan(sys, d, p, a)
    plan_q = mid_plan(sys, d, q, a)
    for y in iter_paths(sys, d, x):
        if mid_cut(sys, y, plan_p) != mid_cut(sys, y, plan_q):
            return MidWitness(p, q, x, a, y, mid(sys, y, p, a), mid(sys, y, q, a))
    return None


@dataclass
class EffectivityResult:
    status: str
    witnesses: list[MidWitness] = field(default_factory=list)
    undetermined: list[dict[str, Any]] = field(default_factory=list)
    loops: list[dict[str, Any]] = field(default_factory=list)
    pair_bound: int = 0
    ext_bound: int = 0

    @property
    def effective(self) -> bool | None:
        if self.status in (EFFECTIVE_CERTIFIED, LIKELY_EFFECTIVE):
            return True
        if self.status == NOT_EFFECTIVE_CERTIFIED:
            return False
        return None

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status,
            "bounds": {"pair_bound": self.pair_bound, "ext_bound": self.ext_bound},
            "loops_without_entrances": self.loops,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "undetermined": self.undetermined,
        }


def bounded_witness_table(
    sys_r: KSystem, pair_bound: int, ext_bound: int
) -> tuple[list[MidWitness], list[dict[str, Any]]]:
    """Search every reduced pair and vertex; return (witnesses, stuck cases)."""
    witnesses = []
    stuck = []
    exts = grid_upto(sys_r.rank, ext_bound)
    # the test is symmetric in (p, q), and paths are scanned in the same order,
    # so the swapped pair has the same witness path with the middles exchanged
    done: dict[tuple, MidWitness | None] = {}
    for p, q in reduced_pairs(sys_r.rank, pair_bound):
        for x in sys_r.vertices:
            if (q, p, x) in done:
                prev = done[(q, p, x)]
                found = None if prev is None else MidWitness(
                    p, q, x, prev.a, prev.path, prev.mid_q, prev.mid_p)
            else:
                found = None
                for a in exts:
                    found = mid_witness(sys_r, p, q, x, a)
                    if found is not None:
                        break
            done[(p, q, x)] = found
            if found is None:
                stuck.append({"p": list(p), "q": list(q), "vertex": x, "ext_bound": ext_bound})
            else:
                witnesses.append(found)
    return witnesses, stuck


def loops_without_entrances(sys_r: KSystem) -> list[dict[str, Any]]:
    """Cycles of a rank-one system on which every vertex has in-degree one.

    Each cycle is reported starting from its first vertex in vertex order,
    following the unique incoming edge backwards.
    """
    if sys_r.rank != 1:
        raise ValueError("loops without entrances are only defined for rank 1")
    pred = {}
    for x in sys_r.vertices:
        into = sys_r.edges_into(1, x)
        if len(into) == 1:
            pred[x] = into[0]
    cycles = []
    done: set[str] = set()
    order = {v: i for i, v in enumerate(sys_r.vertices)}
    for x in sys_r.vertices:
        if x in done or x not in pred:
            continue
        walk = [x]
        cur = x
        while True:
            e = pred.get(cur)
            if e is None:
                break
            cur = e.source
            if cur == x:
                break
            if cur in walk or cur in done:
                cur = None
                break
            walk.append(cur)
        if cur == x:
            start = min(walk, key=order.__getitem__)
            i = walk.index(start)
            walk = walk[i:] + walk[:i]
            cycles.append({
                "vertices": walk,
                "edges": [pred[v].id for v in walk],
            })
            done.update(walk)
    return cycles


def effectivity(sys: KSystem, pair_bound: int = 4, ext_bound: int = 3) -> EffectivityResult:
    sys_r = restrict_to_possible(sys)
    witnesses, stuck = bounded_witness_table(sys_r, pair_bound, ext_bound)
    if sys.rank == 1:
        loops = loops_without_entrances(sys_r)
        status = NOT_EFFECTIVE_CERTIFIED if loops else EFFECTIVE_CERTIFIED
        return EffectivityResult(status, witnesses, stuck, loops, pair_bound, ext_bound)
    status = UNDETERMINED if stuck else LIKELY_EFFECTIVE
    return EffectivityResult(status, witnesses, stuck, [], pair_bound, ext_bound)


# ---------------------------------------------------------------------------
# local contractivity (product-form sufficient criterion, S = {x})


@dataclass(frozen=True)
class ContractionWitness:
    vertex: str
    p: tuple[int, ...]
    q: tuple[int, ...]
    w_p: tuple[Path, ...]
    w_q: tuple[Path, ...]
    gap: Path

    @property
    def a(self) -> tuple[int, ...]:
        return tuple(j - x for j, x in zip(join(self.p, self.q), self.p))

    @property
    def b(self) -> tuple[int, ...]:
        return tuple(j - x for j, x in zip(join(self.p, self.q), self.q))

    def verify(self, sys_r: KSystem) -> bool:
        """Re-check all clauses by direct enumeration in the restricted system."""
        if len({y.source for y in self.w_p}) != len(self.w_p):
            return False
        if len({y.source for y in self.w_q}) != len(self.w_q):
            return False
        if {y.source for y in self.w_p} != {y.source for y in self.w_q}:
            return False
        if any(y.range != self.vertex for y in self.w_q):
            return False
        if any(y.degree != self.p for y in self.w_p) or any(y.degree != self.q for y in self.w_q):
            return False
        d = join(self.p, self.q)
        ext_p = _extensions(sys_r, set(self.w_p), self.p, d)
        ext_q = _extensions(sys_r, set(self.w_q), self.q, d)
        return ext_p < ext_q and self.gap in ext_q and self.gap not in ext_p

    def to_dict(self) -> dict[str, Any]:
        return {
            "vertex": self.vertex,
            "p": list(self.p),
            "q": list(self.q),
            "a": list(self.a),
            "b": list(self.b),
            "W_p": [_path_repr(y) for y in self.w_p],
            "W_q": [_path_repr(y) for y in self.w_q],
            "gap": _path_repr(self.gap),
        }


def _extensions(sys_r: KSystem, w: set[Path], deg, d) -> set[Path]:
    """Degree-d paths whose degree-``deg`` ending lies in ``w``."""
    ranges = {y.range for y in w}
    out = set()
    for r in ranges:
        for y in iter_paths(sys_r, d, r):
            if segment(sys_r, y, deg)[0] in w:
                out.add(y)
    return out


def _contraction_at(sys_r: KSystem, x: str, deg_bound: int, set_bound: int) -> ContractionWitness | None:
    degs = grid_upto(sys_r.rank, deg_bound)
    by_source_cache: dict[tuple[int, ...], dict[str, list[Path]]] = {}

    def by_source(p) -> dict[str, list[Path]]:
        if p not in by_source_cache:
            table: dict[str, list[Path]] = {}
            for y in iter_paths(sys_r, p):
                table.setdefault(y.source, []).append(y)
            by_source_cache[p] = table
        return by_source_cache[p]

    pairs = [(p, q) for p in degs for q in degs if p != q]
    pairs.sort(key=lambda pq: (sum(pq[0]) + sum(pq[1]), [-t for t in pq[0] + pq[1]]))
    for p, q in pairs:
        d = join(p, q)
        paths_q = list(iter_paths(sys_r, q, x))
        for size in range(1, set_bound + 1):
            for w_q in itertools.combinations(paths_q, size):
                sources = [y.source for y in w_q]
                if len(set(sources)) != size:
                    continue
                choices = [by_source(p).get(s, []) for s in sources]
                if any(not c for c in choices):
                    continue
                ext_q = _extensions(sys_r, set(w_q), q, d)
                for w_p in itertools.product(*choices):
                    ext_p = _extensions(sys_r, set(w_p), p, d)
                    if ext_p < ext_q:
                        gap = min(ext_q - ext_p, key=lambda y: y.edges)
                        return ContractionWitness(x, p, q, tuple(w_p), tuple(w_q), gap)
    return None


@dataclass
class ContractivityResult:
    status: str                                     # HOLDS or UNKNOWN
    witnesses: dict[str, ContractionWitness]
    unknown_vertices: list[str]
    deg_bound: int
    set_bound: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status,
            "bounds": {"deg_bound": self.deg_bound, "set_bound": self.set_bound},
            "witnesses": {x: w.to_dict() for x, w in self.witnesses.items()},
            "unknown_vertices": self.unknown_vertices,
        }


def locally_contracting(sys: KSystem, deg_bound: int = 2, set_bound: int = 3) -> ContractivityResult:
    sys_r = restrict_to_possible(sys)
    found: dict[str, ContractionWitness] = {}
    missing = []
    for x in sys_r.vertices:
        w = _contraction_at(sys_r, x, deg_bound, set_bound)
        if w is None:
            missing.append(x)
        else:
            found[x] = w
    status = HOLDS if not missing and sys_r.vertices else "UNKNOWN"
    return ContractivityResult(status, found, missing, deg_bound, set_bound)


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class Verdict:
    value: str
    reasons: list[dict[str, Any]]
    bounds: dict[str, int]

    def to_dict(self) -> dict[str, Any]:
        return {"value": self.value, "reasons": self.reasons, "bounds": self.bounds}


def simplicity(
    sys: KSystem,
    bounds: Bounds = Bounds(),
    eff: EffectivityResult | None = None,
    minimal: ideals.Minimality | None = None,
) -> Verdict:
    """Simple iff amenable (always: G = Z^k), effective and minimal."""
    if eff is None:
        eff = effectivity(sys, bounds.pair_bound, bounds.ext_bound)
    if minimal is None:
        minimal = ideals.is_minimal(sys)
    reasons: list[dict[str, Any]] = [{"code": "AMENABLE", "ok": True, "detail": "G = Z^k is amenable"}]
    reasons.append({"code": "EFFECTIVITY", "ok": eff.effective, "detail": eff.status})
    if minimal.degenerate:
        reasons.append({"code": "DEGENERATE", "ok": False, "detail": "no possible vertices"})
    reasons.append({"code": "MINIMALITY", "ok": minimal.minimal})
    if minimal.degenerate or not minimal.minimal or eff.effective is False:
        value = NO
    elif eff.effective:
        value = YES
    else:
        value = UNKNOWN
        reasons[1]["exhausted"] = {"pair_bound": bounds.pair_bound, "ext_bound": bounds.ext_bound}
    return Verdict(value, reasons, bounds.to_dict())


def pure_infiniteness(
    sys: KSystem,
    bounds: Bounds = Bounds(),
    eff: EffectivityResult | None = None,
    contr: ContractivityResult | None = None,
) -> Verdict:
    """Yes when effective and locally contracting; otherwise unknown, never no."""
    if eff is None:
        eff = effectivity(sys, bounds.pair_bound, bounds.ext_bound)
    if contr is None:
        contr = locally_contracting(sys, bounds.deg_bound, bounds.set_bound)
    reasons = [
        {"code": "EFFECTIVITY", "ok": eff.effective, "detail": eff.status},
        {"code": "LOCALLY_CONTRACTING", "ok": contr.status == HOLDS, "detail": contr.status},
    ]
    value = YES if eff.effective and contr.status == HOLDS else UNKNOWN
    if value == UNKNOWN and contr.status != HOLDS:
        reasons[1]["exhausted"] = {"deg_bound": bounds.deg_bound, "set_bound": bounds.set_bound}
    return Verdict(value, reasons, bounds.to_dict())


def isotropy_warning(sys: KSystem) -> list[dict[str, Any]]:
    """Loops without entrances (rank one) -- where KMS states may carry isotropy atoms."""
    if sys.rank != 1 or not possible_vertices(sys):
        return []
    return loops_without_entrances(restrict_to_possible(sys))
