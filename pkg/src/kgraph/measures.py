"""c-invariant measures on the vertex set, traces and stable finiteness.

A measure is a nonnegative vertex function with ``lam = c_i * B_i lam`` for
every colour; checking the generators is enough because the relation for a
general degree is the product of the single-colour ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from kgraph import _linalg, _lp
from kgraph.ksystem import KSystem, possible_vertices


@dataclass(frozen=True)
class Cocycle:
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if any(Fraction(v) <= 0 for v in self.values):
            raise ValueError("cocycle values must be positive")

    @classmethod
    def of(cls, values: Sequence) -> "Cocycle":
        return cls(tuple(Fraction(v) for v in values))

    @classmethod
    def trace(cls, k: int) -> "Cocycle":
        return cls((Fraction(1),) * k)

    @classmethod
    def parse(cls, text: str) -> "Cocycle":
        """Comma separated rationals, e.g. ``1/2,1/3``."""
        try:
            return cls.of([Fraction(t.strip()) for t in text.split(",")])
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad cocycle {text!r}: {exc}") from exc

    def at(self, p: Sequence[int]) -> Fraction:
        out = Fraction(1)
        for c, e in zip(self.values, p):
            out *= c ** e
        return out

    def format(self) -> list[str]:
        return [str(v) for v in self.values]


@dataclass
class MeasureResult:
    cocycle: Cocycle
    vertices: tuple[str, ...]
    basis: list[list[Fraction]]
    representative: list[Fraction] | None

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def to_dict(self) -> dict[str, Any]:
        rep = None
        if self.representative is not None:
            rep = {v: str(x) for v, x in zip(self.vertices, self.representative)}
        return {
            "c": self.cocycle.format(),
            "dimension": self.dimension,
            "basis": [[str(x) for x in vec] for vec in self.basis],
            "representative": rep,
        }


def _relation_matrix(sys: KSystem, c: Cocycle) -> list[list[Fraction]]:
    n = len(sys.vertices)
    rows = []
    for ci, b in zip(c.values, sys.adjacency_matrices()):
        for x in range(n):
            rows.append([Fraction(int(x == y)) - ci * b[x][y] for y in range(n)])
    return rows


def is_invariant(sys: KSystem, c: Cocycle, lam: Sequence) -> bool:
    lam = [Fraction(x) for x in lam]
    for ci, b in zip(c.values, sys.adjacency_matrices()):
        if [ci * v for v in _linalg.matvec(b, lam)] != lam:
            return False
    return True


def invariant_measures(sys: KSystem, c: Cocycle | Sequence) -> MeasureResult:
    """Rational basis of the solution space and the lexicographically least
    probability vector in it (if any nonnegative nonzero solution exists)."""
    if not isinstance(c, Cocycle):
        c = Cocycle.of(c)
    if len(c.values) != sys.rank:
        raise ValueError(f"cocycle needs {sys.rank} values, got {len(c.values)}")
    n = len(sys.vertices)
    if n == 0:
        return MeasureResult(c, sys.vertices, [], None)
    a = _relation_matrix(sys, c)
    basis = _linalg.nullspace(a, n)
    rep = None
    if len(basis) == 1:
        # a line: feasible iff the basis vector has one sign
        v = basis[0]
        if all(x >= 0 for x in v) or all(x <= 0 for x in v):
            total = sum(v)
            rep = [x / total for x in v]
    elif basis:
        eqs = [list(r) for r in _linalg.rref(a)[0] if any(r)]
        rhs = [Fraction(0)] * len(eqs)
        eqs.append([Fraction(1)] * n)
        rhs.append(Fraction(1))
        try:
            rep = _lp.lexmin(eqs, rhs, n)
        except _lp.Infeasible:
            rep = None
    return MeasureResult(c, sys.vertices, basis, rep)


def tracial_states(sys: KSystem) -> MeasureResult:
    return invariant_measures(sys, Cocycle.trace(sys.rank))


def stably_finite(sys: KSystem, traces: MeasureResult | None = None) -> dict[str, Any]:
    if not possible_vertices(sys):
        return {"value": "no", "reasons": [{"code": "DEGENERATE_EMPTY",
                                            "detail": "no possible vertices"}]}
    if traces is None:
        traces = tracial_states(sys)
    if traces.representative is None:
        return {"value": "no", "reasons": [{"code": "NO_TRACIAL_STATE"}]}
    return {"value": "yes", "reasons": [{"code": "TRACIAL_STATE", "detail": traces.to_dict()["representative"]}]}


@dataclass(frozen=True)
class CriticalEstimate:
    color: int
    spectral_radius: float
    c: float
    residual: float
    converged: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "color": self.color,
            "spectral_radius": self.spectral_radius,
            "c": self.c,
            "residual": self.residual,
            "converged": self.converged,
        }


def _power_iteration(b: list[list[int]], tol: float, max_iter: int) -> tuple[float, float, bool]:
    # iterate with B + I, whose Perron root is rho(B) + 1 and is strictly dominant
    # on each irreducible block, so periodic matrices converge too
    n = len(b)
    v = [1.0] * n
    rho = 0.0
    residual = math.inf
    for _ in range(max_iter):
        w = [sum(b[i][j] * v[j] for j in range(n)) + v[i] for i in range(n)]
        norm = max(abs(x) for x in w)
        if norm == 0:
            return 0.0, 0.0, True
        rho = norm / max(abs(x) for x in v)
        w = [x / norm for x in w]
        residual = max(
            abs(sum(b[i][j] * w[j] for j in range(n)) + w[i] - rho * w[i]) for i in range(n)
        )
        v = w
        if residual < tol:
            return rho - 1.0, residual, True
    return rho - 1.0, residual, False


def suggest_critical_c(sys: KSystem, tolerance: float = 1e-10, max_iter: int = 100000) -> list[CriticalEstimate]:
    """Floating estimates of 1/rho(B_i); advisory only."""
    out = []
    for color, b in enumerate(sys.adjacency_matrices(), start=1):
        if not any(any(r) for r in b):
            raise ValueError(f"colour {color} has no edges")
        if not any(any(r) for r in _linalg.matpow(b, len(b))):
            # nilpotent: the radius is exactly zero, and power iteration would crawl
            out.append(CriticalEstimate(color, 0.0, math.inf, 0.0, True))
            continue
        rho, res, ok = _power_iteration(b, tolerance, max_iter)
        c = 1.0 / rho if rho > 0 else math.inf
        out.append(CriticalEstimate(color, rho, c, res, ok))
    return out
