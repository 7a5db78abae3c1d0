"""Integer linear algebra and the K-group computations built on it.

Groups are computed from Smith normal forms: rank one uses the cokernel and
kernel of ``I - B^t``; rank two uses the Koszul complex of the two commuting
matrices ``I - B_1^t`` and ``I - B_2^t``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

from kgraph import _linalg
from kgraph.ksystem import KSystem

IntMatrix = list[list[int]]


class KTheoryError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Smith normal form


def _copy(m: Sequence[Sequence[int]]) -> IntMatrix:
    return [list(map(int, r)) for r in m]


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U @ M @ V == D, U and V unimodular.

    Pivots are the smallest nonzero absolute value in the remaining block,
    ties broken by (row, column). D has nonnegative diagonal entries forming a
    divisibility chain.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    d = _copy(m)
    u = _linalg.identity(rows)
    v = _linalg.identity(cols)

    def swap_rows(a: int, b: int) -> None:
        d[a], d[b] = d[b], d[a]
        u[a], u[b] = u[b], u[a]

    def swap_cols(a: int, b: int) -> None:
        for r in d:
            r[a], r[b] = r[b], r[a]
        for r in v:
            r[a], r[b] = r[b], r[a]

    def add_row(dst: int, src: int, f: int) -> None:
        # row dst += f * row src
        d[dst] = [x + f * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst: int, src: int, f: int) -> None:
        for r in d:
            r[dst] += f * r[src]
        for r in v:
            r[dst] += f * r[src]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = d[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            p = d[t][t]
            for i in range(t + 1, rows):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // p))
                    if d[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // p))
                    if d[t][j]:
                        done = False
            if done:
                # all of row/column t cleared; enforce divisibility of the rest
                bad = next(
                    ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                     if d[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                add_row(t, bad[0], 1)
                continue
            # a smaller remainder appeared; move the smallest entry of row/col t to the pivot
            cand = [(abs(d[i][t]), i, t) for i in range(t, rows) if d[i][t]]
            cand += [(abs(d[t][j]), t, j) for j in range(t, cols) if d[t][j]]
            _, i, j = min(cand)
            swap_rows(t, i)
            swap_cols(t, j)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, d, v


def is_unimodular(m: Sequence[Sequence[int]]) -> bool:
    return abs(_linalg.det_int(m)) == 1


def diagonal(d: Sequence[Sequence[int]]) -> list[int]:
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


# ---------------------------------------------------------------------------
# finitely generated abelian groups


@dataclass(frozen=True)
class AbelianGroupPresentation:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")
        if any(t < 2 for t in self.torsion):
            raise ValueError("torsion divisors must be >= 2")

    @classmethod
    def from_invariants(cls, free_rank: int, divisors: Iterable[int]) -> "AbelianGroupPresentation":
        """Normalise arbitrary cyclic factors Z/d (d = 0 means Z, d = 1 trivial)."""
        divs = [abs(int(x)) for x in divisors]
        extra_free = sum(1 for x in divs if x == 0)
        divs = [x for x in divs if x > 1]
        if not divs:
            return cls(free_rank + extra_free, ())
        _, dd, _ = smith_normal_form([[x if i == j else 0 for j in range(len(divs))]
                                      for i, x in enumerate(divs)])
        chain = tuple(x for x in diagonal(dd) if x > 1)
        return cls(free_rank + extra_free, chain)

    @classmethod
    def cokernel(cls, m: Sequence[Sequence[int]], rows: int | None = None) -> "AbelianGroupPresentation":
        """Z^rows / image(m), for m with ``rows`` rows."""
        if rows is None:
            rows = len(m)
        if rows == 0:
            return cls(0)
        if not m or not m[0]:
            return cls(rows)
        _, d, _ = smith_normal_form(m)
        diag = diagonal(d)
        nonzero = [x for x in diag if x]
        return cls.from_invariants(rows - len(nonzero), nonzero)

    def __add__(self, other: "AbelianGroupPresentation") -> "AbelianGroupPresentation":
        return AbelianGroupPresentation.from_invariants(
            self.free_rank + other.free_rank, self.torsion + other.torsion
        )

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def format(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " ⊕ ".join(parts) if parts else "0"

    def to_dict(self) -> dict[str, Any]:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion), "text": self.format()}


def kernel_basis(m: Sequence[Sequence[int]], cols: int) -> IntMatrix:
    """Integer basis of {x in Z^cols : m x = 0}, as the columns of the result."""
    if not m or not m[0]:
        return _linalg.identity(cols)
    _, d, v = smith_normal_form(m)
    r = sum(1 for x in diagonal(d) if x)
    return [row[r:] for row in v]


def _solve_in_basis(k: IntMatrix, target: IntMatrix) -> IntMatrix:
    """C with k @ C == target, where k has full column rank and target lies in its span."""
    rows = len(k)
    kc = len(k[0]) if rows else 0
    tc = len(target[0]) if target else 0
    if kc == 0:
        return []
    u, d, v = smith_normal_form(k)
    ut = _linalg.matmul(u, target)
    y = []
    for i in range(kc):
        if d[i][i] == 0:
            raise KTheoryError("kernel basis is rank deficient")
        row = []
        for j in range(tc):
            q, r = divmod(ut[i][j], d[i][i])
            if r:
                raise KTheoryError("target is not in the integer span")
            row.append(q)
        y.append(row)
    for i in range(kc, rows):
        if any(ut[i]):
            raise KTheoryError("target is not in the span")
    return _linalg.matmul(v, y)


# ---------------------------------------------------------------------------
# K-groups


def _i_minus_bt(b: Sequence[Sequence[int]]) -> IntMatrix:
    n = len(b)
    return [[int(i == j) - b[j][i] for j in range(n)] for i in range(n)]


def k_rank1(sys: KSystem) -> tuple[AbelianGroupPresentation, AbelianGroupPresentation]:
    if sys.rank != 1:
        raise KTheoryError(f"k_rank1 needs rank 1, got {sys.rank}")
    n = len(sys.vertices)
    m = _i_minus_bt(sys.adjacency(1))
    k0 = AbelianGroupPresentation.cokernel(m, n)
    if n == 0:
        return k0, AbelianGroupPresentation(0)
    _, d, _ = smith_normal_form(m)
    nullity = n - sum(1 for x in diagonal(d) if x)
    return k0, AbelianGroupPresentation(nullity)


def koszul_boundaries(b1: Sequence[Sequence[int]], b2: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """(d1, d2): d1 = [I - B1^t, I - B2^t] (n x 2n), d2 = [-(I - B2^t); I - B1^t] (2n x n)."""
    m1 = _i_minus_bt(b1)
    m2 = _i_minus_bt(b2)
    d1 = [r1 + r2 for r1, r2 in zip(m1, m2)]
    d2 = [[-x for x in r] for r in m2] + [list(r) for r in m1]
    return d1, d2


@dataclass(frozen=True)
class KGroups:
    k0: AbelianGroupPresentation
    k1: AbelianGroupPresentation
    method: str

    def to_dict(self) -> dict[str, Any]:
        return {"K0": self.k0.to_dict(), "K1": self.k1.to_dict(), "method": self.method}


def k_rank2_from_matrices(b1, b2) -> KGroups:
    n = len(b1)
    if n == 0:
        z = AbelianGroupPresentation(0)
        return KGroups(z, z, "Koszul homology")
    d1, d2 = koszul_boundaries(b1, b2)
    if any(any(r) for r in _linalg.matmul(d1, d2)):
        raise KTheoryError("d1 d2 != 0: the adjacency matrices do not commute")
    h0 = AbelianGroupPresentation.cokernel(d1, n)
    _, dd2, _ = smith_normal_form(d2)
    h2 = AbelianGroupPresentation(n - sum(1 for x in diagonal(dd2) if x))
    kb = kernel_basis(d1, 2 * n)
    if not kb or not kb[0]:
        h1 = AbelianGroupPresentation(0)
    else:
        c = _solve_in_basis(kb, d2)
        h1 = AbelianGroupPresentation.cokernel(c, len(kb[0]))
    return KGroups(h0 + h2, h1, "Koszul homology")


def k_rank2(sys: KSystem) -> KGroups:
    if sys.rank != 2:
        raise KTheoryError(f"k_rank2 needs rank 2, got {sys.rank}")
    b1, b2 = sys.adjacency_matrices()
    return k_rank2_from_matrices(b1, b2)


def k_groups(sys: KSystem) -> KGroups:
    if sys.rank == 1:
        k0, k1 = k_rank1(sys)
        return KGroups(k0, k1, "cokernel/kernel of I - B^t")
    if sys.rank == 2:
        return k_rank2(sys)
    raise KTheoryError(
        f"no determined procedure for rank {sys.rank}: the boundary maps beyond rank 2 "
        "are not fixed by the adjacency data"
    )


# ---------------------------------------------------------------------------
# unit fibre colimit


@dataclass(frozen=True)
class ColimitPresentation:
    lattice_rank: int
    transition: tuple[tuple[int, ...], ...]
    eventual_rank: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "lattice_rank": self.lattice_rank,
            "transition": [list(r) for r in self.transition],
            "eventual_rank": self.eventual_rank,
            "chain": "n(1,...,1)",
        }


def unit_fibre_k0(sys: KSystem) -> ColimitPresentation:
    """Z^X -> Z^X -> ... along the diagonal chain, with transition (B_1...B_k)^t."""
    n = len(sys.vertices)
    prod = _linalg.identity(n)
    for b in sys.adjacency_matrices():
        prod = _linalg.matmul(prod, b)
    t = _linalg.transpose(prod) if n else []
    ev = _linalg.rank(_linalg.matpow(t, n)) if n else 0
    return ColimitPresentation(n, tuple(tuple(r) for r in t), ev)


# ---------------------------------------------------------------------------
# Laurent polynomials


Exponent = tuple[int, ...]


@dataclass(frozen=True)
class LaurentPoly:
    nvars: int
    terms: tuple[tuple[Exponent, int], ...]

    @classmethod
    def make(cls, nvars: int, coeffs: Mapping[Exponent, int]) -> "LaurentPoly":
        items = []
        for e, c in coeffs.items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
            if c:
                items.append((e, int(c)))
        return cls(nvars, tuple(sorted(items)))

    @classmethod
    def const(cls, nvars: int, c: int) -> "LaurentPoly":
        return cls.make(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int, power: int = 1) -> "LaurentPoly":
        e = [0] * nvars
        e[i] = power
        return cls.make(nvars, {tuple(e): 1})

    def as_dict(self) -> dict[Exponent, int]:
        return dict(self.terms)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        d = self.as_dict()
        for e, c in other.terms:
            d[e] = d.get(e, 0) + c
        return LaurentPoly.make(self.nvars, d)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.nvars, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        return laurent_mul(self, other)

    def is_zero(self) -> bool:
        return not self.terms

    def to_dict(self) -> list[dict[str, Any]]:
        return [{"exponent": list(e), "coeff": c} for e, c in self.terms]


def laurent_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    if p.nvars != q.nvars:
        raise ValueError("variable count mismatch")
    out: dict[Exponent, int] = {}
    for e1, c1 in p.terms:
        for e2, c2 in q.terms:
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return LaurentPoly.make(p.nvars, out)


def laurent_eval_ones(p: LaurentPoly) -> int:
    return sum(c for _, c in p.terms)


def _power_minus_one_quotient(m: int, i: int, nvars: int) -> LaurentPoly:
    """h with x_i^m - 1 = (x_i - 1) h."""
    if m == 0:
        return LaurentPoly.const(nvars, 0)
    if m > 0:
        return LaurentPoly.make(nvars, {tuple(t if j == i else 0 for j in range(nvars)): 1
                                         for t in range(m)})
    # x^m - 1 = -x^m (x^{-m} - 1)
    inner = _power_minus_one_quotient(-m, i, nvars)
    return -(LaurentPoly.var(nvars, i, m) * inner)


def ideal_certificate(p: LaurentPoly) -> list[LaurentPoly]:
    """q_1..q_m with p - p(1,...,1) = sum_i (1 - x_i) q_i.

    Each monomial is telescoped one variable at a time:
    x^e - 1 = sum_i x_1^{e_1}..x_{i-1}^{e_{i-1}} (x_i^{e_i} - 1).
    """
    n = p.nvars
    qs: list[dict[Exponent, int]] = [{} for _ in range(n)]
    for e, c in p.terms:
        for i in range(n):
            if e[i] == 0:
                continue
            prefix = LaurentPoly.make(n, {tuple(e[j] if j < i else 0 for j in range(n)): 1})
            # (x_i^m - 1) = (x_i - 1) h = (1 - x_i)(-h)
            h = prefix * _power_minus_one_quotient(e[i], i, n)
            for ee, cc in h.terms:
                qs[i][ee] = qs[i].get(ee, 0) - c * cc
    return [LaurentPoly.make(n, q) for q in qs]


def verify_certificate(p: LaurentPoly, qs: Sequence[LaurentPoly]) -> bool:
    n = p.nvars
    total = LaurentPoly.const(n, laurent_eval_ones(p))
    for i, q in enumerate(qs):
        one_minus = LaurentPoly.const(n, 1) - LaurentPoly.var(n, i)
        total = total + one_minus * q
    return total == p


def _generator_battery(m: int) -> list[LaurentPoly]:
    polys = [LaurentPoly.const(m, 1), LaurentPoly.const(m, 5)]
    for i in range(m):
        polys.append(LaurentPoly.var(m, i))
        polys.append(LaurentPoly.var(m, i, -1))
        polys.append(LaurentPoly.var(m, i, 3) + LaurentPoly.const(m, 2))
    for i, j in itertools.combinations(range(m), 2):
        polys.append(LaurentPoly.var(m, i) * LaurentPoly.var(m, j, -1))
        polys.append(LaurentPoly.var(m, i, 2) * LaurentPoly.var(m, j) - LaurentPoly.var(m, j, -2))
    # a dense mixed-sign element
    mixed = {}
    for k, e in enumerate(itertools.product((-1, 0, 2), repeat=m)):
        mixed[e] = (k % 5) - 2
    polys.append(LaurentPoly.make(m, mixed))
    return polys


def _regularity_samples(m: int) -> list[dict[str, Any]]:
    """Multiply sampled nonzero Laurent polynomials in x_{i+1}..x_m by (1 - x_{i+1}).

    In the quotient by (1 - x_1, ..., 1 - x_i) such elements are represented by
    polynomials in the remaining variables; a zero product would break the
    regular sequence.
    """
    out = []
    for i in range(m):
        rest = list(range(i, m))
        samples = [
            LaurentPoly.var(m, i) + LaurentPoly.const(m, 2),
            LaurentPoly.var(m, i, -1) - LaurentPoly.var(m, rest[-1], 2),
            LaurentPoly.const(m, 1),
        ]
        factor = LaurentPoly.const(m, 1) - LaurentPoly.var(m, i)
        for s in samples:
            prod = factor * s
            out.append({"variable": i + 1, "sample": s.to_dict(), "nonzero": not prod.is_zero()})
    return out


@dataclass
class DRK0Report:
    n: int
    certificates_ok: bool
    unit_maps_to_one: bool
    regularity_ok: bool
    samples: int

    @property
    def confirmed(self) -> bool:
        return self.certificates_ok and self.unit_maps_to_one and self.regularity_ok

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "quotient": "Z" if self.confirmed else "unconfirmed",
            "certificates_ok": self.certificates_ok,
            "unit_maps_to_one": self.unit_maps_to_one,
            "regularity_ok": self.regularity_ok,
            "samples": self.samples,
        }


def dr_k0_check(n: int, max_n: int = 8) -> DRK0Report:
    """Check Z[x_1^{+-1},...,x_{n-1}^{+-1}] / (1 - x_i) = Z via evaluation at 1."""
    if not 2 <= n <= max_n:
        raise ValueError(f"n must be in 2..{max_n}")
    m = n - 1
    battery = _generator_battery(m)
    certs_ok = all(verify_certificate(p, ideal_certificate(p)) for p in battery)
    unit = laurent_eval_ones(LaurentPoly.const(m, 1)) == 1
    reg = _regularity_samples(m)
    return DRK0Report(n, certs_ok, unit, all(s["nonzero"] for s in reg), len(battery) + len(reg))
