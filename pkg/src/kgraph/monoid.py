"""Ore monoids: products, Ore-condition checks, common multiples, fractions.

Four concrete monoids are supported:

* :class:`GridNk` -- ``(N^k, +)``, elements are k-tuples of naturals;
* :class:`Heisenberg` -- upper unitriangular 3x3 matrices ``h(a, b, c)``
  with natural entries, elements are triples ``(a, b, c)``;
* :class:`FreeWords` -- the free monoid on ``n`` letters, elements are
  tuples of letter indices ``0..n-1`` (printed ``a1, a2, ...``);
* :class:`FiniteTable` -- a finite monoid given by its multiplication table.

All searches walk elements in a fixed order so that witnesses are
reproducible.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Hashable, Iterable, Iterator, Sequence

Element = Hashable

HOLDS = "holds"
FAILS = "fails"
EXHAUSTED = "exhausted"


class MonoidError(ValueError):
    """Invalid monoid data or element."""


class NotOreError(ArithmeticError):
    """A common multiple needed for a fraction operation does not exist."""


class OreMonoid:
    """Base class; subclasses implement the monoid structure."""

    kind = "abstract"

    @property
    def unit(self) -> Element:
        raise NotImplementedError

    def check_element(self, a: Element) -> Element:
        return a

    def multiply(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def common_multiple(self, x1: Element, x2: Element) -> tuple[Element, Element] | None:
        raise NotImplementedError

    def random_element(self, rng: random.Random, size: int = 4) -> Element:
        raise NotImplementedError

    def is_cancellative(self) -> bool:
        raise NotImplementedError

    def format(self, a: Element) -> str:
        return str(a)

    def describe(self) -> dict[str, Any]:
        return {"kind": self.kind}


@dataclass(frozen=True)
class GridNk(OreMonoid):
    k: int
    kind = "nk"

    def __post_init__(self) -> None:
        if self.k < 1:
            raise MonoidError("GridNk needs k >= 1")

    @property
    def unit(self) -> tuple[int, ...]:
        return (0,) * self.k

    def check_element(self, a: Element) -> tuple[int, ...]:
        if not isinstance(a, tuple) or len(a) != self.k or any(
            not isinstance(x, int) or x < 0 for x in a
        ):
            raise MonoidError(f"{a!r} is not an element of N^{self.k}")
        return a

    def multiply(self, a, b):
        a, b = self.check_element(a), self.check_element(b)
        return tuple(x + y for x, y in zip(a, b))

    def common_multiple(self, x1, x2):
        x1, x2 = self.check_element(x1), self.check_element(x2)
        join = tuple(max(u, v) for u, v in zip(x1, x2))
        return (
            tuple(j - u for j, u in zip(join, x1)),
            tuple(j - v for j, v in zip(join, x2)),
        )

    def random_element(self, rng, size=4):
        return tuple(rng.randint(0, size) for _ in range(self.k))

    def is_cancellative(self) -> bool:
        return True

    def describe(self):
        return {"kind": self.kind, "k": self.k}


@dataclass(frozen=True)
class Heisenberg(OreMonoid):
    """The monoid H_N of matrices [[1, a, c], [0, 1, b], [0, 0, 1]], a, b, c >= 0."""

    kind = "heisenberg"

    @property
    def unit(self) -> tuple[int, int, int]:
        return (0, 0, 0)

    def check_element(self, a):
        if not isinstance(a, tuple) or len(a) != 3 or any(
            not isinstance(x, int) or x < 0 for x in a
        ):
            raise MonoidError(f"{a!r} is not an element of H_N")
        return a

    def multiply(self, a, b):
        a1, b1, c1 = self.check_element(a)
        a2, b2, c2 = self.check_element(b)
        return (a1 + a2, b1 + b2, c1 + c2 + a1 * b2)

    def common_multiple(self, x1, x2):
        a1, b1, c1 = self.check_element(x1)
        a2, b2, c2 = self.check_element(x2)
        a = max(a1, a2)
        b = max(b1, b2)
        c = max(c1 + a1 * (b - b1), c2 + a2 * (b - b2))
        ys = []
        for ai, bi, ci in ((a1, b1, c1), (a2, b2, c2)):
            bb = b - bi
            ys.append((a - ai, bb, c - ci - ai * bb))
        return ys[0], ys[1]

    def random_element(self, rng, size=4):
        return (rng.randint(0, size), rng.randint(0, size), rng.randint(0, size))

    def is_cancellative(self) -> bool:
        return True

    def format(self, a):
        return "h({},{},{})".format(*a)


@dataclass(frozen=True)
class FreeWords(OreMonoid):
    """Free monoid on ``n`` letters; not Ore for n >= 2."""

    n: int
    kind = "free"

    def __post_init__(self) -> None:
        if self.n < 1:
            raise MonoidError("FreeWords needs n >= 1")

    @property
    def unit(self) -> tuple[int, ...]:
        return ()

    def check_element(self, a):
        if not isinstance(a, tuple) or any(
            not isinstance(x, int) or not 0 <= x < self.n for x in a
        ):
            raise MonoidError(f"{a!r} is not a word over {self.n} letters")
        return a

    def letter(self, i: int) -> tuple[int, ...]:
        return (i,)

    def multiply(self, a, b):
        return self.check_element(a) + self.check_element(b)

    def common_multiple(self, x1, x2):
        x1, x2 = self.check_element(x1), self.check_element(x2)
        if x2[: len(x1)] == x1:
            return x2[len(x1):], ()
        if x1[: len(x2)] == x2:
            return (), x1[len(x2):]
        return None

    def random_element(self, rng, size=4):
        return tuple(rng.randrange(self.n) for _ in range(rng.randint(0, size)))

    def is_cancellative(self) -> bool:
        return True

    def format(self, a):
        return "·".join(f"a{i + 1}" for i in a) or "1"

    def describe(self):
        return {"kind": self.kind, "n": self.n}


@dataclass(frozen=True)
class FiniteTable(OreMonoid):
    """Finite monoid on ``0..n-1``; ``table[i][j]`` is the product ``i·j``."""

    table: tuple[tuple[int, ...], ...]
    unit_index: int
    kind = "table"

    def __post_init__(self) -> None:
        n = len(self.table)
        if n == 0:
            raise MonoidError("empty carrier")
        for row in self.table:
            if len(row) != n or any(not 0 <= x < n for x in row):
                raise MonoidError("table is not an n x n array of indices below n")
        u = self.unit_index
        if not 0 <= u < n:
            raise MonoidError(f"unit index {u} outside carrier")
        for i in range(n):
            if self.table[u][i] != i or self.table[i][u] != i:
                raise MonoidError(f"{u} is not a two-sided unit (fails at {i})")
        t = self.table
        for a, b, c in itertools.product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise MonoidError(f"not associative at ({a}, {b}, {c})")

    @property
    def size(self) -> int:
        return len(self.table)

    @property
    def unit(self) -> int:
        return self.unit_index

    def elements(self) -> range:
        return range(self.size)

    def check_element(self, a):
        if not isinstance(a, int) or not 0 <= a < self.size:
            raise MonoidError(f"{a!r} is not in the carrier 0..{self.size - 1}")
        return a

    def multiply(self, a, b):
        return self.table[self.check_element(a)][self.check_element(b)]

    def common_multiple(self, x1, x2):
        x1, x2 = self.check_element(x1), self.check_element(x2)
        t = self.table
        for y1 in self.elements():
            for y2 in self.elements():
                if t[x1][y1] == t[x2][y2]:
                    return y1, y2
        return None

    def equalizer(self, y1: int, y2: int) -> int | None:
        t = self.table
        for z in self.elements():
            if t[y1][z] == t[y2][z]:
                return z
        return None

    def random_element(self, rng, size=4):
        return rng.randrange(self.size)

    def is_cancellative(self) -> bool:
        t = self.table
        for x, y1, y2 in itertools.product(self.elements(), repeat=3):
            if y1 != y2 and (t[x][y1] == t[x][y2] or t[y1][x] == t[y2][x]):
                return False
        return True

    def describe(self):
        return {"kind": self.kind, "size": self.size, "unit": self.unit_index}


def load_table(path: str | Path) -> FiniteTable:
    """Read a finite monoid from a text table.

    Layout: a line ``unit <index>`` (may come first or right after the size),
    a line holding the carrier size ``n``, then ``n`` rows of ``n`` indices.
    Blank lines and ``#`` comments are ignored.
    """
    return parse_table(Path(path).read_text(encoding="utf-8"))


def parse_table(text: str) -> FiniteTable:
    unit = None
    numeric: list[list[int]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("unit"):
            try:
                unit = int(line.split()[1])
            except (IndexError, ValueError) as exc:
                raise MonoidError(f"bad unit line: {raw!r}") from exc
            continue
        try:
            numeric.append([int(tok) for tok in line.replace(",", " ").split()])
        except ValueError as exc:
            raise MonoidError(f"non-integer entry in line {raw!r}") from exc
    if unit is None:
        raise MonoidError("missing 'unit <index>' header line")
    if not numeric or len(numeric[0]) != 1:
        raise MonoidError("first table line must hold the carrier size")
    n = numeric[0][0]
    rows = numeric[1:]
    if len(rows) != n:
        raise MonoidError(f"expected {n} table rows, found {len(rows)}")
    return FiniteTable(tuple(tuple(r) for r in rows), unit)


# ---------------------------------------------------------------------------
# module-level operations


def multiply(m: OreMonoid, a: Element, b: Element) -> Element:
    return m.multiply(a, b)


def common_multiple(m: OreMonoid, x1: Element, x2: Element) -> tuple[Element, Element] | None:
    """Return ``(y1, y2)`` with ``x1·y1 == x2·y2``, or ``None`` if there is none.

    The returned pair is re-multiplied before it is handed back.
    """
    pair = m.common_multiple(x1, x2)
    if pair is not None:
        y1, y2 = pair
        if m.multiply(x1, y1) != m.multiply(x2, y2):
            raise AssertionError(f"common multiple certificate failed for {x1!r}, {x2!r}")
    return pair


@dataclass(frozen=True)
class CheckResult:
    status: str
    witness: tuple | None = None
    rule: str = ""
    checked: int = 0

    def to_dict(self, m: OreMonoid) -> dict[str, Any]:
        out: dict[str, Any] = {"status": self.status, "checked": self.checked}
        if self.rule:
            out["rule"] = self.rule
        if self.witness is not None:
            out["witness"] = [m.format(w) for w in self.witness]
        return out


@dataclass(frozen=True)
class OreReport:
    o1: CheckResult
    o2: CheckResult
    cancellative: bool

    @property
    def is_ore(self) -> bool:
        return self.o1.status == HOLDS and self.o2.status == HOLDS

    def to_dict(self, m: OreMonoid) -> dict[str, Any]:
        return {
            "monoid": m.describe(),
            "o1": self.o1.to_dict(m),
            "o2": self.o2.to_dict(m),
            "cancellative": self.cancellative,
            "ore": self.is_ore,
        }


def check_ore(m: OreMonoid, sample_budget: int = 200, rng_seed: int = 0) -> OreReport:
    """Decide (O1) and (O2).

    Finite tables are decided exhaustively. For the infinite monoids the
    constructive rule is applied to ``sample_budget`` seeded random inputs and
    each produced witness is re-verified.
    """
    if isinstance(m, FiniteTable):
        return _check_ore_table(m)
    if isinstance(m, FreeWords):
        if m.n >= 2:
            a1, a2 = m.letter(0), m.letter(1)
            o1 = CheckResult(FAILS, (a1, a2), rule="distinct first letters")
        else:
            o1 = CheckResult(HOLDS, rule="one letter: prefix order is total")
        o2 = CheckResult(HOLDS, rule="cancellative: z = 1")
        return OreReport(o1, o2, True)

    rng = random.Random(rng_seed)
    first = None
    for _ in range(sample_budget):
        x1, x2 = m.random_element(rng), m.random_element(rng)
        y1, y2 = common_multiple(m, x1, x2)
        if first is None:
            first = (x1, x2, y1, y2)
    rule = "commutative join" if isinstance(m, GridNk) else "max formula for a, b, c"
    o1 = CheckResult(HOLDS, first, rule=rule, checked=sample_budget)
    # cancellative monoids satisfy (O2) with z = 1
    o2 = CheckResult(HOLDS, rule="cancellative: z = 1")
    return OreReport(o1, o2, m.is_cancellative())


def _check_ore_table(m: FiniteTable) -> OreReport:
    t = m.table
    els = list(m.elements())
    o1 = CheckResult(HOLDS, rule="exhaustive", checked=len(els) ** 2)
    for x1 in els:
        for x2 in els:
            if m.common_multiple(x1, x2) is None:
                o1 = CheckResult(FAILS, (x1, x2), rule="exhaustive")
                break
        if o1.status == FAILS:
            break
    o2 = CheckResult(HOLDS, rule="exhaustive", checked=len(els) ** 3)
    for x, y1, y2 in itertools.product(els, repeat=3):
        if t[x][y1] == t[x][y2] and m.equalizer(y1, y2) is None:
            o2 = CheckResult(FAILS, (x, y1, y2), rule="exhaustive")
            break
    return OreReport(o1, o2, m.is_cancellative())


# ---------------------------------------------------------------------------
# fractions p q^{-1}


@dataclass(frozen=True)
class Fraction:
    """The formal quotient ``numerator · denominator^{-1}`` in the group completion."""

    numerator: Element
    denominator: Element


def _require_cm(m: OreMonoid, x1: Element, x2: Element) -> tuple[Element, Element]:
    pair = common_multiple(m, x1, x2)
    if pair is None:
        raise NotOreError(f"no common multiple of {m.format(x1)} and {m.format(x2)}")
    return pair


def fraction_eq(m: OreMonoid, f1: Fraction, f2: Fraction) -> bool:
    """``(p1, q1) ~ (p2, q2)`` iff ``(p1 t1, q1 t1) == (p2 t2, q2 t2)`` for some t1, t2."""
    p1, q1 = f1.numerator, f1.denominator
    p2, q2 = f2.numerator, f2.denominator
    if isinstance(m, FiniteTable):
        t = m.table
        return any(
            t[p1][t1] == t[p2][t2] and t[q1][t1] == t[q2][t2]
            for t1 in m.elements()
            for t2 in m.elements()
        )
    if not m.is_cancellative():
        raise MonoidError("fraction_eq needs a cancellative or finite monoid")
    # bring both to a common denominator; then cancellation decides
    t1, t2 = _require_cm(m, q1, q2)
    return m.multiply(p1, t1) == m.multiply(p2, t2)


def fraction_mul(m: OreMonoid, f1: Fraction, f2: Fraction) -> Fraction:
    """``[p1, q1]·[p2, q2] = [p1 t1, q2 t2]`` where ``q1 t1 = p2 t2``."""
    t1, t2 = _require_cm(m, f1.denominator, f2.numerator)
    return Fraction(m.multiply(f1.numerator, t1), m.multiply(f2.denominator, t2))


def fraction_inv(f: Fraction) -> Fraction:
    return Fraction(f.denominator, f.numerator)


def fraction_unit(m: OreMonoid) -> Fraction:
    return Fraction(m.unit, m.unit)


# ---------------------------------------------------------------------------
# cofinal chains


@dataclass(frozen=True)
class CofinalChain:
    chain: tuple            # p_0 = unit, p_1, ..., p_N
    steps: tuple            # q_i with p_{i+1} = p_i · q_i
    certificates: tuple     # (e_i, r_i, j) with e_i · r_i = p_j

    def verify(self, m: OreMonoid) -> bool:
        if self.chain[0] != m.unit:
            return False
        for i, q in enumerate(self.steps):
            if m.multiply(self.chain[i], q) != self.chain[i + 1]:
                return False
        return all(m.multiply(e, r) == self.chain[j] for e, r, j in self.certificates)


def cofinal_chain(m: OreMonoid, enumeration: Sequence[Element], length: int) -> CofinalChain:
    """Build ``p_0 = 1, ..., p_N`` with each enumerated ``e_i`` left-dividing ``p_{i+1}``."""
    if length > len(enumeration):
        raise ValueError("enumeration shorter than requested chain length")
    chain = [m.unit]
    steps = []
    certs = []
    for i in range(length):
        e = enumeration[i]
        y1, y2 = _require_cm(m, chain[-1], e)
        chain.append(m.multiply(chain[-1], y1))
        steps.append(y1)
        certs.append((e, y2, i + 1))
    result = CofinalChain(tuple(chain), tuple(steps), tuple(certs))
    if not result.verify(m):
        raise AssertionError("cofinal chain certificate failed")
    return result


def builtin(name: str, arg: int | None = None) -> OreMonoid:
    if name == "heisenberg":
        return Heisenberg()
    if name == "nk":
        return GridNk(arg if arg is not None else 2)
    if name == "free":
        return FreeWords(arg if arg is not None else 2)
    raise MonoidError(f"unknown builtin monoid {name!r}")


def iter_grid(k: int, total: int) -> Iterator[tuple[int, ...]]:
    """All elements of N^k with coordinate sum ``total``, in lexicographic order."""
    if k == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in iter_grid(k - 1, total - first):
            yield (first,) + rest


def grid_upto(k: int, bound: int) -> list[tuple[int, ...]]:
    """Elements of N^k with coordinate sum at most ``bound``, by sum then lex."""
    out: list[tuple[int, ...]] = []
    for s in range(bound + 1):
        out.extend(sorted(iter_grid(k, s)))
    return out
