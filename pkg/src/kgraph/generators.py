"""Built-in example systems."""

from __future__ import annotations

from typing import Sequence

from kgraph.ksystem import KSystem, build


def cuntz(n: int) -> KSystem:
    """One vertex with n loops."""
    if n < 1:
        raise ValueError("need n >= 1")
    return build(1, ["v"], {1: [(f"e{i}", "v", "v") for i in range(1, n + 1)]})


def loop() -> KSystem:
    return cuntz(1)


def from_matrix(b: Sequence[Sequence[int]], names: Sequence[str] | None = None) -> KSystem:
    """Rank-one system with B[x][y] edges of range x and source y."""
    n = len(b)
    names = list(names) if names else [str(i + 1) for i in range(n)]
    rows = []
    for x in range(n):
        for y in range(n):
            for t in range(b[x][y]):
                rows.append((f"e{names[x]}_{names[y]}_{t}", names[x], names[y]))
    return build(1, names, {1: rows})


def lattice_example() -> KSystem:
    """Loop at 1, an edge with range 1 and source 2, two loops at 2.

    Its hereditary saturated sets are {}, {2} and X.
    """
    return from_matrix([[1, 1], [0, 2]])


SQUARE_KINDS = ("flip", "transpose")


def grid(m: int, n: int, spec: str | Sequence[int] = "flip") -> KSystem:
    """Single-vertex 2-graph with m colour-1 loops a_i and n colour-2 loops x_j.

    ``spec`` fixes the factorisation a_i x_j = x_j' a_i':
      * ``flip``: (j', i') = (j, i), the product of two one-vertex graphs;
      * ``transpose`` (m == n): (j', i') = (i, j);
      * a permutation list of length m*n sending pair index i*n + j to i'*n + j'.
    """
    if m < 1 or n < 1:
        raise ValueError("need m, n >= 1")
    pairs = [(i, j) for i in range(m) for j in range(n)]
    if spec == "flip":
        target = list(pairs)
    elif spec == "transpose":
        if m != n:
            raise ValueError("transpose squares need m == n")
        target = [(j, i) for i, j in pairs]
    else:
        perm = [int(t) for t in spec]
        if sorted(perm) != list(range(m * n)):
            raise ValueError(f"square spec must be a permutation of 0..{m * n - 1}")
        target = [pairs[t] for t in perm]
    squares = []
    for (i, j), (i2, j2) in zip(pairs, target):
        squares.append((f"a{i + 1}", f"x{j + 1}", f"x{j2 + 1}", f"a{i2 + 1}"))
    return build(
        2,
        ["v"],
        {
            1: [(f"a{i + 1}", "v", "v") for i in range(m)],
            2: [(f"x{j + 1}", "v", "v") for j in range(n)],
        },
        {(1, 2): squares},
    )


def parse_square_spec(text: str) -> str | list[int]:
    if text in SQUARE_KINDS:
        return text
    try:
        return [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise ValueError(f"square spec must be flip, transpose or a comma list: {text!r}") from exc
