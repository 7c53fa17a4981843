"""Instance builders: Latin squares, uniform hypergraphs and their encodings
as bipartite hypergraphs.

B-vertex layouts are fixed so that written hypergraph files are reproducible:

* Latin square encoding: columns occupy B-indices ``0..n-1`` and symbols
  ``n..2n-1``.
* Incidence hypergraph: the pair (vertex v, color c) is B-index ``c*n + v``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable

from .errors import InvalidInstance, ParseError
from .hypercore import BipartiteHypergraph, _content_lines, _ints

DEFAULT_MAX_ORDER = 12

CellSet = frozenset  # of (row, column) pairs


@dataclass(frozen=True)
class LatinSquare:
    n: int
    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        cells = tuple(tuple(int(s) for s in row) for row in self.cells)
        object.__setattr__(self, "cells", cells)
        problem = latin_square_problem(self.n, cells)
        if problem:
            raise InvalidInstance(problem)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "LatinSquare":
        rows = tuple(tuple(r) for r in rows)
        return cls(len(rows), rows)

    def __getitem__(self, rc: tuple[int, int]) -> int:
        return self.cells[rc[0]][rc[1]]


def latin_square_problem(n: int, cells) -> str | None:
    """First violated Latin property as a message, or None."""
    if n < 1:
        return "empty order"
    if len(cells) != n or any(len(row) != n for row in cells):
        return f"expected {n} rows of {n} symbols"
    for r, row in enumerate(cells):
        for s in row:
            if not 0 <= s < n:
                return f"row {r} has out-of-range symbol {s}"
    for r, row in enumerate(cells):
        dup = _first_repeat(row)
        if dup is not None:
            return f"row {r} repeats symbol {dup}"
    for c in range(n):
        dup = _first_repeat(row[c] for row in cells)
        if dup is not None:
            return f"column {c} repeats symbol {dup}"
    return None


def _first_repeat(values) -> int | None:
    seen = set()
    for v in values:
        if v in seen:
            return v
        seen.add(v)
    return None


@dataclass(frozen=True)
class UniformHypergraph:
    k: int
    n_vertices: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        edges = tuple(tuple(sorted(int(v) for v in e)) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.k < 1:
            raise InvalidInstance(f"k must be positive, got {self.k}")
        for i, e in enumerate(edges):
            if len(e) != self.k or len(set(e)) != self.k:
                raise InvalidInstance(f"edge {i} is not a {self.k}-set")
            if e[0] < 0 or e[-1] >= self.n_vertices:
                raise InvalidInstance(f"edge {i} has a vertex out of range")
        if len(set(edges)) != len(edges):
            raise InvalidInstance("duplicate edge")

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = Counter(v for e in self.edges for v in e)
        return tuple(deg.get(v, 0) for v in range(self.n_vertices))

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    @property
    def regular(self) -> bool:
        return len(set(self.degrees)) <= 1

    @cached_property
    def codegree_max(self) -> int:
        pairs = Counter(p for e in self.edges for p in combinations(e, 2))
        return max(pairs.values(), default=0)


def cayley_cyclic(n: int) -> LatinSquare:
    if n < 1:
        raise InvalidInstance("empty order")
    return LatinSquare(n, tuple(tuple((r + c) % n for c in range(n)) for r in range(n)))


def ls_to_hypergraph(l: LatinSquare, excluded: Iterable[tuple[int, int]] = ()) -> BipartiteHypergraph:
    """Rows become A; columns and symbols become B; one edge per kept cell."""
    n = l.n
    excluded = set(excluded)
    bad = [rc for rc in excluded if not (0 <= rc[0] < n and 0 <= rc[1] < n)]
    if bad:
        raise InvalidInstance(f"excluded cell {bad[0]} out of range")
    edges = tuple(
        (r, (c, n + l.cells[r][c]))
        for r in range(n)
        for c in range(n)
        if (r, c) not in excluded
    )
    return BipartiteHypergraph(2, n, 2 * n, edges)


def transversal_free_entries(l: LatinSquare, max_order: int = DEFAULT_MAX_ORDER, workers: int = 1) -> CellSet:
    from .enumeration import per_entry_transversal_counts

    counts = per_entry_transversal_counts(l, max_order=max_order, workers=workers)
    return frozenset((r, c) for r in range(l.n) for c in range(l.n) if counts[r][c] == 0)


def pruned_hypergraph(l: LatinSquare, max_order: int = DEFAULT_MAX_ORDER, workers: int = 1) -> BipartiteHypergraph:
    return ls_to_hypergraph(l, transversal_free_entries(l, max_order=max_order, workers=workers))


def incidence_hypergraph(g: UniformHypergraph, q: int) -> BipartiteHypergraph:
    """A = edges of g, B = (vertex, color) pairs; A-perfect matchings are
    exactly the proper q-edge-colorings of g."""
    if q < 0:
        raise InvalidInstance("number of colors must be nonnegative")
    n = g.n_vertices
    edges = tuple(
        (i, tuple(c * n + v for v in e))
        for c in range(q)
        for i, e in enumerate(g.edges)
    )
    return BipartiteHypergraph(g.k, len(g.edges), q * n, edges)


def kdd_union(d: int, copies: int = 1) -> UniformHypergraph:
    """Disjoint union of ``copies`` complete bipartite graphs K_{d,d}."""
    if d < 1 or copies < 1:
        raise InvalidInstance("d and copies must be positive")
    edges = []
    for i in range(copies):
        base = 2 * d * i
        edges.extend((base + x, base + d + y) for x in range(d) for y in range(d))
    return UniformHypergraph(2, 2 * d * copies, tuple(edges))


def complete_graph(m: int) -> UniformHypergraph:
    return UniformHypergraph(2, m, tuple(combinations(range(m), 2)))


# -- text formats ------------------------------------------------------------


def parse_latin_square(text: str) -> LatinSquare:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty input: expected order n on the first line")
    lineno, header = lines[0]
    head = _ints(header, lineno)
    if len(head) != 1 or head[0] < 1:
        raise ParseError("malformed header, expected a positive order n", lineno)
    n = head[0]
    body = lines[1:]
    if len(body) != n:
        raise ParseError(f"expected {n} rows, found {len(body)}", lineno)
    rows = []
    for lineno, line in body:
        row = _ints(line, lineno)
        if len(row) != n:
            raise ParseError(f"row has {len(row)} entries, expected {n}", lineno)
        bad = [s for s in row if not 0 <= s < n]
        if bad:
            raise ParseError(f"out-of-range symbol {bad[0]}", lineno)
        rows.append(tuple(row))
    problem = latin_square_problem(n, rows)
    if problem:
        raise ParseError(problem)
    return LatinSquare(n, tuple(rows))


def format_latin_square(l: LatinSquare) -> str:
    return f"{l.n}\n" + "".join(" ".join(map(str, row)) + "\n" for row in l.cells)


def parse_uniform_hypergraph(text: str) -> UniformHypergraph:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty input: expected header 'k n_vertices edge_count'")
    lineno, header = lines[0]
    head = _ints(header, lineno)
    if len(head) != 3 or head[0] < 1 or min(head) < 0:
        raise ParseError("malformed header, expected 'k n_vertices edge_count'", lineno)
    k, nv, m = head
    body = lines[1:]
    if len(body) != m:
        raise ParseError(f"header declares {m} edges, found {len(body)}", lineno)
    edges = []
    seen = set()
    for lineno, line in body:
        e = _ints(line, lineno)
        if len(e) != k:
            raise ParseError(f"edge has {len(e)} vertices, expected {k}", lineno)
        if any(not 0 <= v < nv for v in e):
            raise ParseError("vertex index out of range", lineno)
        if any(x >= y for x, y in zip(e, e[1:])):
            raise ParseError("edge vertices must be strictly increasing", lineno)
        if tuple(e) in seen:
            raise ParseError("duplicate edge", lineno)
        seen.add(tuple(e))
        edges.append(tuple(e))
    return UniformHypergraph(k, nv, tuple(edges))


def format_uniform_hypergraph(g: UniformHypergraph) -> str:
    out = [f"{g.k} {g.n_vertices} {len(g.edges)}"]
    out.extend(" ".join(map(str, e)) for e in g.edges)
    return "\n".join(out) + "\n"
