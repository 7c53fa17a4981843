"""Bipartite hypergraphs, matchings and the statistics the counting bound needs.

A hypergraph here has vertex classes A (``a_count`` vertices) and B
(``b_count`` vertices).  Every edge holds exactly one A-vertex and ``k``
distinct B-vertices, so edges are stored as ``(a_index, (b_1, ..., b_k))``
with the B-indices sorted.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import InvalidInstance, ParseError

Edge = tuple[int, tuple[int, ...]]


@dataclass(frozen=True)
class BipartiteHypergraph:
    k: int
    a_count: int
    b_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        # Normalise storage; validity is checked separately so that a broken
        # instance can still be reported on.
        norm = tuple((int(a), tuple(sorted(int(b) for b in bs))) for a, bs in self.edges)
        object.__setattr__(self, "edges", norm)

    @classmethod
    def from_edges(cls, k: int, a_count: int, b_count: int, edges: Iterable[tuple[int, Sequence[int]]]):
        return cls(k, a_count, b_count, tuple((a, tuple(bs)) for a, bs in edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def digest(self) -> str:
        return hashlib.sha256(format_hypergraph(self).encode()).hexdigest()[:16]

    @cached_property
    def edges_at(self) -> tuple[tuple[int, ...], ...]:
        """Edge indices incident to each A-vertex."""
        out: list[list[int]] = [[] for _ in range(self.a_count)]
        for i, (a, _) in enumerate(self.edges):
            if 0 <= a < self.a_count:
                out[a].append(i)
        return tuple(tuple(x) for x in out)

    @cached_property
    def b_masks(self) -> tuple[int, ...]:
        masks = []
        for _, bs in self.edges:
            m = 0
            for b in bs:
                m |= 1 << b
            masks.append(m)
        return tuple(masks)


@dataclass(frozen=True)
class Matching:
    edge_indices: frozenset[int]
    host_id: str

    def __len__(self):
        return len(self.edge_indices)

    def edge_of(self, h: BipartiteHypergraph) -> dict[int, int]:
        """Map a -> index of the matching edge covering a (the X_a map)."""
        return {h.edges[i][0]: i for i in self.edge_indices}


def make_matching(h: BipartiteHypergraph, edge_indices: Iterable[int]) -> Matching:
    return Matching(frozenset(edge_indices), h.digest)


def is_matching(h: BipartiteHypergraph, x: Matching) -> bool:
    seen_a: set[int] = set()
    used = 0
    for i in x.edge_indices:
        a, _ = h.edges[i]
        if a in seen_a or used & h.b_masks[i]:
            return False
        seen_a.add(a)
        used |= h.b_masks[i]
    return True


def is_a_perfect(h: BipartiteHypergraph, x: Matching) -> bool:
    if x.host_id != h.digest or not is_matching(h, x):
        return False
    return {h.edges[i][0] for i in x.edge_indices} == set(range(h.a_count))


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_hypergraph(h: BipartiteHypergraph) -> ValidationReport:
    report = ValidationReport()
    if h.k < 1:
        report.violations.append(f"k must be positive, got {h.k}")
    seen: dict[Edge, int] = {}
    for i, (a, bs) in enumerate(h.edges):
        if not 0 <= a < h.a_count:
            report.violations.append(f"edge {i}: A-index {a} out of range")
        if len(bs) != h.k:
            report.violations.append(f"edge {i}: uniformity, has {len(bs)} B-vertices, expected {h.k}")
        if len(set(bs)) != len(bs):
            report.violations.append(f"edge {i}: repeated B-vertex")
        bad = [b for b in bs if not 0 <= b < h.b_count]
        if bad:
            report.violations.append(f"edge {i}: B-index {bad[0]} out of range")
        if (a, bs) in seen:
            report.violations.append(f"edge {i}: duplicate of edge {seen[(a, bs)]}")
        else:
            seen[(a, bs)] = i
    covered = {a for a, _ in h.edges}
    missing = [a for a in range(h.a_count) if a not in covered]
    if missing:
        report.warnings.append(
            f"{len(missing)} A-vertices lie in no edge (first: {missing[0]}); no A-perfect matching exists"
        )
    return report


def require_valid(h: BipartiteHypergraph) -> None:
    report = validate_hypergraph(h)
    if not report.ok:
        raise InvalidInstance("invalid hypergraph: " + "; ".join(report.violations))


@dataclass(frozen=True)
class DegreeStats:
    q_avg: Fraction
    d_max_b: int
    delta2: int
    rho: Fraction
    min_a_degree: int


def degree_stats(h: BipartiteHypergraph) -> DegreeStats:
    if not h.edges:
        rho = Fraction(h.b_count, h.a_count) if h.a_count else Fraction(0)
        return DegreeStats(Fraction(0), 0, 0, rho, 0)
    a_deg = Counter(a for a, _ in h.edges)
    b_deg = Counter(b for _, bs in h.edges for b in bs)
    # Codegree over every unordered vertex pair, A-B and B-B alike.
    pairs: Counter = Counter()
    for a, bs in h.edges:
        verts = [("a", a)] + [("b", b) for b in bs]
        pairs.update(combinations(verts, 2))
    return DegreeStats(
        q_avg=Fraction(len(h.edges), h.a_count),
        d_max_b=max(b_deg.values(), default=0),
        delta2=max(pairs.values(), default=1),
        rho=Fraction(h.b_count, h.a_count),
        min_a_degree=min(a_deg.get(a, 0) for a in range(h.a_count)),
    )


def _owners(h: BipartiteHypergraph, x: Matching) -> dict[int, int]:
    """B-vertex -> A-vertex whose matching edge covers it."""
    owner = {}
    for i in x.edge_indices:
        a, bs = h.edges[i]
        for b in bs:
            owner[b] = a
    return owner


def _require_a_perfect(h: BipartiteHypergraph, x: Matching) -> None:
    if not is_a_perfect(h, x):
        raise InvalidInstance("matching not A-perfect")


@dataclass(frozen=True)
class BadEdgeReport:
    s_edges: frozenset[int]
    t_edges: frozenset[int]
    per_a_s: Mapping[int, int]
    per_a_t: Mapping[int, int]


def bad_edge_sets(h: BipartiteHypergraph, x: Matching) -> BadEdgeReport:
    """Edges overlapping some matching edge in two or more B-vertices (S), and
    edges touching a B-vertex the matching leaves uncovered (T)."""
    _require_a_perfect(h, x)
    owner = _owners(h, x)
    matched = set(x.edge_indices)
    s_edges, t_edges = set(), set()
    for i, (a, bs) in enumerate(h.edges):
        hits = Counter(owner[b] for b in bs if b in owner)
        if i not in matched and any(c >= 2 for c in hits.values()):
            s_edges.add(i)
        if any(b not in owner for b in bs):
            t_edges.add(i)
    per_a_s = Counter(h.edges[i][0] for i in s_edges)
    per_a_t = Counter(h.edges[i][0] for i in t_edges)
    return BadEdgeReport(
        frozenset(s_edges),
        frozenset(t_edges),
        {a: per_a_s.get(a, 0) for a in range(h.a_count)},
        {a: per_a_t.get(a, 0) for a in range(h.a_count)},
    )


def incidence_exponent(h: BipartiteHypergraph, x: Matching, a: int, e: int) -> int:
    """Number of other A-vertices whose matching edge meets edge ``e``."""
    _require_a_perfect(h, x)
    return _exponent(h.edges[e], a, _owners(h, x))


def _exponent(edge: Edge, a: int, owner: Mapping[int, int]) -> int:
    if edge[0] != a:
        raise InvalidInstance("edge not incident")
    return len({owner[b] for b in edge[1] if b in owner} - {a})


def exponent_profile(h: BipartiteHypergraph, x: Matching) -> list[list[int]]:
    """Per A-vertex, how many incident edges carry each exponent 0..k.

    Row ``a`` is the coefficient list of sum over e containing a of x^m(a, e).
    """
    owner = _owners(h, x)
    rows = [[0] * (h.k + 1) for _ in range(h.a_count)]
    for edge in h.edges:
        rows[edge[0]][_exponent(edge, edge[0], owner)] += 1
    return rows


def disjoint_union(*hs: BipartiteHypergraph) -> BipartiteHypergraph:
    if not hs:
        raise ValueError("need at least one hypergraph")
    k = hs[0].k
    if any(h.k != k for h in hs):
        raise InvalidInstance("disjoint union needs a common k")
    edges: list[Edge] = []
    a_off = b_off = 0
    for h in hs:
        edges.extend((a + a_off, tuple(b + b_off for b in bs)) for a, bs in h.edges)
        a_off += h.a_count
        b_off += h.b_count
    return BipartiteHypergraph(k, a_off, b_off, tuple(edges))


# -- text format -------------------------------------------------------------


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise ParseError(f"non-integer token in {line!r}", lineno) from None


def parse_hypergraph(text: str) -> BipartiteHypergraph:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty input: expected header 'k a_count b_count edge_count'")
    lineno, header = lines[0]
    head = _ints(header, lineno)
    if len(head) != 4 or min(head) < 0 or head[0] < 1:
        raise ParseError("malformed header, expected 'k a_count b_count edge_count'", lineno)
    k, a_count, b_count, m = head
    body = lines[1:]
    if len(body) != m:
        raise ParseError(f"header declares {m} edges, found {len(body)}", lineno)
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for lineno, line in body:
        vals = _ints(line, lineno)
        if len(vals) != k + 1:
            raise ParseError(f"edge has {len(vals) - 1} B-vertices, expected {k}", lineno)
        a, bs = vals[0], vals[1:]
        if not 0 <= a < a_count:
            raise ParseError(f"A-index {a} out of range", lineno)
        if any(not 0 <= b < b_count for b in bs):
            raise ParseError("B-index out of range", lineno)
        if any(x >= y for x, y in zip(bs, bs[1:])):
            raise ParseError("B indices must be strictly increasing", lineno)
        edge = (a, tuple(bs))
        if edge in seen:
            raise ParseError("duplicate edge", lineno)
        seen.add(edge)
        edges.append(edge)
    return BipartiteHypergraph(k, a_count, b_count, tuple(edges))


def format_hypergraph(h: BipartiteHypergraph) -> str:
    out = [f"{h.k} {h.a_count} {h.b_count} {len(h.edges)}"]
    out.extend(" ".join(map(str, (a, *bs))) for a, bs in h.edges)
    return "\n".join(out) + "\n"
