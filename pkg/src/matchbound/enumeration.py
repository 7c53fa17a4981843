"""Exact counting, enumeration and uniform sampling of A-perfect matchings.

All searches keep B-occupancy as an integer bitmask.  The general matcher
branches on the uncovered A-vertex with the fewest legal edges (ties go to
the lowest index); the transversal counter walks the rows of the square in
order.  Counting may fan the root's branches out to worker processes; the
merge is integer addition, so the result never depends on the split.
"""

from __future__ import annotations

import math
import random
import time
from collections import OrderedDict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

from .constructions import (
    DEFAULT_MAX_ORDER,
    LatinSquare,
    UniformHypergraph,
    incidence_hypergraph,
)
from .errors import BudgetExhausted, Infeasible, InstanceTooLarge
from .hypercore import BipartiteHypergraph, Matching, make_matching, require_valid

DEFAULT_MAX_NODES = 10**9


@dataclass(frozen=True)
class CountReport:
    count: int
    ln_count: float
    nodes_visited: int
    elapsed: float

    @classmethod
    def build(cls, count: int, nodes: int, started: float) -> "CountReport":
        ln = math.log(count) if count > 0 else float("-inf")
        return cls(count, ln, nodes, time.perf_counter() - started)


class _OutOfBudget(Exception):
    pass


# -- general A-perfect matching search ---------------------------------------


class _Search:
    """Fail-first backtracking over per-A lists of (edge index, B-mask)."""

    def __init__(self, options: Sequence[Sequence[tuple[int, int]]], max_nodes: int):
        self.options = options
        self.max_nodes = max_nodes
        self.nodes = 0
        self.found = 0

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise _OutOfBudget

    def pick(self, used: int, uncovered: Sequence[int]):
        best_a, best = -1, None
        for a in uncovered:
            legal = [opt for opt in self.options[a] if not opt[1] & used]
            if best is None or len(legal) < len(best):
                best_a, best = a, legal
                if not legal:
                    break
        return best_a, best

    def count(self, used: int, uncovered: tuple[int, ...]) -> int:
        self._tick()
        if not uncovered:
            self.found += 1
            return 1
        a, legal = self.pick(used, uncovered)
        if not legal:
            return 0
        rest = tuple(x for x in uncovered if x != a)
        total = 0
        for _, mask in legal:
            total += self.count(used | mask, rest)
        return total

    def walk(self, used: int, uncovered: tuple[int, ...], chosen: list[int], visit):
        self._tick()
        if not uncovered:
            self.found += 1
            visit(chosen)
            return
        a, legal = self.pick(used, uncovered)
        rest = tuple(x for x in uncovered if x != a)
        for idx, mask in legal:
            chosen.append(idx)
            self.walk(used | mask, rest, chosen, visit)
            chosen.pop()


def _options(h: BipartiteHypergraph):
    masks = h.b_masks
    return tuple(tuple((i, masks[i]) for i in h.edges_at[a]) for a in range(h.a_count))


def _count_subtree(options, used, uncovered, max_nodes):
    s = _Search(options, max_nodes)
    try:
        return s.count(used, uncovered), s.nodes, False
    except _OutOfBudget:
        return s.found, s.nodes, True


def _run_split(fn, jobs, workers):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *job) for job in jobs]
        return [f.result() for f in futures]


def count_a_perfect_matchings(
    h: BipartiteHypergraph, max_nodes: int = DEFAULT_MAX_NODES, workers: int = 1
) -> CountReport:
    require_valid(h)
    started = time.perf_counter()
    options = _options(h)
    uncovered = tuple(range(h.a_count))
    if workers <= 1 or not uncovered:
        count, nodes, out = _count_subtree(options, 0, uncovered, max_nodes)
        if out:
            raise BudgetExhausted(nodes, count, max_nodes)
        return CountReport.build(count, nodes, started)
    root = _Search(options, max_nodes)
    a, legal = root.pick(0, uncovered)
    rest = tuple(x for x in uncovered if x != a)
    jobs = [(options, mask, rest, max_nodes) for _, mask in legal]
    results = _run_split(_count_subtree, jobs, workers)
    count = sum(r[0] for r in results)
    nodes = 1 + sum(r[1] for r in results)
    if any(r[2] for r in results) or nodes > max_nodes:
        raise BudgetExhausted(nodes, count, max_nodes)
    return CountReport.build(count, nodes, started)


def enumerate_matchings(
    h: BipartiteHypergraph,
    visitor: Callable[[Matching], object],
    max_nodes: int = DEFAULT_MAX_NODES,
) -> int:
    """Call ``visitor`` once per A-perfect matching, in a fixed order."""
    require_valid(h)
    s = _Search(_options(h), max_nodes)
    try:
        s.walk(0, tuple(range(h.a_count)), [], lambda chosen: visitor(make_matching(h, chosen)))
    except _OutOfBudget:
        raise BudgetExhausted(s.nodes, s.found, max_nodes) from None
    return s.found


def all_matchings(h: BipartiteHypergraph, max_nodes: int = DEFAULT_MAX_NODES) -> list[Matching]:
    out: list[Matching] = []
    enumerate_matchings(h, out.append, max_nodes=max_nodes)
    return out


# -- transversals --------------------------------------------------------------


def _row_options(l: LatinSquare):
    n = l.n
    return tuple(tuple((c, 1 << c, 1 << l.cells[r][c]) for c in range(n)) for r in range(n))


def _transversal_subtree(rows, c0: int, max_nodes: int, with_matrix: bool):
    """Count transversals whose row-0 cell is in column ``c0``."""
    n = len(rows)
    nodes = 0
    found = 0
    path = [c0]
    matrix = [[0] * n for _ in range(n)] if with_matrix else None

    def dfs(r, cols, syms):
        nonlocal nodes, found
        nodes += 1
        if nodes > max_nodes:
            raise _OutOfBudget
        if r == n:
            found += 1
            if matrix is not None:
                for rr, cc in enumerate(path):
                    matrix[rr][cc] += 1
            return
        for c, cb, sb in rows[r]:
            if not (cols & cb or syms & sb):
                path.append(c)
                dfs(r + 1, cols | cb, syms | sb)
                path.pop()

    _, cb, sb = rows[0][c0]
    try:
        dfs(1, cb, sb)
    except _OutOfBudget:
        return found, nodes, True, matrix
    return found, nodes, False, matrix


def _transversal_search(l: LatinSquare, max_nodes: int, workers: int, with_matrix: bool):
    rows = _row_options(l)
    jobs = [(rows, c, max_nodes, with_matrix) for c in range(l.n)]
    results = _run_split(_transversal_subtree, jobs, workers)
    count = sum(r[0] for r in results)
    nodes = 1 + sum(r[1] for r in results)
    if any(r[2] for r in results) or nodes > max_nodes:
        raise BudgetExhausted(nodes, count, max_nodes)
    matrix = None
    if with_matrix:
        matrix = [[sum(r[3][i][j] for r in results) for j in range(l.n)] for i in range(l.n)]
    return count, nodes, matrix


def count_transversals(l: LatinSquare, max_nodes: int = DEFAULT_MAX_NODES, workers: int = 1) -> CountReport:
    started = time.perf_counter()
    count, nodes, _ = _transversal_search(l, max_nodes, workers, with_matrix=False)
    return CountReport.build(count, nodes, started)


def per_entry_transversal_counts(
    l: LatinSquare,
    max_nodes: int = DEFAULT_MAX_NODES,
    workers: int = 1,
    max_order: int = DEFAULT_MAX_ORDER,
) -> list[list[int]]:
    """matrix[r][c] = number of transversals through cell (r, c)."""
    if l.n > max_order:
        raise InstanceTooLarge(f"instance too large: order {l.n} exceeds the limit {max_order}")
    _, _, matrix = _transversal_search(l, max_nodes, workers, with_matrix=True)
    return matrix


# -- proper edge-colorings ---------------------------------------------------------


def _direct_colorings(g: UniformHypergraph, q: int, max_nodes: int) -> tuple[int, int]:
    """Assign colors edge by edge; a vertex may see each color once."""
    edges = g.edges
    m = len(edges)
    seen = [0] * g.n_vertices
    nodes = 0

    def go(i):
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise _OutOfBudget
        if i == m:
            return 1
        e = edges[i]
        busy = 0
        for v in e:
            busy |= seen[v]
        total = 0
        for c in range(q):
            bit = 1 << c
            if busy & bit:
                continue
            for v in e:
                seen[v] |= bit
            total += go(i + 1)
            for v in e:
                seen[v] ^= bit
        return total

    try:
        return go(0), nodes
    except _OutOfBudget:
        raise BudgetExhausted(nodes, 0, max_nodes) from None


def count_proper_colorings(
    g: UniformHypergraph,
    q: int,
    max_nodes: int = DEFAULT_MAX_NODES,
    workers: int = 1,
    method: str = "incidence",
) -> CountReport:
    """Count proper q-edge-colorings of ``g``.

    ``method`` is ``"incidence"`` (matchings of the incidence hypergraph),
    ``"direct"`` (color-assignment backtracking) or ``"both"``, which runs the
    two and raises ``RuntimeError`` if they disagree.
    """
    if method not in ("incidence", "direct", "both"):
        raise ValueError(f"unknown method {method!r}")
    started = time.perf_counter()
    if method == "direct":
        count, nodes = _direct_colorings(g, q, max_nodes)
        return CountReport.build(count, nodes, started)
    report = count_a_perfect_matchings(incidence_hypergraph(g, q), max_nodes=max_nodes, workers=workers)
    if method == "both":
        direct, _ = _direct_colorings(g, q, max_nodes)
        if direct != report.count:
            raise RuntimeError(f"coloring counts disagree: incidence {report.count}, direct {direct}")
    return report


# -- sampling ---------------------------------------------------------------------


class MatchingSampler:
    """Uniform A-perfect matchings by exact-count self-reduction.

    Residual completion counts are memoised on (used B-mask, uncovered A-mask)
    in an LRU cache of ``cache_size`` entries; eviction only costs time.
    """

    def __init__(self, h: BipartiteHypergraph, cache_size: int = 1 << 18):
        require_valid(h)
        self.h = h
        self.options = _options(h)
        self.cache_size = cache_size
        self._cache: OrderedDict[tuple[int, int], int] = OrderedDict()
        self.total = self.completions(0, (1 << h.a_count) - 1)
        if self.total == 0:
            raise Infeasible("infeasible: no A-perfect matching")

    def _pick(self, used: int, uncovered: int):
        best_a, best = -1, None
        a = 0
        rem = uncovered
        while rem:
            if rem & 1:
                legal = [opt for opt in self.options[a] if not opt[1] & used]
                if best is None or len(legal) < len(best):
                    best_a, best = a, legal
                    if not legal:
                        break
            rem >>= 1
            a += 1
        return best_a, best

    def completions(self, used: int, uncovered: int) -> int:
        if not uncovered:
            return 1
        key = (used, uncovered)
        cache = self._cache
        if key in cache:
            cache.move_to_end(key)
            return cache[key]
        a, legal = self._pick(used, uncovered)
        rest = uncovered & ~(1 << a)
        value = sum(self.completions(used | mask, rest) for _, mask in legal)
        cache[key] = value
        if len(cache) > self.cache_size:
            cache.popitem(last=False)
        return value

    def sample(self, rng: random.Random) -> Matching:
        used, uncovered = 0, (1 << self.h.a_count) - 1
        chosen = []
        while uncovered:
            a, legal = self._pick(used, uncovered)
            rest = uncovered & ~(1 << a)
            weights = [self.completions(used | mask, rest) for _, mask in legal]
            r = rng.randrange(sum(weights))
            for (idx, mask), w in zip(legal, weights):
                if r < w:
                    break
                r -= w
            chosen.append(idx)
            used |= mask
            uncovered = rest
        return make_matching(self.h, chosen)


def sample_matching_uniform(h: BipartiteHypergraph, seed: int) -> Matching:
    return MatchingSampler(h).sample(random.Random(seed))
