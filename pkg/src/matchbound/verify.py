"""Certification harness: checks the entropy lemmas and the counting bound on
instances small enough to enumerate.

Entropy-side quantities are in bits; bound-side quantities in nats.  Every
report can be flattened into a JSON record carrying its units.
"""

from __future__ import annotations

import math
import random
import statistics
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Hashable, Sequence

from scipy.stats import chi2

from .bounds import BoundParameters, adaptive_simpson, finite_matching_bound
from .enumeration import (
    DEFAULT_MAX_NODES,
    MatchingSampler,
    count_a_perfect_matchings,
    enumerate_matchings,
)
from .errors import Infeasible
from .hypercore import (
    BipartiteHypergraph,
    Matching,
    bad_edge_sets,
    degree_stats,
    exponent_profile,
)

QUAD_TOL = 1e-9
EXACT_LIMIT = 10**5
_Z99 = 2.5758293035489004  # two-sided 99% normal quantile


def entropy_of_uniform(count: int) -> float:
    if count < 1:
        raise ValueError("entropy of an empty support")
    return math.log2(count)


def _log2_poly_integral(coeffs: Sequence[float], tol: float) -> float:
    """integral_0^1 log2(sum_m coeffs[m] x^m) dx; coeffs[0] must be positive."""
    if all(c == 0 for c in coeffs[1:]):
        return math.log2(coeffs[0])

    def f(x):
        acc = 0.0
        for c in reversed(coeffs):
            acc = acc * x + c
        return math.log2(acc)

    return adaptive_simpson(f, 0.0, 1.0, tol)[0]


def _matchings(h, samples, seed, exact_limit, max_nodes):
    """(count, matchings, exact?): every matching when few enough, else samples."""
    total = count_a_perfect_matchings(h, max_nodes=max_nodes).count
    if total == 0:
        raise Infeasible("infeasible: no A-perfect matching")
    if total <= exact_limit:
        out: list[Matching] = []
        enumerate_matchings(h, out.append, max_nodes=max_nodes)
        return total, out, True
    sampler = MatchingSampler(h)
    rng = random.Random(seed)
    return total, [sampler.sample(rng) for _ in range(samples)], False


@dataclass
class Lemma31Report:
    lhs_bits: float
    rhs_bits: float
    matching_count: int
    passed: bool | None
    pre_jensen_bits: float
    mode: str = "exact"
    ci: tuple[float, float] | None = None

    @property
    def jensen_gap_bits(self) -> float:
        return self.rhs_bits - self.pre_jensen_bits

    def record(self, instance_id: str) -> dict:
        return {
            "instance_id": instance_id,
            "lemma": "lemma31",
            "lhs": self.lhs_bits,
            "rhs": self.rhs_bits,
            "pass": self.passed,
            "slack": self.rhs_bits - self.lhs_bits,
            "units": "bits",
            "pre_jensen_rhs": self.pre_jensen_bits,
            "matching_count": str(self.matching_count),
            "mode": self.mode,
            "ci": list(self.ci) if self.ci else None,
        }


def verify_lemma31(
    h: BipartiteHypergraph,
    tol: float = QUAD_TOL,
    exact_limit: int = EXACT_LIMIT,
    samples: int = 2000,
    seed: int = 0,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> Lemma31Report:
    """Compare log2 of the matching count with the expectation over random X
    of |A| * integral_0^1 log2((1/|A|) sum_a sum_{e containing a} x^m) dx.

    The expectation is exact (every matching enumerated) up to
    ``exact_limit`` matchings; past that it is estimated from ``samples``
    uniform draws and ``passed`` is None, with a 99% interval in ``ci``.
    """
    total, xs, exact = _matchings(h, samples, seed, exact_limit, max_nodes)
    n_a = h.a_count
    integral_cache: dict[tuple, float] = {}

    def integral(coeffs: tuple) -> float:
        if coeffs not in integral_cache:
            integral_cache[coeffs] = _log2_poly_integral(coeffs, tol / max(n_a, 1))
        return integral_cache[coeffs]

    rhs_values, pre_values = [], []
    for x in xs:
        rows = exponent_profile(h, x)
        summed = tuple(sum(col) / n_a for col in zip(*rows)) if n_a else ()
        rhs_values.append(n_a * integral(summed) if n_a else 0.0)
        pre_values.append(sum(integral(tuple(map(float, row))) for row in rows))
    lhs = math.log2(total)
    rhs = statistics.fmean(rhs_values)
    pre = statistics.fmean(pre_values)
    if exact:
        return Lemma31Report(lhs, rhs, total, lhs <= rhs + tol, pre)
    half = _Z99 * statistics.stdev(rhs_values) / math.sqrt(len(rhs_values)) if len(rhs_values) > 1 else math.inf
    return Lemma31Report(lhs, rhs, total, None, pre, mode="sampled", ci=(rhs - half, rhs + half))


@dataclass
class Lemma33Report:
    worst_s_slack: int
    worst_t_slack: int
    checked_matchings: int
    passed: bool
    s_bound: int
    t_bound: int
    max_s: int = 0
    max_t: int = 0

    def record(self, instance_id: str) -> dict:
        return {
            "instance_id": instance_id,
            "lemma": "lemma33",
            "lhs": [self.max_s, self.max_t],
            "rhs": [self.s_bound, self.t_bound],
            "pass": self.passed,
            "slack": [self.worst_s_slack, self.worst_t_slack],
            "units": "edges",
            "checked_matchings": self.checked_matchings,
        }


def verify_lemma33(
    h: BipartiteHypergraph,
    sampled: bool = False,
    samples: int = 2000,
    seed: int = 0,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> Lemma33Report:
    """Check |S(X)| <= |A| C(k,2) (codegree - 1) and |T(X)| <= (|B| - k|A|) D."""
    stats = degree_stats(h)
    s_bound = h.a_count * math.comb(h.k, 2) * (stats.delta2 - 1)
    t_bound = (h.b_count - h.k * h.a_count) * stats.d_max_b
    limit = 0 if sampled else math.inf
    _, xs, _ = _matchings(h, samples, seed, limit, max_nodes)
    max_s = max_t = 0
    for x in xs:
        rep = bad_edge_sets(h, x)
        max_s = max(max_s, len(rep.s_edges))
        max_t = max(max_t, len(rep.t_edges))
    s_slack, t_slack = s_bound - max_s, t_bound - max_t
    return Lemma33Report(s_slack, t_slack, len(xs), s_slack >= 0 and t_slack >= 0,
                         s_bound, t_bound, max_s, max_t)


@dataclass
class DominanceReport:
    count: int
    ln_count: float
    ln_bound: float | None
    passed: bool
    gap_per_a: float | None
    params: BoundParameters | None = None

    def record(self, instance_id: str) -> dict:
        return {
            "instance_id": instance_id,
            "lemma": "dominance",
            "lhs": self.ln_count,
            "rhs": self.ln_bound,
            "pass": self.passed,
            "slack": None if self.ln_bound is None else self.ln_bound - self.ln_count,
            "units": "nats",
            "count": str(self.count),
            "gap_per_a": self.gap_per_a,
        }


def verify_bound_dominance(
    h: BipartiteHypergraph,
    tol: float = QUAD_TOL,
    max_nodes: int = DEFAULT_MAX_NODES,
    workers: int = 1,
) -> DominanceReport:
    """ln(exact count) against the finite matching bound built from degree_stats(h)."""
    report = count_a_perfect_matchings(h, max_nodes=max_nodes, workers=workers)
    params = BoundParameters.of(h)
    if report.count == 0:
        return DominanceReport(0, report.ln_count, None, True, None, params)
    bound = finite_matching_bound(params, tol)
    gap = (bound.ln_bound - report.ln_count) / h.a_count if h.a_count else 0.0
    return DominanceReport(report.count, report.ln_count, bound.ln_bound,
                           report.ln_count <= bound.ln_bound + tol, gap, params)


def chain_rule_entropies(outcomes: Sequence[Sequence[Hashable]], order: Sequence[int]) -> list[float]:
    """H(Y_i | Y_j for j before i in ``order``) in bits, for a uniform draw from ``outcomes``.

    Computed from the definition of conditional entropy by grouping on the
    revealed prefix.
    """
    total = len(outcomes)
    out = []
    for i, pos in enumerate(order):
        groups: dict[tuple, Counter] = defaultdict(Counter)
        for o in outcomes:
            groups[tuple(o[p] for p in order[:i])][o[pos]] += 1
        h = 0.0
        for counts in groups.values():
            size = sum(counts.values())
            h += size / total * -sum(c / size * math.log2(c / size) for c in counts.values())
        out.append(h)
    return out


@dataclass
class SamplerReport:
    statistic: float
    critical: float
    dof: int
    trials: int
    passed: bool
    frequencies: list[int] = field(default_factory=list)

    def record(self, instance_id: str) -> dict:
        return {
            "instance_id": instance_id,
            "lemma": "sampler",
            "lhs": self.statistic,
            "rhs": self.critical,
            "pass": self.passed,
            "slack": self.critical - self.statistic,
            "units": "chi-square",
            "dof": self.dof,
            "trials": self.trials,
        }


def sampler_uniformity_test(h: BipartiteHypergraph, trials: int, seed: int,
                            level: float = 0.999) -> SamplerReport:
    sampler = MatchingSampler(h)
    m = sampler.total
    if m < 2:
        raise ValueError(f"uniformity test needs at least 2 matchings, instance has {m}")
    if trials < 50 * m:
        raise ValueError(f"too few trials: need at least {50 * m}, got {trials}")
    index: dict[frozenset, int] = {}
    enumerate_matchings(h, lambda x: index.setdefault(x.edge_indices, len(index)))
    freq = [0] * m
    rng = random.Random(seed)
    for _ in range(trials):
        freq[index[sampler.sample(rng).edge_indices]] += 1
    expected = trials / m
    stat = sum((f - expected) ** 2 / expected for f in freq)
    crit = float(chi2.ppf(level, m - 1))
    return SamplerReport(stat, crit, m - 1, trials, stat < crit, freq)


def analyze_square(l, max_nodes: int = DEFAULT_MAX_NODES, workers: int = 1, max_order: int = 12,
                   tol: float = QUAD_TOL) -> dict:
    """One-shot report on a Latin square: transversal count, transversal-free
    cells, the pruned encoding's statistics and bound, and the dominance check."""
    from .bounds import reference_envelope_ln, transversal_bound_ln
    from .constructions import ls_to_hypergraph
    from .enumeration import count_transversals, per_entry_transversal_counts

    count = count_transversals(l, max_nodes=max_nodes, workers=workers)
    matrix = per_entry_transversal_counts(l, max_nodes=max_nodes, workers=workers, max_order=max_order)
    free = sorted((r, c) for r in range(l.n) for c in range(l.n) if matrix[r][c] == 0)
    pruned = ls_to_hypergraph(l, free)
    stats = degree_stats(pruned)
    dominance = verify_bound_dominance(pruned, tol=tol, max_nodes=max_nodes, workers=workers)
    return {
        "order": l.n,
        "transversals": str(count.count),
        "ln_transversals": count.ln_count,
        "nodes_visited": count.nodes_visited,
        "per_entry": [[str(v) for v in row] for row in matrix],
        "transversal_free": [list(rc) for rc in free],
        "pruned": {
            "edges": pruned.edge_count,
            "q_avg": stats.q_avg,
            "d_max_b": stats.d_max_b,
            "delta2": stats.delta2,
            "rho": stats.rho,
        },
        "pruned_count": str(dominance.count),
        "ln_bound_finite": dominance.ln_bound,
        "dominance_pass": dominance.passed,
        "gap_per_row": dominance.gap_per_a,
        "ln_bound_2117": transversal_bound_ln(l.n),
        "ln_envelope_e2": reference_envelope_ln(l.n),
    }
