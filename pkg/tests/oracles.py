"""Brute-force oracles that share no code with the package's search paths."""

import math
from itertools import combinations, permutations, product


def transversals_by_permutation(cells):
    """Count column permutations whose selected symbols are all distinct."""
    n = len(cells)
    return sum(
        1
        for perm in permutations(range(n))
        if len({cells[r][perm[r]] for r in range(n)}) == n
    )


def transversal_sets_by_permutation(cells):
    n = len(cells)
    return [
        frozenset(enumerate(perm))
        for perm in permutations(range(n))
        if len({cells[r][perm[r]] for r in range(n)}) == n
    ]


def latin_squares_of_order(d):
    """Number of order-d Latin squares, rows chosen among all permutations."""
    rows = list(permutations(range(d)))

    def extend(prefix):
        if len(prefix) == d:
            return 1
        return sum(
            extend(prefix + [row])
            for row in rows
            if all(row[c] != prev[c] for prev in prefix for c in range(d))
        )

    return extend([])


def matchings_by_subsets(a_count, edges):
    """A-perfect matchings as |A|-subsets of edges that are pairwise disjoint."""
    out = []
    for combo in combinations(range(len(edges)), a_count):
        a_seen = {edges[i][0] for i in combo}
        bs = [b for i in combo for b in edges[i][1]]
        if len(a_seen) == a_count and len(set(bs)) == len(bs):
            out.append(frozenset(combo))
    return out


def colorings_by_product(n_vertices, edges, q):
    count = 0
    for colors in product(range(q), repeat=len(edges)):
        seen = set()
        ok = True
        for e, c in zip(edges, colors):
            for v in e:
                if (v, c) in seen:
                    ok = False
                    break
                seen.add((v, c))
            if not ok:
                break
        count += ok
    return count


def midpoint_integral(f, n=200_000):
    """Composite midpoint rule on [0, 1]; independent of the adaptive integrator."""
    h = 1.0 / n
    return h * math.fsum(f((i + 0.5) * h) for i in range(n))
