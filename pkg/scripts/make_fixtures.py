"""Regenerate the instance files under fixtures/ (deterministic)."""

import random
from pathlib import Path

from matchbound.constructions import (
    LatinSquare,
    cayley_cyclic,
    complete_graph,
    format_latin_square,
    format_uniform_hypergraph,
    kdd_union,
)
from matchbound.hypercore import BipartiteHypergraph, format_hypergraph

OUT = Path(__file__).resolve().parent.parent / "fixtures"


def random_latin_square(n: int, seed: int) -> LatinSquare:
    rng = random.Random(seed)
    def fill(r, c, grid):
        if r == n:
            return True
        nr, nc = (r, c + 1) if c + 1 < n else (r + 1, 0)
        symbols = list(range(n))
        rng.shuffle(symbols)
        for s in symbols:
            if s in grid[r][:c] or any(grid[i][c] == s for i in range(r)):
                continue
            grid[r][c] = s
            if fill(nr, nc, grid):
                return True
        grid[r][c] = -1
        return False

    grid = [[-1] * n for _ in range(n)]
    fill(0, 0, grid)
    return LatinSquare.from_rows(grid)


def main():
    OUT.mkdir(exist_ok=True)
    for n in range(1, 8):
        (OUT / f"z{n}.ls").write_text(format_latin_square(cayley_cyclic(n)))
    klein = LatinSquare.from_rows([[r ^ c for c in range(4)] for r in range(4)])
    (OUT / "klein4.ls").write_text(format_latin_square(klein))
    (OUT / "rand5.ls").write_text(format_latin_square(random_latin_square(5, 5)))
    (OUT / "rand6.ls").write_text(format_latin_square(random_latin_square(6, 6)))
    hs = BipartiteHypergraph.from_edges(2, 2, 4, [(0, (0, 1)), (1, (2, 3)), (1, (0, 1))])
    ht = BipartiteHypergraph.from_edges(2, 1, 3, [(0, (0, 1)), (0, (1, 2))])
    h1 = BipartiteHypergraph.from_edges(2, 1, 2, [(0, (0, 1))])
    for name, h in (("hs", hs), ("ht", ht), ("h1", h1)):
        (OUT / f"{name}.hg").write_text(format_hypergraph(h))
    (OUT / "triangle.ug").write_text(format_uniform_hypergraph(complete_graph(3)))
    for d in range(1, 5):
        (OUT / f"k{d}{d}.ug").write_text(format_uniform_hypergraph(kdd_union(d)))


if __name__ == "__main__":
    main()
