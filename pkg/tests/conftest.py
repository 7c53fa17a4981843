from pathlib import Path

import pytest

from matchbound.constructions import cayley_cyclic, ls_to_hypergraph
from matchbound.hypercore import BipartiteHypergraph

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

_ACCEPTANCE: list[tuple[str, bool, str]] = []


def record_criterion(label: str, ok: bool, detail: str = "") -> None:
    _ACCEPTANCE.append((label, ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")


def make_h1():
    return BipartiteHypergraph.from_edges(2, 1, 2, [(0, (0, 1))])


def make_hs():
    # f = {a0; b0,b1}, g = {a1; b2,b3}, h = {a1; b0,b1}
    return BipartiteHypergraph.from_edges(2, 2, 4, [(0, (0, 1)), (1, (2, 3)), (1, (0, 1))])


def make_ht():
    # f = {a0; b0,b1}, g = {a0; b1,b2}
    return BipartiteHypergraph.from_edges(2, 1, 3, [(0, (0, 1)), (0, (1, 2))])


@pytest.fixture
def h1():
    return make_h1()


@pytest.fixture
def hs():
    return make_hs()


@pytest.fixture
def ht():
    return make_ht()


@pytest.fixture
def h3():
    return ls_to_hypergraph(cayley_cyclic(3))
