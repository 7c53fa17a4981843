import json
import math

import pytest
from hypothesis import given, settings

from matchbound.constructions import cayley_cyclic, incidence_hypergraph, kdd_union, ls_to_hypergraph, pruned_hypergraph
from matchbound.enumeration import all_matchings
from matchbound.errors import Infeasible
from matchbound.hypercore import disjoint_union
from matchbound.verify import (
    analyze_square,
    chain_rule_entropies,
    entropy_of_uniform,
    sampler_uniformity_test,
    verify_bound_dominance,
    verify_lemma31,
    verify_lemma33,
)

from oracles import midpoint_integral
from test_hypercore import hypergraphs

# 3 * integral_0^1 log2(1 + 2x^2) dx, from the closed form (0.44963400638019 * 3 / ln 2)
H3_RHS_BITS = 1.9460542536592


def test_h3_rhs_oracle():
    assert 3 * midpoint_integral(lambda x: math.log2(1 + 2 * x * x)) == pytest.approx(H3_RHS_BITS, abs=1e-9)


def test_lemma31_examples(h1, h3, hs):
    rep = verify_lemma31(h1)
    assert rep.lhs_bits == 0 and rep.rhs_bits == pytest.approx(0, abs=1e-12) and rep.passed
    rep = verify_lemma31(h3)
    assert rep.lhs_bits == pytest.approx(math.log2(3), abs=1e-12)
    assert rep.rhs_bits == pytest.approx(H3_RHS_BITS, abs=1e-9)
    assert rep.passed and rep.matching_count == 3
    rep = verify_lemma31(hs)
    assert rep.lhs_bits == 0 and rep.rhs_bits >= 0 and rep.passed


def test_lemma31_pre_jensen_is_tighter():
    for h in (ls_to_hypergraph(cayley_cyclic(5)), incidence_hypergraph(kdd_union(3), 3)):
        rep = verify_lemma31(h)
        assert rep.lhs_bits <= rep.pre_jensen_bits + 1e-9
        assert rep.jensen_gap_bits >= -1e-9


def test_lemma31_sampled_mode():
    h = ls_to_hypergraph(cayley_cyclic(5))
    exact = verify_lemma31(h)
    sampled = verify_lemma31(h, exact_limit=1, samples=400, seed=3)
    assert sampled.mode == "sampled" and sampled.passed is None
    lo, hi = sampled.ci
    assert lo <= sampled.rhs_bits <= hi
    assert abs(sampled.rhs_bits - exact.rhs_bits) < 0.05


def test_lemma31_infeasible():
    with pytest.raises(Infeasible):
        verify_lemma31(ls_to_hypergraph(cayley_cyclic(4)))


def test_lemma33_examples(hs, ht, h3):
    rep = verify_lemma33(hs)
    assert (rep.max_s, rep.s_bound, rep.max_t, rep.t_bound) == (1, 2, 0, 0) and rep.passed
    rep = verify_lemma33(ht)
    assert (rep.max_s, rep.max_t, rep.t_bound) == (0, 1, 2) and rep.passed
    rep = verify_lemma33(h3)
    assert rep.passed and rep.checked_matchings == 3
    assert rep.worst_s_slack == rep.worst_t_slack == 0


def test_lemma33_sampled_flag(h3):
    rep = verify_lemma33(h3, sampled=True, samples=30, seed=1)
    assert rep.checked_matchings == 30 and rep.passed


def test_dominance_examples(h3):
    rep = verify_bound_dominance(h3)
    assert rep.ln_count == pytest.approx(math.log(3))
    assert rep.ln_bound == pytest.approx(1.786482, abs=1e-6)
    assert rep.gap_per_a == pytest.approx(0.2293, abs=1e-4)
    rep = verify_bound_dominance(incidence_hypergraph(kdd_union(3), 3))
    assert rep.count == 12
    assert rep.ln_bound == pytest.approx(9 * 0.59549393727604, abs=1e-9)
    rep = verify_bound_dominance(pruned_hypergraph(cayley_cyclic(4)))
    assert rep.passed and rep.count == 0 and rep.ln_bound is None


@settings(max_examples=100, deadline=None)
@given(hypergraphs())
def test_dominance_and_lemmas_on_random_instances(h):
    assert verify_bound_dominance(h).passed
    if all_matchings(h):
        assert verify_lemma31(h).passed
        assert verify_lemma33(h).passed


def test_entropy_of_uniform():
    assert entropy_of_uniform(1) == 0
    assert entropy_of_uniform(8) == 3
    assert entropy_of_uniform(3) == pytest.approx(1.5849625007)
    with pytest.raises(ValueError):
        entropy_of_uniform(0)


@pytest.mark.parametrize("order", [(0, 1, 2), (2, 0, 1), (1, 2, 0)])
def test_chain_rule_on_h3(h3, order):
    outcomes = [tuple(x.edge_of(h3)[a] for a in range(3)) for x in all_matchings(h3)]
    parts = chain_rule_entropies(outcomes, order)
    assert sum(parts) == pytest.approx(math.log2(3), abs=1e-9)
    assert parts[0] == pytest.approx(math.log2(3), abs=1e-12)


def test_chain_rule_on_rand6():
    from conftest import FIXTURES
    from matchbound.constructions import parse_latin_square

    h = ls_to_hypergraph(parse_latin_square((FIXTURES / "rand6.ls").read_text()))
    xs = all_matchings(h)
    outcomes = [tuple(x.edge_of(h)[a] for a in range(h.a_count)) for x in xs]
    assert sum(chain_rule_entropies(outcomes, [5, 1, 3, 0, 2, 4])) == pytest.approx(math.log2(len(xs)), abs=1e-9)


def test_sampler_uniformity(h3, hs):
    rep = sampler_uniformity_test(h3, 3000, seed=1)
    assert rep.passed and rep.dof == 2 and sum(rep.frequencies) == 3000
    with pytest.raises(ValueError, match="at least 2 matchings"):
        sampler_uniformity_test(hs, 3000, seed=1)
    with pytest.raises(ValueError, match="too few trials"):
        sampler_uniformity_test(h3, 100, seed=1)
    double = disjoint_union(h3, h3)
    rep = sampler_uniformity_test(double, 4500, seed=2)
    assert rep.passed and rep.dof == 8


def test_records_are_json_with_units(h3):
    for rep, units in ((verify_lemma31(h3), "bits"), (verify_lemma33(h3), "edges"),
                       (verify_bound_dominance(h3), "nats"), (sampler_uniformity_test(h3, 3000, 0), "chi-square")):
        rec = rep.record("h3")
        assert {"instance_id", "lemma", "lhs", "rhs", "pass", "slack", "units"} <= rec.keys()
        assert rec["units"] == units
        json.dumps(rec)


def test_analyze_square_z5():
    out = analyze_square(cayley_cyclic(5))
    assert out["transversals"] == "15" and out["transversal_free"] == []
    assert out["pruned"]["edges"] == 25 and out["dominance_pass"]
    assert out["ln_envelope_e2"] - out["ln_bound_2117"] == pytest.approx(0.117 * 5)
