import io
import json
import math

import pytest

from matchbound import cli
from matchbound.bounds import BoundParameters, coloring_bound_ln, finite_matching_bound
from matchbound.constructions import cayley_cyclic, kdd_union, ls_to_hypergraph, parse_latin_square
from matchbound.enumeration import count_transversals, per_entry_transversal_counts
from matchbound.hypercore import parse_hypergraph
from matchbound.verify import analyze_square, verify_lemma31

from conftest import FIXTURES


def invoke(*argv, env=None):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def results(*argv):
    code, out, err = invoke(*argv)
    assert code == 0, err
    return json.loads(out)["results"]


def test_count_transversals_cayley5():
    assert results("count", "transversals", "--cayley", "5")["count"] == "15"


def test_transversal_envelope():
    res = results("bound", "transversal-envelope", "--n", "600")
    assert res["ln_bound_2117"] == pytest.approx(2568.0, abs=0.05)
    assert res["ln_envelope_e2"] == pytest.approx(2638.2, abs=0.05)


def test_verify_lemma31_on_z3_file():
    res = results("verify", "lemma31", "--square", str(FIXTURES / "z3.ls"))
    lib = verify_lemma31(ls_to_hypergraph(cayley_cyclic(3)))
    assert res["lhs"] == pytest.approx(1.58496, abs=1e-5)
    assert res["rhs"] == float(f"{lib.rhs_bits:.12g}")
    assert res["pass"] is True


def test_golden_against_library_calls():
    l = parse_latin_square((FIXTURES / "rand6.ls").read_text())
    res = results("count", "per-entry", "--square", str(FIXTURES / "rand6.ls"))
    assert res["per_entry"] == [[str(v) for v in row] for row in per_entry_transversal_counts(l)]
    assert res["count"] == str(count_transversals(l).count)
    res = results("bound", "finite", "--hypergraph", str(FIXTURES / "ht.hg"))
    lib = finite_matching_bound(BoundParameters.of(parse_hypergraph((FIXTURES / "ht.hg").read_text())))
    assert res["ln_bound"] == float(f"{lib.ln_bound:.12g}") and res["method"] == lib.method
    res = results("bound", "coloring", "--kdd", "4", "--q", "5")
    assert res["ln_bound"] == float(f"{coloring_bound_ln(8, 4, 2, 5, 'finite'):.12g}")
    res = results("analyze", "square", "--cayley", "5")
    assert res == cli.canonical({"instance_id": "cayley5", **analyze_square(cayley_cyclic(5))})


def test_bound_finite_explicit_parameters():
    res = results("bound", "finite", "--a-count", "3", "--k", "2", "--q-avg", "3", "--d", "3",
                  "--delta2", "1", "--rho", "2")
    assert res["ln_bound"] == pytest.approx(1.786482, abs=1e-6)


def test_bound_coloring_modes():
    res = results("bound", "coloring", "--n", "8", "--d", "4", "--k", "2", "--q", "4", "--mode", "asymptotic")
    assert res["ln_bound"] == pytest.approx(16 * (math.log(4) - 2)) and res["certified"] is False


def test_count_colorings_and_matchings():
    assert results("count", "colorings", "--graph", str(FIXTURES / "k33.ug"), "--q", "3",
                   "--method", "both")["count"] == "12"
    assert results("count", "matchings", "--kdd", "2", "--q", "2")["count"] == "2"
    assert results("count", "matchings", "--hypergraph", str(FIXTURES / "hs.hg"))["count"] == "1"
    assert results("count", "matchings", "--square", str(FIXTURES / "rand5.ls"), "--pruned")["count"] == "3"


def test_verify_other_lemmas():
    assert results("verify", "lemma33", "--hypergraph", str(FIXTURES / "hs.hg"))["slack"] == [1, 0]
    assert results("verify", "dominance", "--kdd", "3", "--q", "3")["count"] == "12"
    res = results("verify", "sampler", "--cayley", "3", "--trials", "3000", "--seed", "4")
    assert res["pass"] is True and res["dof"] == 2


def test_gen_and_encode_round_trip(tmp_path):
    out = tmp_path / "z4.ls"
    res = results("gen", "cayley", "--n", "4", "--out", str(out))
    assert parse_latin_square(out.read_text()) == cayley_cyclic(4) and res["order"] == 4
    hg = tmp_path / "z4.hg"
    results("encode", "square", "--square", str(out), "--out", str(hg))
    assert parse_hypergraph(hg.read_text()) == ls_to_hypergraph(cayley_cyclic(4))
    res = results("encode", "square", "--cayley", "4", "--pruned")
    assert res["stats"]["edges"] == 0
    res = results("encode", "square", "--cayley", "3", "--exclude", "0,0", "1,1")
    assert res["stats"]["edges"] == 7
    res = results("gen", "kdd", "--d", "3", "--copies", "2")
    assert res["n_vertices"] == 12 and res["edges"] == 18
    res = results("encode", "incidence", "--kdd", "2", "--q", "2")
    assert res["stats"]["b_count"] == 8


def test_inputs_are_digested():
    code, out, _ = invoke("count", "transversals", "--square", str(FIXTURES / "z3.ls"))
    report = json.loads(out)
    assert len(report["inputs"][str(FIXTURES / "z3.ls")]) == 64


def test_csv_format():
    code, out, _ = invoke("count", "transversals", "--cayley", "3", "--format", "csv")
    assert code == 0
    rows = dict(line.split(",", 1) for line in out.strip().splitlines()[1:])
    assert rows["results.count"] == "3"


def test_timing_is_opt_in():
    _, out, _ = invoke("count", "transversals", "--cayley", "3")
    assert "elapsed" not in out
    _, out, _ = invoke("count", "transversals", "--cayley", "3", "--timing")
    assert "elapsed" in json.loads(out)


def test_threads_env_fallback(monkeypatch):
    monkeypatch.setenv("MATCHBOUND_THREADS", "2")
    assert cli.build_parser().parse_args(["count", "transversals", "--cayley", "3"]).threads == 2
    assert results("count", "transversals", "--cayley", "9")["count"] == "2025"


def test_exit_codes(tmp_path):
    bad = tmp_path / "bad.ls"
    bad.write_text("2\n0 1\n0 1\n")
    code, _, err = invoke("count", "transversals", "--square", str(bad))
    assert code == 2 and "column 0 repeats symbol 0" in err and str(bad) in err
    code, _, err = invoke("count", "transversals", "--square", str(tmp_path / "missing.ls"))
    assert code == 2 and "missing.ls" in err
    code, _, _ = invoke("count", "transversals", "--bogus")
    assert code == 2
    code, _, err = invoke("verify", "lemma31", "--cayley", "4")
    assert code == 1 and "infeasible" in err
    code, _, err = invoke("count", "per-entry", "--cayley", "7", "--max-order", "5")
    assert code == 1 and "too large" in err
    code, _, err = invoke("count", "transversals", "--cayley", "7", "--max-nodes", "10")
    assert code == 1 and "budget exhausted" in err


def test_canonical_floats():
    assert cli.canonical({"x": 1 / 3, "y": float("-inf"), "z": (1, 2)}) == {"x": 0.333333333333, "y": "-inf", "z": [1, 2]}


def test_determinism_same_bytes():
    a = invoke("analyze", "square", "--square", str(FIXTURES / "z5.ls"), "--seed", "9")[1]
    b = invoke("analyze", "square", "--square", str(FIXTURES / "z5.ls"), "--seed", "9")[1]
    assert a == b
