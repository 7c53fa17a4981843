"""``matchbound`` command line.

Each subcommand parses its inputs, calls one library entry point and prints a
run report.  Output is canonical: sorted keys, floats at 12 significant
digits, counts as decimal strings, no wall-clock fields unless ``--timing``.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bounds import (
    DEFAULT_TOL,
    BoundParameters,
    coloring_bound_ln,
    finite_matching_bound,
    reference_envelope_ln,
    transversal_bound_ln,
)
from .constructions import (
    DEFAULT_MAX_ORDER,
    cayley_cyclic,
    format_latin_square,
    format_uniform_hypergraph,
    incidence_hypergraph,
    kdd_union,
    ls_to_hypergraph,
    parse_latin_square,
    parse_uniform_hypergraph,
    transversal_free_entries,
)
from .enumeration import (
    DEFAULT_MAX_NODES,
    count_a_perfect_matchings,
    count_proper_colorings,
    count_transversals,
    per_entry_transversal_counts,
)
from .errors import MatchboundError, ParseError
from .hypercore import degree_stats, format_hypergraph, parse_hypergraph
from .verify import (
    analyze_square,
    sampler_uniformity_test,
    verify_bound_dominance,
    verify_lemma31,
    verify_lemma33,
)


class UsageError(Exception):
    pass


def canonical(obj):
    """JSON-ready copy with floats rounded to 12 significant digits."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return str(obj)
        return float(f"{obj:.12g}")
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


# -- instance loading ----------------------------------------------------------


class _Inputs:
    def __init__(self):
        self.digests: dict[str, str] = {}

    def read(self, path: str) -> str:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise UsageError(f"{path}: {exc.strerror}") from None
        self.digests[path] = hashlib.sha256(data).hexdigest()
        return data.decode()

    def parse(self, path, parser):
        try:
            return parser(self.read(path))
        except ParseError as exc:
            raise UsageError(f"{path}: {exc}") from None


def _square(args, inputs):
    if getattr(args, "square", None):
        return Path(args.square).stem, inputs.parse(args.square, parse_latin_square)
    if getattr(args, "cayley", None) is not None:
        return f"cayley{args.cayley}", cayley_cyclic(args.cayley)
    raise UsageError("need --square FILE or --cayley N")


def _graph(args, inputs):
    if getattr(args, "graph", None):
        return Path(args.graph).stem, inputs.parse(args.graph, parse_uniform_hypergraph)
    if getattr(args, "kdd", None) is not None:
        return f"kdd{args.kdd}x{args.copies}", kdd_union(args.kdd, args.copies)
    raise UsageError("need --graph FILE or --kdd D")


def _hypergraph(args, inputs):
    """Any bipartite hypergraph source: a file, a square encoding or an incidence hypergraph."""
    if args.hypergraph:
        return Path(args.hypergraph).stem, inputs.parse(args.hypergraph, parse_hypergraph)
    if args.square or args.cayley is not None:
        name, l = _square(args, inputs)
        if args.pruned:
            excluded = transversal_free_entries(l, max_order=args.max_order, workers=args.threads)
            return f"{name}-pruned", ls_to_hypergraph(l, excluded)
        return name, ls_to_hypergraph(l)
    if args.graph or args.kdd is not None:
        if args.q is None:
            raise UsageError("incidence hypergraph needs --q")
        name, g = _graph(args, inputs)
        return f"{name}-q{args.q}", incidence_hypergraph(g, args.q)
    raise UsageError("need one of --hypergraph, --square, --cayley, --graph, --kdd")


def _stats_payload(h):
    s = degree_stats(h)
    return {"a_count": h.a_count, "b_count": h.b_count, "k": h.k, "edges": h.edge_count,
            "q_avg": s.q_avg, "d_max_b": s.d_max_b, "delta2": s.delta2, "rho": s.rho,
            "min_a_degree": s.min_a_degree}


def _count_payload(rep, timing):
    out = {"count": str(rep.count), "ln_count": rep.ln_count, "nodes_visited": rep.nodes_visited}
    if timing:
        out["elapsed"] = rep.elapsed
    return out


def _write_out(args, text, payload):
    if args.out:
        Path(args.out).write_text(text)
        payload["out"] = args.out
        payload["sha256"] = hashlib.sha256(text.encode()).hexdigest()
    else:
        payload["text"] = text
    return payload


# -- subcommand handlers ---------------------------------------------------------


def cmd_gen(args, inputs):
    if args.what == "cayley":
        l = cayley_cyclic(args.n)
        return _write_out(args, format_latin_square(l), {"kind": "latin-square", "order": l.n})
    g = kdd_union(args.d, args.copies)
    return _write_out(args, format_uniform_hypergraph(g),
                      {"kind": "uniform-hypergraph", "n_vertices": g.n_vertices, "edges": len(g.edges)})


def cmd_encode(args, inputs):
    if args.what == "square":
        name, l = _square(args, inputs)
        excluded = set(tuple(map(int, rc.split(","))) for rc in args.exclude)
        if args.pruned:
            excluded |= transversal_free_entries(l, max_order=args.max_order, workers=args.threads)
        h = ls_to_hypergraph(l, excluded)
    else:
        name, g = _graph(args, inputs)
        h = incidence_hypergraph(g, args.q)
    return _write_out(args, format_hypergraph(h), {"instance_id": name, "stats": _stats_payload(h)})


def cmd_count(args, inputs):
    if args.what == "transversals":
        name, l = _square(args, inputs)
        rep = count_transversals(l, max_nodes=args.max_nodes, workers=args.threads)
    elif args.what == "per-entry":
        name, l = _square(args, inputs)
        matrix = per_entry_transversal_counts(l, max_nodes=args.max_nodes, workers=args.threads,
                                              max_order=args.max_order)
        return {"instance_id": name, "per_entry": [[str(v) for v in row] for row in matrix],
                "count": str(sum(matrix[0]))}
    elif args.what == "colorings":
        name, g = _graph(args, inputs)
        rep = count_proper_colorings(g, args.q, max_nodes=args.max_nodes, workers=args.threads,
                                     method=args.method)
        name = f"{name}-q{args.q}"
    else:
        name, h = _hypergraph(args, inputs)
        rep = count_a_perfect_matchings(h, max_nodes=args.max_nodes, workers=args.threads)
    return {"instance_id": name, **_count_payload(rep, args.timing)}


def cmd_bound(args, inputs):
    if args.what == "transversal-envelope":
        return {"n": args.n, "ln_bound_2117": transversal_bound_ln(args.n),
                "ln_envelope_e2": reference_envelope_ln(args.n),
                "difference": reference_envelope_ln(args.n) - transversal_bound_ln(args.n)}
    if args.what == "coloring":
        if args.graph or args.kdd is not None:
            name, g = _graph(args, inputs)
            if not g.regular:
                raise UsageError(f"{name}: coloring bound needs a regular hypergraph")
            n, d, k, delta2 = g.n_vertices, g.max_degree, g.k, max(g.codegree_max, 1)
        else:
            if None in (args.n, args.d, args.k):
                raise UsageError("need --graph/--kdd or all of --n --d --k")
            name, n, d, k, delta2 = "params", args.n, args.d, args.k, args.delta2
        return {"instance_id": name, "n": n, "d": d, "k": k, "q": args.q, "mode": args.mode,
                "ln_bound": coloring_bound_ln(n, d, k, args.q, args.mode, delta2=delta2, tol=args.tol),
                "certified": args.mode == "finite"}
    # finite
    if args.a_count is not None:
        p = BoundParameters(args.a_count, args.k or 2, args.q_avg, args.d, args.delta2, args.rho)
        name = "params"
    else:
        name, h = _hypergraph(args, inputs)
        p = BoundParameters.of(h)
    rep = finite_matching_bound(p, args.tol)
    return {"instance_id": name, "a_count": p.a_count, "k": p.k, "q": p.q, "d": p.d,
            "delta2": p.delta2, "rho": p.rho, "s_bar": p.s_bar, "t_bar": p.t_bar,
            "ln_bound": rep.ln_bound, "integrand_constant": rep.integrand_constant,
            "quadrature_error_estimate": rep.quadrature_error_estimate, "method": rep.method}


def cmd_verify(args, inputs):
    name, h = _hypergraph(args, inputs)
    if args.what == "lemma31":
        rep = verify_lemma31(h, tol=args.tol, samples=args.samples, seed=args.seed, max_nodes=args.max_nodes)
    elif args.what == "lemma33":
        rep = verify_lemma33(h, sampled=args.sampled, samples=args.samples, seed=args.seed,
                             max_nodes=args.max_nodes)
    elif args.what == "dominance":
        rep = verify_bound_dominance(h, tol=args.tol, max_nodes=args.max_nodes, workers=args.threads)
    else:
        rep = sampler_uniformity_test(h, args.trials, args.seed)
    return rep.record(name)


def cmd_analyze(args, inputs):
    name, l = _square(args, inputs)
    out = analyze_square(l, max_nodes=args.max_nodes, workers=args.threads, max_order=args.max_order,
                         tol=args.tol)
    return {"instance_id": name, **out}


# -- parser ------------------------------------------------------------------------


def _threads_default() -> int:
    try:
        return max(1, int(os.environ.get("MATCHBOUND_THREADS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--threads", type=int, default=_threads_default())
    common.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    common.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    common.add_argument("--timing", action="store_true", help="include wall-clock fields")

    def square_opts(p):
        p.add_argument("--square", metavar="FILE")
        p.add_argument("--cayley", type=int, metavar="N")

    def graph_opts(p):
        p.add_argument("--graph", metavar="FILE")
        p.add_argument("--kdd", type=int, metavar="D")
        p.add_argument("--copies", type=int, default=1)

    def instance_opts(p):
        p.add_argument("--hypergraph", metavar="FILE")
        square_opts(p)
        p.add_argument("--pruned", action="store_true", help="drop transversal-free cells")
        graph_opts(p)
        p.add_argument("--q", type=int, help="colors for the incidence hypergraph")

    parser = argparse.ArgumentParser(prog="matchbound", description="Exact counts and entropy upper bounds for A-perfect matchings.")
    parser.add_argument("--version", action="version", version=f"matchbound {__version__}")
    groups = parser.add_subparsers(dest="group", required=True)

    gen = groups.add_parser("gen").add_subparsers(dest="what", required=True)
    p = gen.add_parser("cayley", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p = gen.add_parser("kdd", parents=[common])
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--copies", type=int, default=1)
    p.add_argument("--out")

    enc = groups.add_parser("encode").add_subparsers(dest="what", required=True)
    p = enc.add_parser("square", parents=[common])
    square_opts(p)
    p.add_argument("--pruned", action="store_true")
    p.add_argument("--exclude", nargs="*", default=[], metavar="R,C")
    p.add_argument("--out")
    p = enc.add_parser("incidence", parents=[common])
    graph_opts(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--out")

    cnt = groups.add_parser("count").add_subparsers(dest="what", required=True)
    for what in ("transversals", "per-entry"):
        square_opts(cnt.add_parser(what, parents=[common]))
    instance_opts(cnt.add_parser("matchings", parents=[common]))
    p = cnt.add_parser("colorings", parents=[common])
    graph_opts(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--method", choices=("incidence", "direct", "both"), default="incidence")

    bnd = groups.add_parser("bound").add_subparsers(dest="what", required=True)
    p = bnd.add_parser("finite", parents=[common])
    instance_opts(p)
    p.add_argument("--a-count", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--q-avg", type=float, default=0.0)
    p.add_argument("--d", type=float, default=0.0)
    p.add_argument("--delta2", type=int, default=1)
    p.add_argument("--rho", type=float, default=2.0)
    p = bnd.add_parser("transversal-envelope", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p = bnd.add_parser("coloring", parents=[common])
    graph_opts(p)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--delta2", type=int, default=1)
    p.add_argument("--mode", choices=("finite", "asymptotic"), default="finite")

    ver = groups.add_parser("verify").add_subparsers(dest="what", required=True)
    for what in ("lemma31", "lemma33", "dominance", "sampler"):
        p = ver.add_parser(what, parents=[common])
        instance_opts(p)
        p.add_argument("--samples", type=int, default=2000, help="draws when the expectation is sampled")
        p.add_argument("--sampled", action="store_true", help="sample X instead of enumerating")
        p.add_argument("--trials", type=int, default=3000)

    ana = groups.add_parser("analyze").add_subparsers(dest="what", required=True)
    square_opts(ana.add_parser("square", parents=[common]))
    return parser


HANDLERS = {"gen": cmd_gen, "encode": cmd_encode, "count": cmd_count, "bound": cmd_bound,
            "verify": cmd_verify, "analyze": cmd_analyze}


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(canonical(report), sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key, value in _flatten(canonical(report)):
        writer.writerow([key, json.dumps(value) if isinstance(value, (bool, type(None))) else value])
    return buf.getvalue()


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = time.perf_counter()
    inputs = _Inputs()
    try:
        results = HANDLERS[args.group](args, inputs)
    except UsageError as exc:
        print(f"matchbound: error: {exc}", file=stderr)
        return 2
    except (MatchboundError, ValueError) as exc:
        print(f"matchbound: error: {exc}", file=stderr)
        return 1
    report = {
        "command": ["matchbound", *argv],
        "inputs": inputs.digests,
        "results": results,
        "seed": args.seed,
        "versions": {"matchbound": __version__},
    }
    if args.timing:
        report["elapsed"] = time.perf_counter() - started
    stdout.write(render(report, args.format))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
