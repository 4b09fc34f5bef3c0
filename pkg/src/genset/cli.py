"""Command line front end: ``genset <command> --group SPEC``.

Machine-readable output goes to stdout, a one-line summary to stderr.
Exit status: 0 success, 1 usage, 2 order cap or search budget exceeded,
3 internal invariant violation or failed verification.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

from . import autgraph, equiv, gengraph, lattice
from .analysis import Analysis
from .cache import LatticeCache
from .catalog import InvalidSpec, ParseError, PointOutOfRange
from .perm import DEFAULT_CAP, OrderExceedsCap

SCHEMA = "genset/1"

EXIT_USAGE = 1
EXIT_LIMIT = 2
EXIT_INTERNAL = 3

LIMIT_ERRORS = (OrderExceedsCap, lattice.BudgetExceeded, equiv.BudgetExceeded,
                gengraph.BudgetExceeded, autgraph.BudgetExceeded)
USAGE_ERRORS = (InvalidSpec, ParseError, PointOutOfRange, FileNotFoundError)


class UsageError(Exception):
    pass


class UnknownSuite(UsageError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- helpers -----------------------------------------------------------------------


def _analysis(args) -> Analysis:
    cache_dir = args.cache_dir or os.environ.get("GENSET_CACHE")
    cache = LatticeCache(cache_dir) if cache_dir else None
    kwargs = {"cap": args.cap, "cache": cache}
    if args.budget is not None:
        kwargs["budget"] = args.budget
    return Analysis(args.group, **kwargs)


def _search_budget(args, default: int) -> int:
    return args.budget if args.budget is not None else default


def _relation(text: str):
    if text in ("c", "m", "m2"):
        return text
    if text.startswith("mr:"):
        try:
            r = int(text[3:])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad rank in {text!r}") from None
        if r < 1:
            raise argparse.ArgumentTypeError("rank must be at least 1")
        return ("mr", r)
    raise argparse.ArgumentTypeError(f"unknown relation {text!r}")


def _partition(an: Analysis, rel):
    if rel == "c":
        return an.c_partition
    if rel == "m":
        return an.m_partition
    if rel == "m2":
        return an.mr_partition(2)
    return an.mr_partition(rel[1])


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps({"schema": SCHEMA, **obj}, indent=2, sort_keys=True) + "\n")


def _spread_value(v):
    return "inf" if v == math.inf else v


def graph_dot(rg: gengraph.WeightedReducedGraph, name: str = "reduced") -> str:
    lines = [f'graph "{name}" {{']
    for v in range(rg.vertex_count):
        attrs = f'label="{v}/{rg.weights[v]}"'
        if rg.loops[v]:
            attrs += ", peripheries=2"
        if v == rg.identity_vertex:
            attrs += ", shape=box"
        lines.append(f"  v{v} [{attrs}];")
    for u in range(rg.vertex_count):
        for v in range(u, rg.vertex_count):
            if rg.has_edge(u, v):
                lines.append(f"  v{u} -- v{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_json(rg: gengraph.WeightedReducedGraph) -> dict:
    return {
        "vertex_count": rg.vertex_count,
        "weights": rg.weights,
        "loops": [v for v in range(rg.vertex_count) if rg.loops[v]],
        "identity_vertex": rg.identity_vertex,
        "edges": [[u, v] for u in range(rg.vertex_count) for v in range(u + 1, rg.vertex_count)
                  if rg.has_edge(u, v)],
    }


# -- commands ----------------------------------------------------------------------


def cmd_psi(args) -> int:
    an = _analysis(args)
    rep = an.psi_report
    _emit_json({"group": args.group, "order": str(an.order), "d": rep.d, "psi": rep.psi,
                "cap_used": rep.cap_used,
                "classes_by_rank": {str(r): len(p) for r, p in rep.partitions_by_r.items()},
                "m_classes": len(an.m_partition)})
    print(f"{args.group}: d={rep.d} psi={rep.psi}", file=sys.stderr)
    return 0


def cmd_classes(args) -> int:
    an = _analysis(args)
    rel = args.relation
    if args.emit == "dot":
        if rel != "m2":
            raise UsageError("DOT output is only available for --relation m2 (the reduced graph)")
        sys.stdout.write(graph_dot(an.reduced_graph, args.group))
        return 0
    part = _partition(an, rel)
    label = rel if isinstance(rel, str) else f"mr:{rel[1]}"
    _emit_json({"group": args.group, "order": str(an.order), "relation": label, "count": len(part),
                "sizes": part.sizes(),
                "representatives": [str(an.index.element(r)) for r in part.reps]})
    print(f"{args.group}: {len(part)} classes of relation {label}", file=sys.stderr)
    return 0


def cmd_graph(args) -> int:
    an = _analysis(args)
    rg = an.reduced_graph
    if args.emit == "dot":
        sys.stdout.write(graph_dot(rg, args.group))
    else:
        _emit_json({"group": args.group, "order": str(an.order), **graph_json(rg)})
    print(f"{args.group}: reduced graph with {rg.vertex_count} vertices", file=sys.stderr)
    return 0


def cmd_params(args) -> int:
    an = _analysis(args)
    rg = an.reduced_graph
    budget = _search_budget(args, gengraph.DEFAULT_BUDGET)
    out = {"group": args.group, "order": str(an.order), "d": an.d,
           "frattini_order": an.frattini.size,
           "efficiently_generated": an.efficiently_generated,
           "spread": _spread_value(gengraph.spread(rg, budget)),
           "clique_number": gengraph.clique_number(rg, budget)}
    try:
        out["chromatic_number"] = gengraph.chromatic_number(rg, budget)
    except gengraph.LoopsUnsupported:
        out["chromatic_number"] = None
    try:
        out["total_domination_number"] = gengraph.total_domination_number(rg, budget)
    except gengraph.Undefined:
        out["total_domination_number"] = None
    _emit_json(out)
    print(f"{args.group}: spread={out['spread']} clique={out['clique_number']}", file=sys.stderr)
    return 0


def cmd_autgamma(args) -> int:
    an = _analysis(args)
    rg = an.reduced_graph
    budget = _search_budget(args, autgraph.DEFAULT_BUDGET)
    weighted = autgraph.graph_aut(rg, weighted=True, budget=budget)
    unweighted = autgraph.graph_aut(rg, weighted=False, budget=budget)
    order = autgraph.aut_gamma_order(an.group, rg, weighted)
    _emit_json({"group": args.group, "order": str(order),
                "kernel_order": str(autgraph.weight_kernel_order(rg)),
                "weighted_aut_order": str(weighted.order),
                "unweighted_aut_order": str(unweighted.order),
                "vertex_count": rg.vertex_count, "weights": rg.weights,
                "generators": [list(g) for g in weighted.generators]})
    print(f"{args.group}: |Aut(Gamma)| = {order}", file=sys.stderr)
    return 0


def cmd_autgroup(args) -> int:
    an = _analysis(args)
    order = autgraph.aut_group_order(an.action, an.levels)
    _emit_json({"group": args.group, "aut_group_order": str(order)})
    print(f"{args.group}: |Aut(G)| = {order}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    from .suites import SUITES

    suite = SUITES.get(args.suite)
    if suite is None:
        raise UnknownSuite(f"unknown suite {args.suite!r}; choose from {', '.join(sorted(SUITES))}")
    failures = 0
    results = []
    for name, check in suite(args.cap):
        start = time.perf_counter()
        try:
            ok, detail = check()
        except LIMIT_ERRORS as exc:
            ok, detail = None, f"skipped: {exc}"
        except (AssertionError, equiv.InternalError) as exc:
            ok, detail = False, str(exc)
        elapsed = time.perf_counter() - start
        status = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
        failures += ok is False
        results.append({"check": name, "status": status, "detail": detail, "seconds": round(elapsed, 2)})
        print(f"{status} {name}: {detail}", file=sys.stderr)
    _emit_json({"suite": args.suite, "results": results, "failures": failures})
    return EXIT_INTERNAL if failures else 0


# -- entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest group order to enumerate")
    common.add_argument("--budget", type=int, default=None, help="search budget (subgroups or search nodes)")
    common.add_argument("--cache-dir", default=None, help="lattice cache directory (default $GENSET_CACHE)")
    common.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work is single-threaded")
    common.add_argument("--emit", choices=("json", "dot"), default="json")

    parser = _Parser(prog="genset", description="Generation invariants of small permutation groups.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def group_command(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--group", required=True, help="group spec, e.g. Sn:4, PSL2:7, file:gens.txt")
        p.set_defaults(func=func)
        return p

    group_command("psi", cmd_psi, "d(G) and the stabilisation rank psi(G)")
    p = group_command("classes", cmd_classes, "classes of an equivalence relation")
    p.add_argument("--relation", type=_relation, default="m", help="c, m, m2 or mr:<r>")
    group_command("graph", cmd_graph, "the weighted reduced generating graph")
    group_command("params", cmd_params, "spread, clique, chromatic and total domination numbers")
    group_command("autgamma", cmd_autgamma, "order of the automorphism group of the generating graph")
    group_command("autgroup", cmd_autgroup, "order of the automorphism group of the group")
    p = sub.add_parser("verify", parents=[common], help="run a named check suite")
    p.add_argument("suite")
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    if args.cap < 1:
        parser.error("--cap must be positive")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"genset: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except USAGE_ERRORS as exc:
        print(f"genset: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LIMIT_ERRORS as exc:
        print(f"genset: limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (equiv.InternalError, AssertionError) as exc:
        print(f"genset: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
