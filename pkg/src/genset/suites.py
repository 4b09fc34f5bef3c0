"""Named check suites run by ``genset verify``.

Each suite maps a cap to a list of ``(name, check)``; a check returns
``(ok, detail)``.  Groups above the cap raise and are reported as skipped.
"""

from __future__ import annotations

import math

from . import autgraph, gengraph
from .analysis import Analysis


def _expect(name, compute, expected):
    def check():
        found = compute()
        return found == expected, f"expected {expected}, found {found}"
    return name, check


def _analysis(spec, cap):
    return Analysis(spec, cap=cap)


def cyclic_suite(cap):
    def run(n):
        def check():
            report = autgraph.closed_form_cyclic(n, _analysis(f"Cn:{n}", cap))
            return True, f"{report['vertex_count']['found']} vertices, weights {report['weights']['found']}"
        return check
    return [(f"cyclic C{n}", run(n)) for n in (30, 210, 546)]


def s4_suite(cap):
    def an():
        return _analysis("Sn:4", cap)
    return [
        _expect("psi(S4)", lambda: an().psi, 3),
        _expect("m-classes of S4", lambda: len(an().m_partition), 15),
        _expect("reduced graph vertices of S4", lambda: an().reduced_graph.vertex_count, 14),
        _expect("spread(S4)", lambda: gengraph.spread(an().reduced_graph), 0),
        _expect("S4 efficiently generated", lambda: an().efficiently_generated, False),
    ]


SMALL_SIMPLE_PSI = {"An:5": 2, "Sn:5": 2, "An:6": 2, "PSL2:7": 2, "PSL2:8": 2, "PSL2:9": 2,
                    "PSL2:11": 2, "PSL2:13": 2, "M11": 2, "PGammaL2:9": 3}


def smallsimple_suite(cap):
    return [_expect(f"psi({spec})", (lambda s=spec: _analysis(s, cap).psi), value)
            for spec, value in SMALL_SIMPLE_PSI.items()]


def elemab_suite(cap):
    checks = []
    for p in (2, 3, 5):
        def check(p=p):
            an = _analysis(f"ElemAb:{p},2", cap)
            rg = an.reduced_graph
            clique = [v for v in range(rg.vertex_count) if v != rg.identity_vertex]
            found = (rg.vertex_count, sorted({rg.weights[v] for v in clique}),
                     autgraph.graph_aut(rg, False).order, autgraph.graph_aut(rg, True).order,
                     autgraph.aut_gamma_order(an.group, rg))
            expected = (p + 2, [p - 1], math.factorial(p + 1), math.factorial(p + 1),
                        math.factorial(p - 1) ** (p + 1) * math.factorial(p + 1))
            return found == expected, f"expected {expected}, found {found}"
        checks.append((f"C{p} x C{p}", check))
    return checks


def affine_suite(cap):
    def run(p, k, n):
        def check():
            try:
                autgraph.closed_form_affine(p, k, n, _analysis(f"Affine:{p},{k},{n}", cap))
            except autgraph.Mismatch as exc:
                return False, str(exc)
            return True, "vertex count and both automorphism orders as predicted"
        return check
    return [("C5:C4", run(5, 1, 4)), ("C7:C3", run(7, 1, 3))]


COINCIDE = ("Sn:5", "Sn:6", "An:5", "An:6", "PSL2:7", "PSL2:11", "PSL2:13")
DIFFER = ("Sharply2t:17", "PaperEx2")


def equivalence_suite(cap):
    def counts(spec):
        an = _analysis(spec, cap)
        return len(an.c_partition), len(an.m_partition)

    checks = []
    for spec in COINCIDE:
        def check(spec=spec):
            c, m = counts(spec)
            return c == m, f"{c} c-classes, {m} m-classes"
        checks.append((f"c equals m on {spec}", check))
    for spec in DIFFER:
        def check(spec=spec):
            c, m = counts(spec)
            return c > m, f"{c} c-classes, {m} m-classes"
        checks.append((f"c strictly finer than m on {spec}", check))
    return checks


def wreath_suite(cap):
    from .wreath import nonzero_spread_wreath_subgroups

    def found():
        groups = nonzero_spread_wreath_subgroups()
        return len(groups), f"{len(groups)} subgroups of orders {[g.order() for g in groups]}"

    def per_group(i):
        def check():
            g = nonzero_spread_wreath_subgroups()[i]
            an = Analysis(g, cap=max(cap, g.order()))
            weighted = autgraph.graph_aut(an.reduced_graph, True).order
            aut = autgraph.aut_group_order(an.action, an.levels)
            ok = an.psi == 2 and weighted == aut
            return ok, f"order {g.order()}: psi={an.psi}, graph {weighted}, group {aut}"
        return check

    def count():
        n, detail = found()
        return n == 2, detail

    return [("two nonzero-spread subgroups", count), ("first subgroup", per_group(0)),
            ("second subgroup", per_group(1))]


SUITES = {
    "cyclic": cyclic_suite,
    "s4": s4_suite,
    "smallsimple": smallsimple_suite,
    "elemab": elemab_suite,
    "affine": affine_suite,
    "equivalence": equivalence_suite,
    "wreath": wreath_suite,
}
