"""Command-line entry point: ``midlayer <subcommand> ...``.

Exit codes: 0 success, 1 invalid input, 2 budget exhausted (partial output
is flagged with ``"status": "budget_exceeded"``). Run statistics that depend
on wall-clock time go to stderr (or ``--stats``) so stdout stays
byte-identical across runs and worker counts.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

import mpmath

from .asymptotics import CORRECT_SECOND_DENOMINATOR, main_formula_log2, stirling_gap
from .containers import (
    Thresholds,
    harvest_g1_pairs,
    harvest_g2_pairs,
    phi_approx,
    psi_approx,
    run_basic_container,
    sf_bound_report,
    verify_phi,
    verify_psi,
)
from .errors import BudgetExceeded, MidlayerError
from .graph import Graph
from .layer_graph import build_layer_graph, dump_graph_json
from .lower_bound import (
    enumerate_construction_m0,
    enumerate_constructions,
    find_defect_placement,
    lower_bound_value,
)
from .matching_assign import CLASSIFY_HEADER, assign_matching, classify_mis, direction_profile, edge_direction
from .mis_engine import count_mis, count_mis_oracle, enumerate_mis, hujter_tuza_audit, hujter_tuza_census, list_mis
from .reports import CSV_HEADER, IsoReport, _fmt
from .set_family import (
    SetFamily,
    adjacent_triplet_report,
    bey_bound_report,
    shadow_bound_report,
    triplet_identity_check,
    vertex_iso_report,
    vertices_from_family,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), sort_keys=True)


class Runner:
    def __init__(self, args):
        self.args = args
        self.stream = sys.stdout if args.output in (None, "-") else open(args.output, "w", newline="")

    def line(self, text: str) -> None:
        self.stream.write(text + "\n")

    def json(self, obj) -> None:
        self.line(_dumps(obj))

    def close(self):
        if self.stream is not sys.stdout:
            self.stream.close()
        else:
            self.stream.flush()

    # helpers -----------------------------------------------------------

    @property
    def workers(self) -> int:
        env = os.environ.get("MIDLAYER_THREADS")
        value = int(env) if env else self.args.workers
        if value < 1:
            raise UsageError("workers must be >= 1")
        return value

    def graph(self):
        a = self.args
        if getattr(a, "d", None) is not None:
            if a.d < 1:
                raise UsageError("--d must be >= 1")
            n, k = 2 * a.d - 1, a.d
        elif getattr(a, "n", None) is not None and getattr(a, "k", None) is not None:
            n, k = a.n, a.k
        else:
            raise UsageError("give --d or both --n and --k")
        return build_layer_graph(n, k)

    def all_mis(self, g):
        return list_mis(g, workers=self.workers, budget=self.args.budget)

    def stats(self, payload: dict) -> None:
        text = _dumps(payload)
        if self.args.stats:
            with open(self.args.stats, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text, file=sys.stderr)


# --------------------------------------------------------------------------
# subcommands


def cmd_build(r: Runner) -> None:
    g = r.graph()
    r.line(dump_graph_json(g))


def cmd_enumerate(r: Runner) -> None:
    g = r.graph()
    fmt = r.args.out or "stream"
    found: list[int] = []
    sink = (lambda s: r.line(format(s, "x"))) if fmt == "stream" else found.append
    try:
        st = enumerate_mis(g, sink, workers=r.workers, budget=r.args.budget)
    except BudgetExceeded as exc:
        st = exc.partial
        r.json({"schema": "v1", "status": "budget_exceeded", "partial_total": str(st.total)})
        r.stats(st.to_json())
        raise
    if fmt == "json":
        r.json({"schema": "v1", "n": g.n, "k": g.k, "total": str(st.total),
                "by_size": {str(k): str(v) for k, v in sorted(st.by_size.items())},
                "mis": [format(s, "x") for s in found]})
    r.stats(st.to_json())


def cmd_count(r: Runner) -> None:
    g = r.graph()
    which = r.args.oracle
    out = {"schema": "v1", "n": g.n, "k": g.k}
    try:
        if which in ("branch", "both"):
            out["count"] = str(count_mis(g, workers=r.workers, budget=r.args.budget))
        if which in ("clique", "both"):
            out["oracle_count"] = str(count_mis_oracle(g, workers=r.workers, budget=r.args.budget))
    except BudgetExceeded as exc:
        out["status"] = "budget_exceeded"
        partial = exc.partial.total if hasattr(exc.partial, "total") else exc.partial
        out["partial"] = None if partial is None else str(partial)
        r.json(out)
        raise
    if which == "both":
        out["agree"] = out["count"] == out["oracle_count"]
    r.json(out)


def cmd_classify(r: Runner) -> None:
    g = r.graph()
    rows = [classify_mis(g, s).csv_row() for s in r.all_mis(g)]
    if (r.args.out or "csv") == "csv":
        w = csv.writer(r.stream, lineterminator="\n")
        w.writerow(CLASSIFY_HEADER)
        w.writerows(rows)
    else:
        r.json({"schema": "v1", "rows": [dict(zip(CLASSIFY_HEADER, row)) for row in rows]})


def cmd_matching(r: Runner) -> None:
    g = r.graph()
    targets = [int(x, 16) for x in r.args.mis] if r.args.mis else r.all_mis(g)
    for s in targets:
        m = assign_matching(g, s)
        prof = direction_profile(g, s, m)
        r.json({
            "schema": "v1",
            "mis_hex": format(s, "x"),
            "size": len(m),
            "edges": [[u, v, edge_direction(g, u, v)] for u, v in m.edges],
            "profile": list(prof.counts),
            "beta": _fmt(prof.beta),
        })


def cmd_containers(r: Runner) -> None:
    g = r.graph()
    a = r.args
    if a.mode == "basic":
        th = Thresholds(a.stop_a, a.stop_b)
        for s in r.all_mis(g):
            cert = run_basic_container(g, s, th)
            r.json({"mis_hex": format(s, "x"), **cert.to_json()})
        return
    if a.phi is None or a.psi is None:
        raise UsageError("sapozhenko needs --phi and --psi")
    emitted = 0
    for s in r.all_mis(g):
        pairs = harvest_g1_pairs(g, s) if a.family == "g1" else harvest_g2_pairs(g, s, a.direction)
        for pair in pairs:
            if emitted >= a.max_pairs:
                return
            ap = phi_approx(g, pair, a.phi, a.seed)
            ps = psi_approx(g, pair, ap.f_prime, a.psi, a.phi, a.seed)
            out = {
                "mis_hex": format(s, "x"),
                "family": a.family,
                "core_hex": format(pair.core, "x"),
                "H_hex": format(pair.H, "x"),
                "phi_ok": verify_phi(g, pair, a.phi, ap.f_prime)[0],
                "psi_ok": verify_psi(g, pair, a.psi, ps.S, ps.F)[0],
                "phi_stage": ap.to_json(),
                "psi_stage": ps.to_json(),
            }
            if a.psi < g.k:
                rep = sf_bound_report(g, pair, a.psi, ps.S, ps.F)
                out["sf_slack"] = str(rep.slack)
            r.json(out)
            emitted += 1


def _iso_rows(g, fam: SetFamily, qs):
    for q in qs:
        yield shadow_bound_report(fam, q)
    if g is None:
        return
    a = vertices_from_family(g, fam)
    for variant in ("i", "ii", "iii"):
        yield vertex_iso_report(g, a, variant)
    yield adjacent_triplet_report(g, a)
    yield bey_bound_report(g, a)
    lhs, rhs = triplet_identity_check(g, a)
    yield IsoReport("triplet-identity", Fraction(lhs), Fraction(rhs), sense="==")


def cmd_iso(r: Runner) -> None:
    with open(r.args.family) as fh:
        fam = SetFamily.loads(fh.read())
    g = None
    if fam.n == 2 * fam.m - 1 and fam.members:
        g = build_layer_graph(fam.n, fam.m)
    w = csv.writer(r.stream, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rep in _iso_rows(g, fam, range(1, fam.m + 1)):
        w.writerow(rep.csv_row())


def cmd_lowerbound(r: Runner) -> None:
    a = r.args
    if a.mode == "value":
        v = lower_bound_value(a.d, a.mmax, a.prec)
        r.json(v.to_json())
        return
    g = r.graph()
    count = 0

    def sink(s):
        nonlocal count
        count += 1
        if a.emit == "stream":
            r.line(format(s, "x"))

    budget = a.budget or (1 << 22)
    try:
        if a.m == 0:
            enumerate_construction_m0(g, a.k_dir, sink, budget=budget)
        else:
            placement = find_defect_placement(g, a.k_dir, a.m)
            if placement is None:
                r.json({"schema": "v1", "status": "infeasible", "d": g.k, "m": a.m,
                        "reason": "no placement with pairwise distance >= 10"})
                return
            enumerate_constructions(g, a.k_dir, placement, sink, budget=budget)
    except BudgetExceeded:
        r.json({"schema": "v1", "status": "budget_exceeded", "partial_count": str(count)})
        raise
    if a.emit != "stream":
        r.json({"schema": "v1", "d": g.k, "direction": a.k_dir, "m": a.m, "count": str(count)})


def cmd_asympt(r: Runner) -> None:
    a = r.args
    est = main_formula_log2(a.d, a.prec)
    out = est.to_json()
    if a.d >= 2:
        digits = max(15, int(a.prec * 0.30103))
        for label, c in (("stated", 24), ("corrected", CORRECT_SECOND_DENOMINATOR)):
            gap = stirling_gap(a.d, a.prec, c)
            out[f"stirling_gap_times_sqrt_d_{label}"] = mpmath.nstr(gap.gap_times_sqrt_d, digits)
    r.json(out)


def cmd_hujter_tuza(r: Runner) -> None:
    a = r.args
    if a.edges is not None:
        edges = [tuple(int(x) for x in e.split("-")) for e in a.edges.split(",") if e]
        g = Graph.from_edges(a.vertices, edges)
        audit = hujter_tuza_audit(g)
        r.json({"schema": "v1", "vertices": audit.num_vertices, "count": str(audit.count),
                "holds": audit.holds, "equality": audit.equality,
                "is_perfect_matching": audit.is_perfect_matching})
        return
    for row in hujter_tuza_census(a.max_vertices):
        r.json({"schema": "v1", "vertices": row.num_vertices, "graphs": row.graphs,
                "violations": row.violations, "equality_cases": row.equality_cases,
                "equality_mismatches": row.equality_mismatches, "max_count": row.max_count})


# --------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser, graph: bool = True) -> None:
    if graph:
        p.add_argument("--d", type=int, help="middle-layer degree; implies n = 2d-1, k = d")
        p.add_argument("--n", type=int)
        p.add_argument("--k", type=int)
    p.add_argument("--budget", type=int, default=None, help="node or size cap; exceeding it exits with code 2")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prec", type=int, default=128, help="working precision in bits")
    p.add_argument("--output", default=None, help="write results here instead of stdout")
    p.add_argument("--stats", default=None, help="write timing statistics here instead of stderr")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="midlayer", description="Maximal independent sets in two-layer Boolean lattice graphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("build")
    _common(s)
    s.add_argument("--out", choices=["json"], default="json")

    s = sub.add_parser("enumerate")
    _common(s)
    s.add_argument("--out", choices=["stream", "json"], default="stream")

    s = sub.add_parser("count")
    _common(s)
    s.add_argument("--oracle", choices=["branch", "clique", "both"], default="branch")

    s = sub.add_parser("classify")
    _common(s)
    s.add_argument("--out", choices=["csv", "json"], default="csv")

    s = sub.add_parser("matching")
    _common(s)
    s.add_argument("--mis", nargs="*", help="hex bitmasks; default is every maximal independent set")

    s = sub.add_parser("containers")
    s.add_argument("mode", choices=["basic", "sapozhenko"])
    _common(s)
    s.add_argument("--stop-a", type=int, default=0, help="stop once the remainder has at most this many vertices")
    s.add_argument("--stop-b", type=int, default=None, help="stop once the certificate has this many vertices")
    s.add_argument("--phi", type=int)
    s.add_argument("--psi", type=int)
    s.add_argument("--family", choices=["g1", "g2"], default="g1")
    s.add_argument("--direction", type=int, default=1)
    s.add_argument("--max-pairs", type=int, default=50)

    s = sub.add_parser("iso")
    s.add_argument("mode", choices=["audit"])
    s.add_argument("--family", required=True, help="set-family file: header 'n=.. m=..' then hex masks")
    _common(s, graph=False)

    s = sub.add_parser("lowerbound")
    s.add_argument("mode", nargs="?", choices=["construct", "value"], default="construct")
    _common(s, graph=False)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--k", dest="k_dir", type=int, default=1, help="direction of the canonical matching")
    s.add_argument("--m", type=int, default=0)
    s.add_argument("--mmax", type=int, default=None)
    s.add_argument("--emit", choices=["stream", "count"], default="count")

    s = sub.add_parser("asympt")
    _common(s, graph=False)
    s.add_argument("--d", type=int, required=True)

    s = sub.add_parser("hujter-tuza")
    _common(s, graph=False)
    s.add_argument("--max-vertices", type=int, default=8)
    s.add_argument("--edges", default=None, help="audit one graph, e.g. '0-1,2-3'")
    s.add_argument("--vertices", type=int, default=0)
    return p


COMMANDS = {
    "build": cmd_build,
    "enumerate": cmd_enumerate,
    "count": cmd_count,
    "classify": cmd_classify,
    "matching": cmd_matching,
    "containers": cmd_containers,
    "iso": cmd_iso,
    "lowerbound": cmd_lowerbound,
    "asympt": cmd_asympt,
    "hujter-tuza": cmd_hujter_tuza,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"midlayer: error: {exc}", file=sys.stderr)
        return 1
    if args.command == "lowerbound":
        args.n, args.k = 2 * args.d - 1, args.d
    runner = None
    try:
        runner = Runner(args)
        COMMANDS[args.command](runner)
        return 0
    except BudgetExceeded as exc:
        print(f"midlayer: budget exceeded: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except (UsageError, MidlayerError, ValueError, OSError) as exc:
        print(f"midlayer: error: {exc}", file=sys.stderr)
        return 1
    finally:
        if runner is not None:
            runner.close()


if __name__ == "__main__":
    sys.exit(main())
