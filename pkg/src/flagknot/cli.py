"""Command-line interface.

    flagknot parse     --pd "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]"
    flagknot quotient  --knot 4_1 --axioms involutory
    flagknot flag      --knot 5_1 -k 1
    flagknot alexander --gauss "O1-U2+U1-O3-O2+U4+U3-O4+" --planarize
    flagknot regress   --bundled flag

Exit codes: 0 success, 1 error or failed regression, 2 completion budget exceeded.
Reports go to standard output, diagnostics to standard error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .diagram import DiagramError, parse_gauss, parse_pd
from .flag import alexander_from_basis, flag_invariant, is_symmetric
from .groebner import OrderMismatch
from .planar import planarize
from .polyring import MonomialOrder
from .presentation import STRATEGIES, Budget, quotient
from .quandle import AxiomSet
from . import tables

EXIT_OK, EXIT_FAIL, EXIT_BUDGET = 0, 1, 2


def _emit(args, data, text):
    if args.format == "json":
        sys.stdout.write(json.dumps(data, sort_keys=True, indent=1) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _read_input(args):
    """Diagram from --pd, --gauss, --knot or a positional string/file."""
    if args.knot:
        return tables.load_knot(args.knot)
    pd, gauss = args.pd, args.gauss
    if args.input is not None:
        text = args.input
        path = Path(text)
        if path.is_file():
            text = path.read_text().strip()
        if text.lstrip().startswith("PD"):
            pd = text
        else:
            gauss = text
    if pd is not None:
        return parse_pd(pd, args.name)
    if gauss is not None:
        if args.planarize and "V" not in gauss:
            gauss = planarize(gauss)
        return parse_gauss(gauss, args.name)
    raise DiagramError("no input: give --pd, --gauss, --knot or a code")


def _diagram_text(d):
    lines = [f"name: {d.name or '-'}", f"components: {d.components}",
             f"classical crossings: {len(d.classical)}", f"virtual crossings: {len(d.virtual)}"]
    for c in d.crossings:
        sign = "" if not c.is_classical else (" +" if c.sign > 0 else " -")
        lines.append(f"  {c.kind} {list(c.slots)}{sign}")
    return "\n".join(lines)


def cmd_parse(args):
    d = _read_input(args)
    _emit(args, d.to_json(), _diagram_text(d))
    return EXIT_OK


def cmd_quotient(args):
    axioms = AxiomSet.parse(args.axioms)
    d = _read_input(args)
    virtual = True if args.virtual else None
    budget = Budget(max_generators=args.max_gens, max_seconds=args.max_seconds)
    res = quotient(d, axioms, budget, args.strategy, virtual)
    data = dict(res.to_json(), name=d.name, axioms=str(axioms))
    if res.completed:
        text = f"{d.name or 'knot'}: {res.quandle.n} elements ({axioms})\n{res.quandle.render()}"
    else:
        text = f"{d.name or 'knot'}: budget exceeded after {res.stats.generators_introduced} new generators"
    _emit(args, data, text)
    return EXIT_OK if res.completed else EXIT_BUDGET


def _flag_report(d, k, order, domain):
    B = flag_invariant(d, k, order, domain=domain)
    data = {"name": d.name, "k": k, "order": order.spec(), "domain": domain,
            "cardinality": len(B), "basis": B.strings(), "seconds": round(B.stats.get("seconds", 0.0), 4)}
    if k == 1:
        delta = alexander_from_basis(B) if d.classical else None
        if delta is not None and not delta.is_zero():
            data["alexander"] = delta.to_str(order)
            data["determinant"] = abs(delta.evaluate((-1, 0, 0, 0)))
            data["symmetric"] = is_symmetric(delta)
        elif delta is None:
            data["alexander"] = "1"
            data["determinant"] = 1
            data["symmetric"] = True
    return data


def cmd_flag(args):
    if args.k < 0:
        raise ValueError("k must be non-negative")
    order = MonomialOrder.parse(args.order)
    d = _read_input(args)
    data = _flag_report(d, args.k, order, args.domain)
    lines = [f"FLAG_{args.k}({d.name or 'knot'}) [{data['order']}, {args.domain}]: {data['cardinality']} elements"]
    lines += [f"  {g}" for g in data["basis"]]
    if "alexander" in data:
        lines.append(f"Alexander: {data['alexander']}  determinant: {data['determinant']}")
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_alexander(args):
    order = MonomialOrder.parse(args.order)
    d = _read_input(args)
    data = _flag_report(d, 1, order, "QQ")
    out = {"name": d.name, "alexander": data.get("alexander", "0"),
           "determinant": data.get("determinant"), "symmetric": data.get("symmetric")}
    _emit(args, out, f"{out['alexander']}  (determinant {out['determinant']}, symmetric: {out['symmetric']})")
    return EXIT_OK


def cmd_regress(args):
    if args.table:
        table = tables.load_table(args.table)
    else:
        table = tables.bundled_table(args.bundled)
    order = args.order if args.order_given else None
    report = tables.regress(table, order=order, jobs=args.jobs, max_seconds=args.max_seconds,
                            max_generators=args.max_gens)
    if args.no_timings:
        report = tables.strip_timings(report)
    lines = [f"{e['name']}: {e['status']}" + (f" ({e['error']})" if "error" in e else "") for e in report["entries"]]
    lines.append(" ".join(f"{k}={v}" for k, v in report["summary"].items() if v))
    _emit(args, report, "\n".join(lines))
    return EXIT_OK if report["ok"] else EXIT_FAIL


def _add_input(p):
    p.add_argument("input", nargs="?", help="PD or Gauss code, or a file containing one")
    p.add_argument("--pd", help="PD code, e.g. PD[X[1,4,2,5],...]")
    p.add_argument("--gauss", help="signed Gauss code, e.g. O1-U2-O3-U1-O2-U3-")
    p.add_argument("--knot", help="name of a bundled knot, e.g. 6_2 or 4.99")
    p.add_argument("--name", help="name to attach to the diagram")
    p.add_argument("--planarize", action="store_true",
                   help="insert virtual crossings into a non-planar Gauss code")


def build_parser():
    ap = argparse.ArgumentParser(prog="flagknot", description=__doc__.split("\n")[0])
    ap.add_argument("--format", choices=("json", "text"), default="json")
    ap.add_argument("--order", default="sinv>tinv>s>t", help="variable precedence for grevlex")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a diagram and print it")
    _add_input(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("quotient", help="complete a quotient quandle presentation")
    _add_input(p)
    p.add_argument("--axioms", default="", help="comma list: " + ", ".join(AxiomSet.NAMES) + ", n-quandle=N")
    p.add_argument("--virtual", action="store_true", help="split arcs at virtual crossings and add v")
    p.add_argument("--max-gens", type=int, default=4096)
    p.add_argument("--max-seconds", type=float, default=None)
    p.add_argument("--strategy", choices=STRATEGIES, default="row-major")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("flag", help="FLAG_k Groebner basis")
    _add_input(p)
    p.add_argument("-k", type=int, default=1)
    p.add_argument("--domain", choices=("QQ", "ZZ"), default="QQ")
    p.set_defaults(func=cmd_flag)

    p = sub.add_parser("alexander", help="Alexander polynomial and determinant")
    _add_input(p)
    p.set_defaults(func=cmd_alexander)

    p = sub.add_parser("regress", help="compare against an expectation table")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--table", help="path to an expectation table (JSON)")
    g.add_argument("--bundled", choices=tables.BUNDLED, default="flag")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-gens", type=int, default=4096)
    p.add_argument("--max-seconds", type=float, default=None)
    p.add_argument("--no-timings", action="store_true", help="omit wall-clock fields")
    p.set_defaults(func=cmd_regress)
    return ap


def main(argv=None):
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    args.order_given = any(a == "--order" or a.startswith("--order=") for a in argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (DiagramError, ValueError, KeyError, OrderMismatch, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"flagknot: error: {msg}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
