"""Bundled knot tables, expectation tables and the regression runner.

Expectation tables are JSON objects with a ``kind`` of ``"flag"`` or
``"quotient"`` and a list of ``entries``.  An entry names a knot and may
carry its own ``pd`` or ``gauss`` code; otherwise the code is looked up in
the bundled knot data.

flag entry:     {"name", "flag1": [poly strings], "cardinality"}
quotient entry: {"name", "n", "table" (optional), "v" (optional), "axioms" (optional override)}

The report lists entries in table order with a status of ``match``,
``ideal-match-only``, ``mismatch``, ``budget-exceeded`` or ``error``.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .diagram import DiagramError, parse_gauss, parse_pd
from .flag import flag_invariant
from .groebner import (Ideal, canonicalize, canonicalize_rational, ideal_equal, primitive, rational_groebner,
                       strong_groebner)
from .polyring import MonomialOrder, parse_poly
from .presentation import Budget, quotient
from .quandle import AxiomSet, FiniteQuandle, are_isomorphic

STATUSES = ("match", "ideal-match-only", "mismatch", "budget-exceeded", "error")
PASSING = ("match", "ideal-match-only")


def _read(name):
    return json.loads(resources.files("flagknot").joinpath("data").joinpath(name).read_text())


@lru_cache(maxsize=None)
def knot_table():
    """name -> entry dict for every bundled knot (classical and virtual)."""
    out = {}
    for e in _read("classical.json")["knots"]:
        out[e["name"]] = dict(e, virtual=False)
    for e in _read("virtual.json")["knots"]:
        out[e["name"]] = dict(e, virtual=True)
    return out


def knot_names(virtual=None):
    return [n for n, e in knot_table().items() if virtual is None or e["virtual"] == virtual]


def lookup(name):
    table = knot_table()
    if name not in table and name.startswith("v") and name[1:] in table:
        name = name[1:]
    if name not in table:
        raise KeyError(f"unknown knot {name!r}")
    return table[name]


def load_knot(name):
    e = lookup(name)
    return diagram_of(e)


def diagram_of(e):
    name = e.get("name")
    if e.get("pd"):
        return parse_pd(e["pd"], name)
    code = e.get("planar") or e.get("gauss")
    if code:
        return parse_gauss(code, name)
    raise DiagramError(f"no diagram available for {name}")


BUNDLED = ("flag", "quotient", "virtual-quotient", "virtual-flag")


def bundled_table(kind):
    files = {"flag": "flag1_expected.json", "quotient": "quotient_expected.json",
             "virtual-quotient": "virtual_quotient_expected.json", "virtual-flag": "flag1_virtual_expected.json"}
    return _read(files[kind])


def load_table(path):
    text = Path(path).read_text()
    if not text.strip():
        return {"kind": "flag", "entries": []}
    return json.loads(text)


def virtual_expectations():
    return _read("virtual.json")["expected_quotients"]


# -- comparisons ---------------------------------------------------------------


def _entry_diagram(entry):
    if entry.get("pd") or entry.get("gauss") or entry.get("planar"):
        return diagram_of(entry)
    return diagram_of(lookup(entry["name"]))


def compare_flag(entry, order, k=1, domain="QQ"):
    d = _entry_diagram(entry)
    B = flag_invariant(d, k, order, domain=domain)
    expected = [parse_poly(s) for s in entry["flag1"]]
    want = {primitive(p, order) for p in expected}
    got = {primitive(p, order) for p in B.elements}
    out = {"computed": B.strings(), "cardinality": len(B)}
    card = entry.get("cardinality")
    if got == want and (card is None or card == len(B)):
        out["status"] = "match"
        return out
    if domain == "QQ":
        E = canonicalize_rational(rational_groebner(Ideal(expected, order)))
    else:
        E = canonicalize(strong_groebner(Ideal(expected, order)))
    same = ideal_equal(B, E)
    out["status"] = "ideal-match-only" if same else "mismatch"
    out["diff"] = {
        "missing": sorted(p.to_str(order) for p in want - got),
        "extra": sorted(p.to_str(order) for p in got - want),
    }
    if card is not None and card != len(B):
        out["diff"]["cardinality"] = {"expected": card, "computed": len(B)}
    return out


def compare_quotient(entry, axioms, budget, virtual=False):
    d = _entry_diagram(entry)
    res = quotient(d, axioms, budget, virtual=virtual)
    if not res.completed:
        return {"status": "budget-exceeded", "stats": res.stats.to_json()}
    q = res.quandle
    out = {"n": q.n, "stats": res.stats.to_json()}
    ok = q.n == entry["n"]
    if ok and entry.get("table") is not None:
        want = FiniteQuandle.from_matrix(entry["table"], entry.get("v") if virtual else None)
        if q.v is None and want.v is not None:
            ok = False
        else:
            ok = are_isomorphic(q, want)
    out["status"] = "match" if ok else "mismatch"
    if not ok:
        out["diff"] = {"expected_n": entry["n"], "computed_n": q.n}
    return out


def _run_one(args):
    kind, entry, opts = args
    start = time.perf_counter()
    try:
        if kind == "flag":
            out = compare_flag(entry, MonomialOrder.parse(opts["order"]), opts.get("k", 1), opts.get("domain", "QQ"))
        else:
            budget = Budget(max_generators=opts.get("max_generators", 4096), max_seconds=opts.get("max_seconds"))
            axioms = AxiomSet.parse(entry.get("axioms", opts["axioms"]))
            out = compare_quotient(entry, axioms, budget, opts.get("virtual", False))
    except (DiagramError, KeyError, ValueError) as exc:
        out = {"status": "error", "error": str(exc)}
    out["seconds"] = round(time.perf_counter() - start, 4)
    return dict({"name": entry.get("name")}, **out)


def regress(table, order=None, jobs=1, max_seconds=None, max_generators=4096):
    """Run every entry of an expectation table and return a report dict."""
    kind = table.get("kind", "flag")
    if kind not in ("flag", "quotient"):
        raise ValueError(f"unknown table kind {kind!r}")
    opts = {
        "order": order or table.get("order") or "sinv>tinv>s>t",
        "k": table.get("k", 1),
        "domain": table.get("domain", "QQ"),
        "axioms": table.get("axioms", ""),
        "virtual": table.get("virtual", False),
        "max_seconds": max_seconds,
        "max_generators": max_generators,
    }
    work = [(kind, e, opts) for e in table.get("entries", [])]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, work))
    else:
        results = [_run_one(w) for w in work]
    counts = {s: 0 for s in STATUSES}
    for r in results:
        counts[r["status"]] += 1
    return {
        "kind": kind,
        "order": opts["order"] if kind == "flag" else None,
        "axioms": opts["axioms"] if kind == "quotient" else None,
        "summary": counts,
        "ok": all(r["status"] in PASSING for r in results),
        "entries": results,
    }


def strip_timings(report):
    """Copy of a report without wall-clock fields."""
    if isinstance(report, dict):
        return {k: strip_timings(v) for k, v in report.items() if k != "seconds"}
    if isinstance(report, list):
        return [strip_timings(v) for v in report]
    return report
