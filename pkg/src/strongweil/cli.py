"""Command-line front end: ``strongweil analyze | catalog | graph``.

Exit codes: 0 success, 1 usage error, 2 domain error.  Diagnostics go to
stderr as a single line.
"""

from __future__ import annotations

import argparse
import json
import sys

from .catalog import load_catalog, verify_catalog
from .curves import Curve, reduction_profile
from .errors import DomainError, StrongWeilError, UsageError
from .expr import parse_poly, parse_ratfunc
from .funcfield import classify_conductor, valuation
from .gf import field_create, field_for_q
from .homology import analyze, build_graph, same_class_data

SCHEMA_VERSION = "1"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _field(q, ext_degree):
    base = field_for_q(q)
    if ext_degree is None or ext_degree == 1:
        return base
    if ext_degree < 1:
        raise UsageError("--ext-degree must be positive")
    return field_create(base.p, base.e * ext_degree)


def _bindings(items, ctx):
    out = {}
    for item in items or ():
        name, sep, text = item.partition("=")
        name = name.strip()
        if not sep or not name.isidentifier():
            raise UsageError(f"--bind expects name=value, got {item!r}")
        if name in ("T", "X", "Y"):
            raise UsageError(f"cannot rebind {name}")
        value = parse_ratfunc(text, ctx, out)
        out[name] = value.constant_value() if value.is_constant() else value
    return out


def _catalog_candidates(ctx):
    out = []
    for entry in load_catalog():
        if entry.admits(ctx) is not None:
            continue
        for params in entry.parameter_choices(ctx):
            try:
                E = Curve.from_equation(entry.equation, ctx, params)
                E.invariants(require_nonsingular=True)
            except StrongWeilError:
                continue
            out.append((entry, E))
    return out


def _membership(report, candidates):
    for entry, E in candidates:
        try:
            prof = reduction_profile(E)
        except StrongWeilError:
            continue
        if prof.split_at_infinity and same_class_data(report.profile, prof):
            return f"catalog class {entry.isogeny_class}"
    return "unverified"


def analysis_record(report) -> dict:
    """OutputRecord as an ordered dict (the JSON schema)."""
    ctx = report.curve.ctx
    j = report.curve.invariants().j
    rows = []
    for entry in report.profile.entries:
        v = valuation(j, entry.place)
        rows.append({
            "place": entry.place.label(),
            "type": entry.type.value,
            "count": entry.count,
            "lambda": entry.lam,
            "pole_order": max(0, -v),
        })
    return {
        "schema_version": SCHEMA_VERSION,
        "q": ctx.q,
        "p": ctx.p,
        "e": ctx.e,
        "curve": report.curve.to_expr(),
        "conductor": report.shape.describe(),
        "genus": report.genus,
        "places": rows,
        "cycle": report.cycle.as_dict(),
        "pole_order": report.pole_order,
        "self_pairing": report.self_pairing,
        "deg_pi": report.deg_pi,
        "frobenius_minimal": report.frobenius_minimal,
        "frobenius_offset": report.frobenius_offset,
        "strong_weil_equation": None if report.strong_weil is None else report.strong_weil.to_expr(),
        "strong_source": report.strong_source,
        "class_membership": report.class_membership,
        "notes": list(report.notes),
    }


# ---- rendering ----------------------------------------------------------

_PLACE_COLUMNS = ("place", "type", "count", "lambda", "pole_order")
_SCALARS = ("schema_version", "q", "p", "e", "curve", "conductor", "genus", "pole_order",
            "self_pairing", "deg_pi", "frobenius_minimal", "frobenius_offset",
            "strong_weil_equation", "strong_source", "class_membership")


def _cell(value):
    return "-" if value is None else str(value).lower() if isinstance(value, bool) else str(value)


def _uncell(text, kind):
    if text == "-":
        return None
    if kind is bool:
        return text == "true"
    if kind is int:
        return int(text)
    return text


_SCALAR_KINDS = {"q": int, "p": int, "e": int, "genus": int, "pole_order": int, "self_pairing": int,
                 "deg_pi": int, "frobenius_minimal": bool, "frobenius_offset": int}
_PLACE_KINDS = {"count": int, "lambda": int, "pole_order": int}


def render_table(rec) -> str:
    lines = [f"{k:<22}{_cell(rec[k])}" for k in _SCALARS]
    widths = [max(len(c), *(len(_cell(r[c])) for r in rec["places"])) for c in _PLACE_COLUMNS]
    lines.append("")
    lines.append("  ".join(c.ljust(w) for c, w in zip(_PLACE_COLUMNS, widths)).rstrip() + "  cycle")
    for r in rec["places"]:
        cells = [_cell(r[c]).ljust(w) for c, w in zip(_PLACE_COLUMNS, widths)]
        lines.append("  ".join(cells) + "  " + str(rec["cycle"][r["place"]]))
    for n in rec["notes"]:
        lines.append(f"note: {n}")
    return "\n".join(lines) + "\n"


def parse_table(text) -> dict:
    """Inverse of :func:`render_table`."""
    lines = text.rstrip("\n").split("\n")
    rec = {}
    i = 0
    while lines[i]:
        key, _, value = lines[i].partition(" ")
        rec[key] = _uncell(value.strip(), _SCALAR_KINDS.get(key, str))
        i += 1
    i += 2  # blank line and header
    rows, cycle, notes = [], {}, []
    for line in lines[i:]:
        if line.startswith("note: "):
            notes.append(line[6:])
            continue
        cells = line.split()
        row = {c: _uncell(x, _PLACE_KINDS.get(c, str)) for c, x in zip(_PLACE_COLUMNS, cells)}
        rows.append(row)
        cycle[row["place"]] = int(cells[-1])
    out = {k: rec[k] for k in _SCALARS[:7]}
    out["places"] = rows
    out["cycle"] = cycle
    out.update({k: rec[k] for k in _SCALARS[7:]})
    out["notes"] = notes
    return out


def render_tsv(header, rows) -> str:
    out = ["\t".join(header)]
    out += ["\t".join(_cell(x) for x in r) for r in rows]
    return "\n".join(out) + "\n"


def analysis_tsv(rec) -> str:
    rows = [(k, rec[k]) for k in _SCALARS]
    for r in rec["places"]:
        for c in _PLACE_COLUMNS[1:]:
            rows.append((f"place.{r['place']}.{c}", r[c]))
        rows.append((f"place.{r['place']}.cycle", rec["cycle"][r["place"]]))
    rows += [("note", n) for n in rec["notes"]]
    return render_tsv(("key", "value"), rows)


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


# ---- commands -----------------------------------------------------------

def cmd_analyze(args, out):
    ctx = _field(args.q, args.ext_degree)
    bindings = _bindings(args.bind, ctx)
    E = Curve.from_equation(args.curve, ctx, bindings)
    shape = classify_conductor(parse_poly(args.conductor, ctx, bindings)) if args.conductor else None
    catalog = _catalog_candidates(ctx)
    report = analyze(E, shape, candidates=[(e.id, C) for e, C in catalog])
    report.class_membership = _membership(report, catalog)
    rec = analysis_record(report)
    if args.format == "json":
        out.write(to_json(rec))
    elif args.format == "tsv":
        out.write(analysis_tsv(rec))
    else:
        out.write(render_table(rec))
    return 0


_CATALOG_HEADER = ("entry", "q", "params", "status", "pole_order", "deg_pi", "strong_weil", "failed", "findings")


def catalog_rows(q_list, entry_id=None, all_params=False):
    rows = []
    for entry, q, res in verify_catalog(q_list, entry_id, all_params):
        if isinstance(res, str):
            if entry_id is not None:
                rows.append({"entry": entry.id, "q": q, "params": "", "status": "SKIP",
                             "pole_order": None, "deg_pi": None, "strong_weil": None,
                             "failed": [], "findings": [res]})
            continue
        rep = res.analysis
        if res.error:
            status = "ERROR"
        else:
            status = "PASS" if res.passed else "FAIL"
        rows.append({
            "entry": entry.id,
            "q": q,
            "params": res.params_text(),
            "status": status,
            "pole_order": rep.pole_order if rep else None,
            "deg_pi": rep.deg_pi if rep else None,
            "strong_weil": None if rep is None or rep.strong_weil is None else rep.strong_weil.to_expr(),
            "failed": [k for k, v in res.checks.items() if v is False],
            "findings": list(res.findings) + ([res.error] if res.error else []),
        })
    return rows


def cmd_catalog(args, out):
    try:
        q_list = [int(x) for x in args.q_list.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--q-list expects integers, got {args.q_list!r}") from None
    if not q_list:
        raise UsageError("--q-list is empty")
    for q in q_list:
        field_for_q(q)
    if args.entry is not None and args.entry not in {e.id for e in load_catalog()}:
        raise UsageError(f"unknown catalog entry {args.entry!r}")
    rows = catalog_rows(q_list, args.entry, args.all_params)
    if args.format == "json":
        out.write(to_json({"schema_version": SCHEMA_VERSION, "rows": rows}))
    else:
        flat = [[r[k] if not isinstance(r[k], list) else "; ".join(r[k]) or None for k in _CATALOG_HEADER]
                for r in rows]
        if args.format == "tsv":
            out.write(render_tsv(_CATALOG_HEADER, flat))
        else:
            cols = list(zip(_CATALOG_HEADER, *flat)) if flat else [(h,) for h in _CATALOG_HEADER]
            widths = [max(len(_cell(x)) for x in col) for col in cols]
            for r in [list(_CATALOG_HEADER)] + flat:
                out.write("  ".join(_cell(x).ljust(w) for x, w in zip(r, widths)).rstrip() + "\n")
    return 0 if all(r["status"] in ("PASS", "SKIP") for r in rows) else 2


def cmd_graph(args, out):
    ctx = _field(args.q, None)
    shape = classify_conductor(parse_poly(args.conductor, ctx))
    g = build_graph(shape, ctx)
    out.write(g.to_dot() if args.format == "dot" else g.to_json() + "\n")
    return 0


def build_parser():
    parser = _Parser(prog="strongweil", description="Strong Weil curves of degree-3 conductor over F_q(T).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="analyze one curve")
    a.add_argument("--q", type=int, required=True, help="field size (a prime power)")
    a.add_argument("--ext-degree", type=int, help="work over the degree-k extension of F_q")
    a.add_argument("--curve", required=True, help='Weierstrass equation, e.g. "Y^2+X*Y=X^3+1/T"')
    a.add_argument("--conductor", help="expected finite part of the conductor, e.g. \"T^2*(T-1)\"")
    a.add_argument("--bind", action="append", metavar="NAME=VALUE", help="bind a parameter name")
    a.add_argument("--format", choices=("table", "json", "tsv"), default="table")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("catalog", help="verify catalog entries")
    c.add_argument("--q-list", required=True, help="comma-separated field sizes")
    c.add_argument("--entry", help="restrict to one entry id")
    c.add_argument("--all-params", action="store_true", help="verify every admissible parameter")
    c.add_argument("--format", choices=("table", "json", "tsv"), default="table")
    c.set_defaults(func=cmd_catalog)

    g = sub.add_parser("graph", help="describe the quotient graph for a conductor")
    g.add_argument("--q", type=int, required=True)
    g.add_argument("--conductor", required=True)
    g.add_argument("--format", choices=("dot", "json"), default="dot")
    g.set_defaults(func=cmd_graph)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return 1
    except DomainError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
