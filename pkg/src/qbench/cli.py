"""Command-line entry point: ``qbench``.

Exit status: 0 when every verdict is PASS, 1 on any FAIL or ERROR verdict,
2 on bad input (unknown id, parse error, bad config).
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .catalog import catalog_load, get_record, verify_all, verify_record
from .catalog.core import GROUPS
from .config import ConfigError, RunConfig, from_mapping, load_config
from .dsl import expand, monomial
from .errors import QBenchError
from .partitions import FAMILIES, VARIANTS, count_partitions, family, verify_comb5, verify_macmahon_schur
from .series import format_rational

SCHEMA = "qbench/1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _emit(payload: dict, stream=None) -> None:
    print(json.dumps(payload, indent=2, sort_keys=False), file=stream or sys.stdout)


def _usage_error(args, kind: str, message: str, **extra) -> int:
    if getattr(args, "json", False):
        _emit({"schema": SCHEMA, "command": args.command, "ok": False,
               "error": {"kind": kind, "message": message, **extra}})
    else:
        text = message if message.startswith(kind) else f"{kind}: {message}"
        print(f"error: {text}", file=sys.stderr)
    return EXIT_USAGE


# -- verify -------------------------------------------------------------------------

def cmd_verify(args, cfg: RunConfig) -> int:
    order = args.order or cfg.default_order
    try:
        records = catalog_load(args.catalog)
    except (OSError, QBenchError) as e:
        return _usage_error(args, getattr(e, "kind", "CatalogError"), str(e))
    if args.all:
        chosen = [r for r in records if not args.group or r.group == args.group]
    else:
        if not args.id:
            return _usage_error(args, "UsageError", "give a record id or --all")
        try:
            chosen = [get_record(args.id, records)]
        except KeyError as e:
            return _usage_error(args, "UnknownRecord", str(e.args[0]))
    t0 = time.perf_counter()
    if args.sample:
        if args.all:
            return _usage_error(args, "UsageError", "--sample needs a single record id")
        try:
            chosen[0].get_sample(args.sample)
        except KeyError as e:
            return _usage_error(args, "UnknownSample", str(e.args[0]))
        reports = [verify_record(chosen[0], order, args.sample, cfg.engine())]
    else:
        reports = verify_all(order, chosen, cfg.engine(), args.workers or cfg.parallelism)
    counts = {v: sum(r.verdict == v for r in reports) for v in ("PASS", "FAIL", "ERROR")}
    ok = counts["FAIL"] == counts["ERROR"] == 0
    if args.json:
        _emit({"schema": SCHEMA, "command": "verify", "ok": ok, "summary": counts,
               "elapsed": round(time.perf_counter() - t0, 3),
               "reports": [r.to_dict() for r in reports]})
    else:
        for r in reports:
            print(r.line())
        print(f"{counts['PASS']} passed, {counts['FAIL']} failed, {counts['ERROR']} errors "
              f"in {time.perf_counter() - t0:.1f}s")
    return EXIT_OK if ok else EXIT_FAIL


# -- expand -------------------------------------------------------------------------

def _bindings(items) -> dict:
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise ValueError(f"binding {item!r} is not of the form name=value")
        out[name.strip()] = monomial(value)
    return out


def cmd_expand(args, cfg: RunConfig) -> int:
    order = args.order if args.order is not None else cfg.expand_order
    try:
        binds = _bindings(args.bind)
        series, text = expand(args.expr, binds, order, cfg=cfg.engine())
    except ValueError as e:
        return _usage_error(args, "UsageError", str(e))
    except QBenchError as e:
        return _usage_error(args, e.kind, str(e), **{k: v for k, v in e.to_dict().items()
                                                     if k not in ("kind", "message")})
    if args.json:
        _emit({"schema": SCHEMA, "command": "expand", "ok": True, "order": order, "text": text,
               "valuation": series.valuation,
               "coefficients": {str(e): format_rational(c) for e, c in sorted(series.to_dict().items())}})
    else:
        print(text)
    return EXIT_OK


# -- partitions ---------------------------------------------------------------------

def cmd_count(args, cfg: RunConfig) -> int:
    try:
        fam = family(args.family)
    except KeyError as e:
        return _usage_error(args, "UnknownFamily", str(e.args[0]))
    ns = range(args.n + 1) if args.table else [args.n]
    counts = {n: count_partitions(n, fam.constraint) for n in ns}
    if args.json:
        _emit({"schema": SCHEMA, "command": "partitions count", "ok": True, "family": fam.name,
               "description": fam.description, "counts": {str(n): c for n, c in counts.items()}})
    else:
        for n, c in counts.items():
            print(f"{fam.name} n={n}: {c}")
    return EXIT_OK


def cmd_comb5(args, cfg: RunConfig) -> int:
    variants = sorted(VARIANTS) if args.variant == "all" else [args.variant.upper()]
    reports = [verify_comb5(v, args.nmax) for v in variants]
    ok = all(r.ok for r in reports)
    if args.json:
        payload = []
        for r in reports:
            d = r.to_dict()
            if not args.rows:
                d.pop("rows")
            payload.append(d)
        _emit({"schema": SCHEMA, "command": "partitions comb5", "ok": ok, "variants": payload})
    else:
        for r in reports:
            v = VARIANTS[r.variant]
            (a1, b1, _), (a2, b2, _), (a3, b3, _) = v.lhs_pairs + (v.rhs_pair,)
            print(f"variant {r.variant} ({v.record})")
            print(f"{'n':>4} {a1 + '+' + b1:>16} {a2 + '+' + b2:>16} {v.single:>8} {a3 + '+' + b3:>16}"
                  f" {'lhs':>6} {'rhs':>6}  ok")
            for row in r.rows:
                print(f"{row.n:>4} {row.pair1:>16} {row.pair2:>16} {row.single:>8} {row.pair3:>16}"
                      f" {str(row.series_lhs):>6} {str(row.series_rhs):>6}  {'yes' if row.ok else 'NO'}")
            f = r.first_failure
            status = "PASS" if r.ok else "FAIL"
            line = f"{status:5} variant {r.variant} n<={r.nmax}"
            if f is not None:
                line += (f" first failure at n={f.n}: {f.pair1}+{f.pair2} vs {f.single}+{f.pair3}"
                         f" (series {f.series_lhs} vs {f.series_rhs})")
            print(line)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_classical(args, cfg: RunConfig) -> int:
    results = {w: verify_macmahon_schur(w, args.nmax) for w in ("A", "B")}
    ok = all(row.ok for rows in results.values() for row in rows)
    if args.json:
        _emit({"schema": SCHEMA, "command": "partitions classical", "ok": ok, "nmax": args.nmax,
               "checks": {w: {"ok": all(r.ok for r in rows),
                              "counts": [[r.n, r.left, r.right] for r in rows]}
                          for w, rows in results.items()}})
    else:
        for w, rows in results.items():
            bad = next((r for r in rows if not r.ok), None)
            tail = f"first failure at n={bad.n}" if bad else f"n={args.nmax}: {rows[-1].left}"
            print(f"{'FAIL' if bad else 'PASS':5} {w} n<={args.nmax} {tail}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_families(args, cfg: RunConfig) -> int:
    if args.json:
        _emit({"schema": SCHEMA, "command": "partitions families", "ok": True,
               "families": [{"name": f.name, "description": f.description, "gf": f.gf}
                            for f in FAMILIES.values()]})
    else:
        for f in FAMILIES.values():
            print(f"{f.name:10} {f.description}")
    return EXIT_OK


# -- catalog ------------------------------------------------------------------------

def cmd_list(args, cfg: RunConfig) -> int:
    try:
        recs = [r for r in catalog_load(args.catalog) if not args.group or r.group == args.group]
    except (OSError, QBenchError) as e:
        return _usage_error(args, getattr(e, "kind", "CatalogError"), str(e))
    if args.json:
        _emit({"schema": SCHEMA, "command": "catalog list", "ok": True, "count": len(recs),
               "records": [{"id": r.id, "group": r.group, "citation": r.citation, "order": r.order,
                            "samples": [s.name for s in r.samples]} for r in recs]})
    else:
        for r in recs:
            print(f"{r.id:28} {r.group:15} {r.citation}")
    return EXIT_OK


def cmd_show(args, cfg: RunConfig) -> int:
    try:
        r = get_record(args.id, catalog_load(args.catalog))
    except (OSError, QBenchError) as e:
        return _usage_error(args, getattr(e, "kind", "CatalogError"), str(e))
    except KeyError as e:
        return _usage_error(args, "UnknownRecord", str(e.args[0]))
    d = {"id": r.id, "group": r.group, "citation": r.citation, "order": r.order, "lhs": r.lhs,
         "rhs": r.rhs, "params": list(r.params), "ints": dict(r.ints),
         "samples": [s.to_dict() for s in r.samples], "excluded": list(r.excluded)}
    if r.q_scale != 1:
        d["q_scale"] = r.q_scale
    if args.json:
        _emit({"schema": SCHEMA, "command": "catalog show", "ok": True, "record": d})
    else:
        for k, v in d.items():
            print(f"{k}: {v}")
    return EXIT_OK


# -- wiring -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=None, help="machine-readable output")

    p = argparse.ArgumentParser(prog="qbench", description="Exact q-series workbench.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--config", help="YAML run config (default: $QBENCH_CONFIG)")
    p.add_argument("--catalog", help="identity catalog YAML (default: the bundled catalog)")
    p.add_argument("--margin", type=int, help="summation safety margin")
    p.add_argument("--hard-cap-factor", type=float, help="summation hard cap factor")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="verify catalog identities")
    v.add_argument("id", nargs="?", help="record id, e.g. rr-a or ag(r=3,i=2)")
    v.add_argument("--all", action="store_true", help="every record (or every record of --group)")
    v.add_argument("--group", choices=GROUPS, help="restrict --all to one group")
    v.add_argument("--order", type=int, help="compare through q^ORDER (default: per record)")
    v.add_argument("--sample", help="one named parameter sample")
    v.add_argument("--workers", type=int, help="worker processes (default: config parallelism)")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("expand", parents=[common], help="expand a DSL expression")
    e.add_argument("expr", help="expression in the series DSL")
    e.add_argument("--bind", action="append", metavar="NAME=VALUE")
    e.add_argument("--order", type=int, help="truncation order (default: config expand_order)")
    e.set_defaults(func=cmd_expand)

    c = sub.add_parser("catalog", help="inspect the identity catalog")
    csub = c.add_subparsers(dest="action", required=True)
    cl = csub.add_parser("list", parents=[common])
    cl.add_argument("--group", choices=GROUPS)
    cl.set_defaults(func=cmd_list)
    cs = csub.add_parser("show", parents=[common])
    cs.add_argument("id")
    cs.set_defaults(func=cmd_show)

    pt = sub.add_parser("partitions", help="partition counting and combinatorial checks")
    psub = pt.add_subparsers(dest="action", required=True)
    pc = psub.add_parser("count", parents=[common])
    pc.add_argument("--n", type=int, required=True, help="partition norm")
    pc.add_argument("--family", required=True, help="family name; see `partitions families`")
    pc.add_argument("--table", action="store_true", help="counts for every norm up to n")
    pc.set_defaults(func=cmd_count)
    p5 = psub.add_parser("comb5", parents=[common])
    p5.add_argument("--variant", default="all", choices=["A", "B", "C", "D", "all"])
    p5.add_argument("--nmax", type=int, default=40)
    p5.add_argument("--rows", action="store_true", help="include every row in JSON output")
    p5.set_defaults(func=cmd_comb5)
    pk = psub.add_parser("classical", parents=[common])
    pk.add_argument("--nmax", type=int, default=60)
    pk.set_defaults(func=cmd_classical)
    pf = psub.add_parser("families", parents=[common])
    pf.set_defaults(func=cmd_families)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command in ("catalog", "partitions"):
        args.command = f"{args.command} {args.action}"
    try:
        cfg = load_config(args.config)
        overrides = {k: getattr(args, k) for k in ("margin", "hard_cap_factor") if getattr(args, k) is not None}
        if overrides:
            cfg = from_mapping(overrides, cfg)
    except ConfigError as e:
        args.json = bool(args.json)
        return _usage_error(args, "ConfigError", str(e))
    if args.json is None:
        args.json = cfg.output_format == "json"
    return args.func(args, cfg)


if __name__ == "__main__":
    sys.exit(main())
