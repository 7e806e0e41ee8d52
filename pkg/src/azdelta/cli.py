"""Command line front end: validate scenarios, run their computations, replay the bundled set.

Exit status is 0 when everything requested passes, 1 when a scenario does
not parse, does not validate or misses an expected value, and 2 when a
computation itself fails.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__
from .errors import AzdeltaError, ScenarioError
from .exact import parse_scalar
from .scenarios import (
    Computation,
    Fixture,
    list_fixtures,
    load_fixture,
    run_fixture,
    to_json,
    validate_fixture,
    with_dependencies,
)

SINV_OPS = ("s_w_curve", "s_w_point", "s_threefold", "flag_delta", "nemuro")
DELTA_OPS = ("az_combine", "flag_delta", "min", "smooth_combine", "dp4_conic")


# ---------------------------------------------------------------------------
# selecting computations


def _adhoc(f: Fixture, op: str) -> list[Computation]:
    """Default computations for a scenario that requests none of ``op``."""
    surfaced = [n for n, st in f.setups.items() if st.surface is not None]
    out = []
    if op == "zariski":
        out = [Computation(f"zariski:{n}", op, {"family": n}) for n in f.families]
        if not out and f.lattice is not None:
            out = [Computation("zariski:-K", op, {"class": {"K": "-1"}})]
    elif op == "chambers":
        curves = sorted({p.curve for p in f.points.values()})
        out = [Computation(f"chambers:{s}:{c}", op, {"setup": s, "curve": c}) for s in surfaced for c in curves]
    elif op == "s_threefold":
        out = [Computation(f"s_threefold:{s}", op, {"setup": s}) for s in f.setups]
    elif op in ("s_w_curve", "s_w_point", "az_combine"):
        out = [Computation(f"{op}:{s}:{p}", op, {"setup": s, "point": p}) for s in surfaced for p in f.points]
    elif op == "flag_delta" and f.lattice is not None:
        by_curve: dict = {}
        for name, p in f.points.items():
            by_curve.setdefault(p.curve, []).append(name)
        out = [Computation(f"flag_delta:{c}", op, {"curve": c, "points": ps}) for c, ps in sorted(by_curve.items())]
    elif op == "nemuro":
        out = [Computation(f"nemuro:{s}", op, {"setup": s}) for s in f.setups]
    return out


def _select(f: Fixture, ops, param: str | None = None) -> tuple[Fixture, set]:
    """The fixture (maybe extended) and the computation ids to run for ``ops``."""
    chosen = [c for c in f.compute if c.op in ops]
    if param is not None:
        chosen = [c for c in chosen if _param_of(f, c) in (None, param)]
    if chosen:
        return f, with_dependencies(f, [c.id for c in chosen])
    extra = [c for op in ops for c in _adhoc(f, op)]
    if param is not None:
        extra = [c for c in extra if _param_of(f, c) in (None, param)]
    if not extra:
        raise ScenarioError(f"nothing to compute for {', '.join(ops)}", f.source or f.id)
    g = dataclasses.replace(f, compute=tuple(f.compute) + tuple(extra))
    return g, {c.id for c in extra}


def _param_of(f: Fixture, comp: Computation) -> str | None:
    fam = f.families.get(comp.args.get("family")) if isinstance(comp.args.get("family"), str) else None
    if fam is not None:
        return fam.var
    st = f.setups.get(comp.args.get("setup")) if isinstance(comp.args.get("setup"), str) else None
    return st.var if st is not None else None


# ---------------------------------------------------------------------------
# reports


def _record_json(r) -> dict:
    return {
        "id": r.id,
        "op": r.op,
        "inputs": r.inputs,
        "status": r.status,
        "result": to_json(r.result) if r.status == "ok" else None,
        "error": r.error,
        "checks": list(r.checks),
    }


def _fixture_entry(ref: str, validate: bool, ops=None, only_all: bool = False, eps=None, param=None) -> dict:
    entry = {"fixture": ref, "validation": [], "records": [], "error": ""}
    try:
        f = load_fixture(ref)
    except AzdeltaError as exc:
        entry["error"] = str(exc)
        return entry
    entry["fixture"] = f.id
    if validate:
        rep = validate_fixture(f)
        entry["validation"] = [{"check": c.name, "ok": c.ok, "detail": c.detail} for c in rep.checks]
    if ops is None and not only_all:
        return entry
    only = None
    if ops is not None:
        try:
            f, only = _select(f, ops, param)
        except ScenarioError as exc:
            entry["error"] = str(exc)
            return entry
    entry["records"] = [_record_json(r) for r in run_fixture(f, eps=eps, only=only)]
    return entry


def _summary(entries) -> dict:
    recs = [r for e in entries for r in e["records"]]
    checks = [c for r in recs for c in r["checks"]]
    return {
        "fixtures": len(entries),
        "load_errors": sum(1 for e in entries if e["error"]),
        "validation_checks": sum(len(e["validation"]) for e in entries),
        "validation_failures": sum(1 for e in entries for c in e["validation"] if not c["ok"]),
        "computations": len(recs),
        "computation_errors": sum(1 for r in recs if r["status"] == "error"),
        "invalid_computations": sum(1 for r in recs if r["status"] == "invalid"),
        "expectations": len(checks),
        "passed": sum(1 for c in checks if c["pass"]),
        "failed": sum(1 for c in checks if not c["pass"]),
    }


def exit_code(summary: dict) -> int:
    if summary["computation_errors"]:
        return 2
    bad = ("load_errors", "validation_failures", "invalid_computations", "failed")
    return 1 if any(summary[k] for k in bad) else 0


def _text(report: dict) -> str:
    lines = []
    for e in report["fixtures"]:
        lines.append(f"== {e['fixture']}")
        if e["error"]:
            lines.append(f"  ERROR {e['error']}")
        for c in e["validation"]:
            mark = "ok  " if c["ok"] else "FAIL"
            lines.append(f"  {mark} validate {c['check']}" + (f": {c['detail']}" if c["detail"] else ""))
        for r in e["records"]:
            if r["status"] != "ok":
                lines.append(f"  {r['status'].upper()} {r['id']} ({r['op']}): {r['error']}")
            elif not r["checks"]:
                lines.append(f"  --   {r['id']} ({r['op']}) = {json.dumps(r['result'], sort_keys=True)}")
            for c in r["checks"]:
                mark = "PASS" if c["pass"] else "FAIL"
                exp = json.dumps(c["expected"]) if not isinstance(c["expected"], str) else c["expected"]
                line = f"  {mark} {r['id']}.{c['field']} {c['relation']} {exp} [{c['provenance']}]"
                if not c["pass"]:
                    line += f": {c['detail']}"
                lines.append(line)
    s = report["summary"]
    lines.append(
        f"{s['fixtures']} fixtures, {s['computations']} computations, "
        f"{s['passed']}/{s['expectations']} expectations passed, "
        f"{s['validation_failures']} validation failures, {s['computation_errors']} computation errors"
    )
    return "\n".join(lines)


def _emit(entries, args) -> int:
    report = {"tool": "azdelta", "version": __version__, "fixtures": entries, "summary": _summary(entries)}
    if not args.no_timestamp:
        report["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    if args.format == "json":
        print(json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False))
    else:
        print(_text(report))
    return exit_code(report["summary"])


# ---------------------------------------------------------------------------
# argument handling


def _eps(text: str) -> Fraction:
    try:
        x = parse_scalar(text)
    except (AzdeltaError, ValueError) as exc:
        raise argparse.ArgumentTypeError(f"--eps needs a rational such as 1/1000000: {exc}") from exc
    if not isinstance(x, Fraction) or x <= 0:
        raise argparse.ArgumentTypeError("--eps must be a positive rational")
    return x


def _global_flags(p: argparse.ArgumentParser, top: bool) -> None:
    # subcommands repeat the flags without defaults so they never undo a global choice
    d = {"default": argparse.SUPPRESS} if not top else {}
    p.add_argument("--format", choices=("text", "json"), **(d or {"default": "text"}))
    p.add_argument("--eps", type=_eps, help="enclosure width for numeric integrals", **(d or {"default": None}))
    p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp from json reports", **d)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, top=False)

    p = argparse.ArgumentParser(prog="azdelta", description=__doc__.splitlines()[0])
    _global_flags(p, top=True)
    p.add_argument("--version", action="version", version=f"azdelta {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("validate", parents=[common], help="structural checks of a scenario")
    v.add_argument("scenario", help="scenario file or bundled fixture id")
    z = sub.add_parser("zariski", parents=[common], help="Zariski decompositions")
    z.add_argument("scenario")
    z.add_argument("--param", default=None, help="only families in this parameter")
    c = sub.add_parser("chambers", parents=[common], help="two-parameter chamber tables")
    c.add_argument("scenario")
    s = sub.add_parser("sinv", parents=[common], help="S-invariants and flag bounds")
    s.add_argument("scenario")
    s.add_argument("--op", choices=SINV_OPS, required=True)
    d = sub.add_parser("delta", parents=[common], help="delta lower bounds")
    d.add_argument("scenario")
    r = sub.add_parser("verify-paper", parents=[common], help="replay every bundled fixture")
    r.add_argument("--filter", default=None, help="only fixtures whose id contains this text")
    sub.add_parser("list", parents=[common], help="list bundled fixture ids")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    if args.command == "list":
        print("\n".join(list_fixtures()))
        return 0
    if args.command == "validate":
        entries = [_fixture_entry(args.scenario, validate=True)]
    elif args.command == "verify-paper":
        ids = list_fixtures()
        if args.filter:
            ids = [i for i in ids if args.filter.lower() in i.lower()]
        if not ids:
            print(f"no bundled fixture matches {args.filter!r}", file=sys.stderr)
            return 1
        entries = [_fixture_entry(i, validate=True, only_all=True, eps=args.eps) for i in ids]
    else:
        ops = {
            "zariski": ("zariski",),
            "chambers": ("chambers",),
            "sinv": (getattr(args, "op", None),),
            "delta": DELTA_OPS,
        }[args.command]
        entries = [_fixture_entry(args.scenario, validate=False, ops=ops, eps=args.eps, param=getattr(args, "param", None))]
    return _emit(entries, args)


if __name__ == "__main__":
    sys.exit(main())
