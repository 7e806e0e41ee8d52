"""Evaluate the computations of a fixture and check them against expectations.

Every operation takes the fixture and a JSON argument object and returns a
dict of raw result fields (scalars, polynomials, rational or piecewise
functions, enclosures, flags).  :func:`to_json` renders them exactly and
:func:`compare` decides an expectation.  Arguments of the form
``"@compute-id.field"`` refer to results computed earlier in the same fixture.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ..errors import AzdeltaError, ScenarioError
from ..exact import (
    Enclosure,
    ParseError,
    PiecewiseFn,
    Poly,
    QuadElem,
    RationalFn,
    format_scalar,
    parse_expr,
    parse_ratfn,
)
from ..invariants import (
    az_combine,
    az_min,
    dp4_conic_bound,
    flag_chambers,
    flag_delta_surface,
    lemma34_combine,
    nemuro_bound,
    polarized_tail,
    s_threefold_divisor,
    s_w_curve,
    s_w_point,
    verify_threefold_ledger,
)
from ..lattice import DivClass
from ..zariski import decompose, decompose_parametric, two_param_chambers
from .schema import CANONICAL_NAME, Fixture, check_keys, family_class, poly, scalar

# ---------------------------------------------------------------------------
# argument helpers


class _Ctx:
    def __init__(self, fixture: Fixture, eps=None):
        self.f = fixture
        self.eps = eps
        self.results: dict = {}

    def ref(self, x):
        """Resolve ``"@id.field"`` references, leaving other values alone."""
        if isinstance(x, str) and x.startswith("@"):
            cid, _, path = x[1:].partition(".")
            if cid not in self.results:
                raise ScenarioError(f"reference {x!r} to a computation that has not run")
            return field_of(self.results[cid], path or "value")
        return x

    def value(self, x, where):
        x = self.ref(x)
        if isinstance(x, str) or isinstance(x, int):
            return scalar(x, where)
        return x

    def setup(self, args):
        name = args.get("setup")
        if name not in self.f.setups:
            raise ScenarioError(f"unknown setup {name!r}")
        return self.f.setups[name]

    def point(self, args):
        name = args.get("point")
        if name not in self.f.points:
            raise ScenarioError(f"unknown point {name!r}")
        return self.f.points[name]

    def surface(self):
        if self.f.lattice is None:
            raise ScenarioError("operation needs a surface lattice")
        return self.f.lattice

    def surface_class(self, spec, where):
        L = self.surface()
        check_keys(spec, set(L.curves) | {CANONICAL_NAME}, where)
        out = L.zero()
        for c, p in spec.items():
            out = out + (L.K if c == CANONICAL_NAME else L.curve(c)) * poly(p, where)
        return out

    def threefold_class(self, spec, where):
        X = self.f.threefold
        if X is None:
            raise ScenarioError("operation needs a threefold")
        check_keys(spec, set(X.classes) | {CANONICAL_NAME}, where)
        out = X.cls([0] * len(X.basis))
        for c, p in spec.items():
            out = out + (-X.anticanonical if c == CANONICAL_NAME else X.named(c)) * poly(p, where)
        return out


def field_of(result, path: str):
    cur = result
    for part in path.split("."):
        if isinstance(cur, Mapping) and part in cur:
            cur = cur[part]
        elif isinstance(cur, (list, tuple)) and part.isdigit() and int(part) < len(cur):
            cur = cur[int(part)]
        else:
            raise ScenarioError(f"result has no field {path!r}")
    return cur


def _const(p):
    p = Poly.coerce(p)
    return p.constant_value() if p.is_constant() else p


def _piecewise(spec, where) -> PiecewiseFn:
    check_keys(spec, {"var", "pieces"}, where, ("pieces",))
    var = spec.get("var", "t")
    bps, pieces = [], []
    for i, pc in enumerate(spec["pieces"]):
        w = f"{where}.pieces[{i}]"
        check_keys(pc, {"lo", "hi", "f"}, w, ("lo", "hi", "f"))
        lo = scalar(pc["lo"], w)
        if bps and bps[-1] != lo:
            raise ScenarioError(f"{w}: pieces must be contiguous")
        if not bps:
            bps.append(lo)
        bps.append(None if pc["hi"] is None else scalar(pc["hi"], w))
        pieces.append(_ratfn(pc["f"], var, w))
    return PiecewiseFn(var, tuple(bps), tuple(pieces))


def _ratfn(x, var, where) -> RationalFn:
    if isinstance(x, (float, bool)):
        raise ScenarioError(f"{where}: exact values must be strings")
    try:
        return parse_ratfn(x, var)
    except (ParseError, ZeroDivisionError) as exc:
        raise ScenarioError(f"{where}: {exc}") from exc


def _cell_record(cell, curve=None) -> dict:
    rec = {
        "lo": cell.lo,
        "hi": cell.hi,
        "support": list(cell.support),
        "negative": {c: _const(a) for c, a in cell.negative.items()},
        "positive": cell.positive,
        "volume": _const(cell.volume),
    }
    if cell.inner_lo is not None:
        rec["inner_lo"] = _const(cell.inner_lo)
        rec["inner_hi"] = _const(cell.inner_hi)
    if curve is not None:
        rec["pairing"] = _const(cell.pairing(curve))
    return rec


def _threshold_record(cx) -> list:
    return [{"lo": a, "hi": b, "t": _const(t)} for a, b, t in cx.threshold]


# ---------------------------------------------------------------------------
# operations


def op_triple(ctx, args):
    check_keys(args, {"classes"}, "args", ("classes",))
    cl = args["classes"]
    if not isinstance(cl, list) or len(cl) != 3:
        raise ScenarioError("triple needs three classes")
    D = [ctx.threefold_class(c, "args.classes") for c in cl]
    return {"value": _const(ctx.f.threefold.triple(*D))}


def op_s_threefold(ctx, args):
    check_keys(args, {"setup"}, "args", ("setup",))
    return {"value": s_threefold_divisor(ctx.setup(args))}


def op_verify_ledger(ctx, args):
    check_keys(args, {"setup"}, "args", ("setup",))
    rep = verify_threefold_ledger(ctx.setup(args), strict=False)
    return {"ok": rep.ok, "checks": len(rep.checks), "failures": [f"{c.name}: {c.detail}" for c in rep.failures()]}


def op_s_w_curve(ctx, args):
    check_keys(args, {"setup", "point", "curve"}, "args", ("setup",))
    target = ctx.point(args) if "point" in args else args.get("curve")
    if target is None:
        raise ScenarioError("s_w_curve needs a point or a curve")
    v = s_w_curve(ctx.setup(args), target)
    return {"value": v.value, "relation": v.relation}


def op_s_w_point(ctx, args):
    check_keys(args, {"setup", "point"}, "args", ("setup", "point"))
    v = s_w_point(ctx.setup(args), ctx.point(args))
    return {"base": v.base, "f_p": v.f_p, "total": v.total, "relation": v.relation}


def _az_record(b):
    return {
        "value": b.value,
        "attained_by": list(b.attained_by),
        "boundary": b.boundary,
        "strict": b.strict,
        "two_term": b.two_term,
        "relation": b.relation,
    }


def op_az_combine(ctx, args):
    check_keys(args, {"setup", "point", "s_x", "s_curve", "s_point", "log_discrepancy"}, "args")
    if "setup" in args:
        sx = ctx.value(args["s_x"], "args.s_x") if "s_x" in args else None
        return _az_record(az_combine(ctx.setup(args), ctx.point(args), sx))
    vals = [ctx.value(args[k], f"args.{k}") for k in ("s_x", "s_curve", "s_point")]
    A = ctx.value(args.get("log_discrepancy", 1), "args.log_discrepancy")
    return _az_record(az_min(*vals, A))


def op_chambers(ctx, args):
    check_keys(args, {"setup", "curve", "family", "inner"}, "args", ("curve",))
    curve = args["curve"]
    if "setup" in args:
        cx = flag_chambers(ctx.setup(args), curve)
    else:
        fam = ctx.f.families.get(args.get("family"))
        if fam is None:
            raise ScenarioError(f"unknown family {args.get('family')!r}")
        L = ctx.surface()
        D = family_class(L, fam)
        cx = two_param_chambers(L, [(fam.lo, fam.hi, D)], curve, fam.var, args.get("inner", "v"))
    return {"cells": [_cell_record(c, curve) for c in cx.cells], "threshold": _threshold_record(cx)}


def op_zariski(ctx, args):
    check_keys(args, {"family", "class", "at"}, "args")
    L = ctx.surface()
    if "class" in args:
        res = decompose(L, ctx.surface_class(args["class"], "args.class"))
        return {
            "positive": res.positive,
            "negative": dict(res.negative),
            "support": list(res.support),
            "volume": _const(L.pair(res.positive, res.positive)),
        }
    fam = ctx.f.families.get(args.get("family"))
    if fam is None:
        raise ScenarioError(f"unknown family {args.get('family')!r}")
    D = family_class(L, fam)
    if "at" in args:
        x = scalar(args["at"], "args.at")
        res = decompose(L, D.subs({fam.var: x}))
        return {
            "positive": res.positive,
            "negative": dict(res.negative),
            "support": list(res.support),
            "volume": _const(L.pair(res.positive, res.positive)),
        }
    cx = decompose_parametric(L, D, fam.var, fam.lo, fam.hi)
    return {"cells": [_cell_record(c) for c in cx.cells]}


def _flag_record(r) -> dict:
    out = {"s_curve": r.s_curve, "points": dict(r.points), "worst": r.worst, "bound": r.bound}
    if not isinstance(r.s_curve, PiecewiseFn):
        out["upper"] = r.log_discrepancy / r.s_curve
    return out


def op_flag_delta(ctx, args):
    check_keys(args, {"curve", "polarization", "var", "lo", "hi", "points", "log_discrepancy"}, "args", ("curve",))
    L = ctx.surface()
    pol = ctx.surface_class(args["polarization"], "args.polarization") if "polarization" in args else L.anticanonical
    pts = None
    if args.get("points") is not None:
        names = args["points"]
        missing = [p for p in names if p not in ctx.f.points]
        if missing:
            raise ScenarioError(f"unknown points {missing}")
        pts = {p: ctx.f.points[p] for p in names}
    hi = args.get("hi", 0)
    r = flag_delta_surface(
        L,
        pol,
        args["curve"],
        pts,
        args.get("var", "t"),
        scalar(args.get("lo", 0), "args.lo"),
        None if hi is None else scalar(hi, "args.hi"),
        scalar(args.get("log_discrepancy", 1), "args.log_discrepancy"),
    )
    return _flag_record(r)


def op_dp4_conic(ctx, args):
    check_keys(args, {"kind", "lo", "hi"}, "args", ("kind",))
    hi = args.get("hi")
    r = dp4_conic_bound(args["kind"], scalar(args.get("lo", 0), "args.lo"), None if hi is None else scalar(hi, "args.hi"))
    return {"bound": r.bound, "cases": {k: _flag_record(v) for k, v in r.cases.items()}}


def op_nemuro(ctx, args):
    check_keys(args, {"setup", "lct", "delta", "domination"}, "args", ("setup",))
    st = ctx.setup(args)
    lct = {k: scalar(v, f"args.lct.{k}") for k, v in (args.get("lct") or {}).items()}
    delta = None if args.get("delta") is None else ctx.value(args["delta"], "args.delta")
    dom = None
    if args.get("domination") is not None:
        dom = []
        for i, d in enumerate(args["domination"]):
            w = f"args.domination[{i}]"
            check_keys(d, {"lo", "hi", "lam"}, w, ("lo", "hi", "lam"))
            dom.append((scalar(d["lo"], w), scalar(d["hi"], w), poly(d["lam"], w)))
    r = nemuro_bound(st, lct, delta, dom)
    return {
        "shape": r.shape,
        "negative_term": r.negative_term,
        "vol_weight": r.vol_weight,
        "coefficient": r.coefficient,
        "lower_bound": r.lower_bound,
        "dominated": r.dominated,
        "failures": list(r.domination_failures),
    }


def op_smooth_combine(ctx, args):
    check_keys(args, {"delta", "s_x", "setup"}, "args", ("delta",))
    sx = ctx.value(args["s_x"], "args.s_x") if "s_x" in args else s_threefold_divisor(ctx.setup(args))
    return {"value": lemma34_combine(ctx.value(args["delta"], "args.delta"), sx)}


def op_polarized_tail(ctx, args):
    keys = {"V", "lo", "hi", "twist", "l_squared", "inv_delta", "scale", "var", "eps"}
    check_keys(args, keys, "args", ("V", "lo", "hi", "twist", "l_squared", "inv_delta"))
    var = args.get("var", "u")
    inv = _piecewise(args["inv_delta"], "args.inv_delta")
    eps = ctx.eps if ctx.eps is not None else (scalar(args["eps"], "args.eps") if "eps" in args else None)
    r = polarized_tail(
        scalar(args["V"], "args.V"),
        scalar(args["lo"], "args.lo"),
        scalar(args["hi"], "args.hi"),
        _ratfn(args["twist"], var, "args.twist"),
        poly(args["l_squared"], "args.l_squared"),
        inv,
        poly(args.get("scale", 1), "args.scale"),
        var,
        eps,
    )
    out = {
        "exact": r.exact,
        "pieces": [{"lo": p.lo, "hi": p.hi, "integrand": p.integrand, "exact": p.exact} for p in r.pieces],
    }
    if r.enclosure is not None:
        out["enclosure"] = r.enclosure
        out["width"] = r.enclosure.width
    return out


def _terms(ctx, args):
    check_keys(args, {"terms"}, "args", ("terms",))
    if not isinstance(args["terms"], list) or not args["terms"]:
        raise ScenarioError("terms must be a non-empty list")
    return [ctx.value(t, "args.terms") for t in args["terms"]]


def op_add(ctx, args):
    ts = _terms(ctx, args)
    total = ts[0]
    for t in ts[1:]:
        total = total + t
    return {"value": total}


def op_min(ctx, args):
    return {"value": min(_terms(ctx, args))}


def op_evaluate(ctx, args):
    check_keys(args, {"of", "at"}, "args", ("of", "at"))
    f = ctx.ref(args["of"])
    x = scalar(args["at"], "args.at")
    if isinstance(f, PiecewiseFn):
        return {"value": f.evaluate(x)}
    if isinstance(f, RationalFn):
        return {"value": f.evaluate(x)}
    raise ScenarioError("evaluate needs a rational or piecewise function")


OPS = {
    "add": op_add,
    "az_combine": op_az_combine,
    "chambers": op_chambers,
    "dp4_conic": op_dp4_conic,
    "evaluate": op_evaluate,
    "flag_delta": op_flag_delta,
    "min": op_min,
    "nemuro": op_nemuro,
    "polarized_tail": op_polarized_tail,
    "s_threefold": op_s_threefold,
    "s_w_curve": op_s_w_curve,
    "s_w_point": op_s_w_point,
    "smooth_combine": op_smooth_combine,
    "triple": op_triple,
    "verify_ledger": op_verify_ledger,
    "zariski": op_zariski,
}


# ---------------------------------------------------------------------------
# rendering and comparison


def to_json(x):
    """Exact, JSON-ready rendering of a result value."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, (Fraction, QuadElem)):
        return format_scalar(x)
    if isinstance(x, (Poly, RationalFn)):
        return str(x)
    if isinstance(x, PiecewiseFn):
        return [{"lo": to_json(a), "hi": to_json(b), "f": str(f)} for a, b, f in x.intervals()]
    if isinstance(x, Enclosure):
        return {"lo": format_scalar(x.lo), "hi": format_scalar(x.hi)}
    if isinstance(x, DivClass):
        return {b: str(c) for b, c in zip(x.lattice.basis, x.coords) if not c.is_zero()}
    if isinstance(x, Mapping):
        return {str(k): to_json(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_json(v) for v in x]
    raise TypeError(f"cannot render {type(x).__name__}")


def _num_cmp(a, b, rel) -> bool:
    return {
        "=": a == b,
        "<=": a <= b,
        ">=": a >= b,
        "<": a < b,
        ">": a > b,
    }[rel]


def _same_fn(a: RationalFn, b: RationalFn) -> bool:
    return a.num * b.den == b.num * a.den


def compare(actual, expected, relation: str = "=") -> tuple[bool, str]:
    """Decide ``actual <relation> expected``; ``expected`` is raw JSON."""
    try:
        return _compare(actual, expected, relation)
    except (ParseError, ScenarioError, TypeError, ValueError) as exc:
        return False, f"cannot compare: {exc}"


def _compare(actual, expected, relation):
    if relation == "contains":
        if not isinstance(actual, Enclosure):
            return False, "contains needs an enclosure"
        x = scalar(expected, "expected")
        return actual.contains(x), f"[{format_scalar(actual.lo)}, {format_scalar(actual.hi)}]"
    if isinstance(actual, bool) or isinstance(actual, str) or actual is None:
        return relation == "=" and actual == expected, repr(actual)
    if isinstance(actual, (Fraction, QuadElem, int)):
        want = scalar(expected, "expected")
        return _num_cmp(actual, want, relation), format_scalar(actual)
    if isinstance(actual, Poly):
        want = parse_expr(expected)
        want = Poly.coerce(want) if not isinstance(want, RationalFn) else want
        ok = actual == want if isinstance(want, Poly) else _same_fn(RationalFn.coerce(actual, None), want)
        return relation == "=" and ok, str(actual)
    if isinstance(actual, RationalFn):
        return relation == "=" and _same_fn(actual, _ratfn(expected, actual.var, "expected")), str(actual)
    if isinstance(actual, PiecewiseFn):
        if not isinstance(expected, list) or len(expected) != len(actual.pieces):
            return False, f"{len(actual.pieces)} pieces: {to_json(actual)}"
        for (a, b, f), want in zip(actual.intervals(), expected):
            check_keys(want, {"lo", "hi", "f"}, "expected", ("lo", "hi", "f"))
            if a != scalar(want["lo"], "lo") or (b is None) != (want["hi"] is None):
                return False, json.dumps(to_json(actual))
            if b is not None and b != scalar(want["hi"], "hi"):
                return False, json.dumps(to_json(actual))
            g = RationalFn.coerce(f, actual.var)
            if not _same_fn(g, _ratfn(want["f"], actual.var, "f")):
                return False, json.dumps(to_json(actual))
        return relation == "=", "piecewise match"
    if isinstance(actual, DivClass):
        L = actual.lattice
        want = L.zero()
        for c, p in expected.items():
            want = want + (L.K if c == CANONICAL_NAME else L.curve(c)) * poly(p, "expected")
        ok = all(x.is_zero() for x in L.pairing_vector(actual - want))
        return relation == "=" and ok, str(actual)
    if isinstance(actual, Mapping):
        if not isinstance(expected, Mapping):
            return False, "expected an object"
        for k, v in expected.items():
            if k not in actual:
                return False, f"missing field {k!r}"
            ok, detail = _compare(actual[k], v, relation)
            if not ok:
                return False, f"{k}: {detail}"
        return True, "match"
    if isinstance(actual, (list, tuple)):
        if not isinstance(expected, list) or len(expected) != len(actual):
            return False, f"length {len(actual)}"
        if all(isinstance(a, str) for a in actual):
            return relation == "=" and sorted(actual) == sorted(expected), repr(list(actual))
        for i, (a, w) in enumerate(zip(actual, expected)):
            ok, detail = _compare(a, w, relation)
            if not ok:
                return False, f"[{i}] {detail}"
        return True, "match"
    return False, f"cannot compare {type(actual).__name__}"


# ---------------------------------------------------------------------------
# driving a fixture


@dataclass
class Record:
    fixture: str
    id: str
    op: str
    inputs: str
    status: str  # "ok", "error" (computation failed) or "invalid" (bad arguments)
    result: dict | None = None
    error: str = ""
    checks: tuple = ()

    @property
    def passed(self) -> bool:
        return self.status == "ok" and all(c["pass"] for c in self.checks)


def _digest(fixture_data: dict, comp) -> str:
    doc = {"fixture": fixture_data, "op": comp.op, "args": comp.args}
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _references(x) -> set:
    if isinstance(x, str) and x.startswith("@"):
        return {x[1:].partition(".")[0]}
    if isinstance(x, Mapping):
        return set().union(*(_references(v) for v in x.values())) if x else set()
    if isinstance(x, (list, tuple)):
        return set().union(*(_references(v) for v in x)) if x else set()
    return set()


def with_dependencies(f: Fixture, ids) -> set:
    """``ids`` together with every computation their arguments refer to."""
    args = {c.id: c.args for c in f.compute}
    todo, seen = list(ids), set()
    while todo:
        cid = todo.pop()
        if cid in seen or cid not in args:
            continue
        seen.add(cid)
        todo.extend(_references(args[cid]))
    return seen


def run_fixture(f: Fixture, eps=None, only=None) -> list[Record]:
    """Evaluate ``f.compute`` in order (or the ids in ``only``) and check expectations."""
    from .schema import dump_fixture

    data = dump_fixture(f)
    data.pop("compute", None)
    data.pop("expect", None)
    ctx = _Ctx(f, eps)
    records = []
    for comp in f.compute:
        if only is not None and comp.id not in only:
            continue
        rec = Record(f.id, comp.id, comp.op, _digest(data, comp), "ok")
        fn = OPS.get(comp.op)
        try:
            if fn is None:
                raise ScenarioError(f"unknown operation {comp.op!r}")
            raw = fn(ctx, comp.args)
            ctx.results[comp.id] = raw
            rec.result = raw
        except ScenarioError as exc:
            rec.status, rec.error = "invalid", str(exc)
        except (AzdeltaError, ValueError, ZeroDivisionError, ArithmeticError) as exc:
            rec.status, rec.error = "error", f"{type(exc).__name__}: {exc}"
        checks = []
        for e in f.expect:
            if e.compute != comp.id:
                continue
            if rec.status != "ok":
                ok, detail = False, "computation failed"
                actual = None
            else:
                try:
                    actual = field_of(rec.result, e.field)
                    ok, detail = compare(actual, e.value, e.relation)
                except ScenarioError as exc:
                    actual, ok, detail = None, False, str(exc)
            checks.append(
                {
                    "field": e.field,
                    "relation": e.relation,
                    "expected": e.value,
                    "actual": to_json(actual) if rec.status == "ok" and actual is not None else None,
                    "pass": bool(ok),
                    "detail": "" if ok else detail,
                    "provenance": e.provenance,
                }
            )
        rec.checks = tuple(checks)
        records.append(rec)
    return records
