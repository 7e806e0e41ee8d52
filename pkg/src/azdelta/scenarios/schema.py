"""The scenario file format: JSON documents with exact values as strings.

A scenario bundles lattices, threefold ledgers, flags and a list of requested
computations with their expected values.  :func:`parse_fixture` turns the
decoded JSON into live objects and :func:`dump_fixture` goes back; unknown
keys are rejected everywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from ..errors import AzdeltaError, ScenarioError
from ..exact import ParseError, Poly, format_scalar, parse_poly, parse_scalar
from ..exact.scalar import Scalar
from ..invariants import FlagSpec, LedgerPiece, ThreefoldSetup
from ..lattice import SurfaceLattice, ThreefoldLattice

RELATIONS = ("=", "<=", ">=", "<", ">", "contains")
PROVENANCE = ("paper", "derived", "trivial")
CANONICAL_NAME = "K"

TOP_KEYS = {
    "id",
    "description",
    "lattice",
    "threefold",
    "setups",
    "points",
    "families",
    "dual_graph",
    "projection",
    "compute",
    "expect",
}


@dataclass(frozen=True)
class Family:
    """A divisor class with polynomial coordinates in ``var`` on ``[lo, hi]``."""

    coords: dict  # curve name -> Poly
    var: str = "u"
    lo: Scalar = Fraction(0)
    hi: Scalar | None = None


@dataclass(frozen=True)
class DualGraph:
    vertices: dict  # curve name -> self-intersection
    edges: tuple  # sorted name pairs
    rank: int | None = None


@dataclass(frozen=True)
class Projection:
    """Pullbacks of the classes of a downstairs fixture to this lattice."""

    onto: str
    pullback: dict  # downstairs curve -> {curve here: coefficient}


@dataclass(frozen=True)
class Computation:
    id: str
    op: str
    args: dict


@dataclass(frozen=True)
class Expectation:
    compute: str
    field: str
    relation: str
    value: object  # raw JSON value; interpreted against the computed type
    provenance: str
    note: str = ""


@dataclass(eq=False)
class Fixture:
    id: str
    description: str = ""
    lattice: SurfaceLattice | None = None
    threefold: ThreefoldLattice | None = None
    setups: dict = field(default_factory=dict)
    points: dict = field(default_factory=dict)
    families: dict = field(default_factory=dict)
    dual_graph: DualGraph | None = None
    projection: Projection | None = None
    compute: tuple = ()
    expect: tuple = ()
    threefold_data: ThreefoldData | None = None
    lattice_ref: str | None = None
    threefold_ref: str | None = None
    source: str = ""


# ---------------------------------------------------------------------------
# helpers


def _err(where: str, msg: str) -> ScenarioError:
    return ScenarioError(f"{where}: {msg}" if where else msg)


def check_keys(obj, allowed, where: str, required=()) -> None:
    if not isinstance(obj, Mapping):
        raise _err(where, f"expected an object, got {type(obj).__name__}")
    extra = sorted(set(obj) - set(allowed))
    if extra:
        raise _err(where, f"unknown keys {extra}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise _err(where, f"missing keys {missing}")


def scalar(x, where: str) -> Scalar:
    if isinstance(x, (float, bool)) or x is None:
        raise _err(where, f"exact values must be strings or integers, got {x!r}")
    try:
        return parse_scalar(x)
    except (ParseError, ZeroDivisionError, TypeError) as exc:
        raise _err(where, str(exc)) from exc


def poly(x, where: str) -> Poly:
    if isinstance(x, (float, bool)) or x is None:
        raise _err(where, f"exact values must be strings or integers, got {x!r}")
    try:
        return parse_poly(x)
    except (ParseError, ZeroDivisionError, TypeError) as exc:
        raise _err(where, str(exc)) from exc


def render(x) -> str:
    """Exact string for a scalar or polynomial."""
    if isinstance(x, Poly):
        return str(x)
    return format_scalar(x)


def _name_list(x, where: str) -> tuple:
    if not isinstance(x, list) or not all(isinstance(n, str) for n in x):
        raise _err(where, "expected a list of names")
    return tuple(x)


def _coords(spec, names: dict, width: int, where: str, canonical=None, constant=True) -> list:
    """Coordinates of ``{name: coefficient}`` (or a plain list) over a basis."""
    if isinstance(spec, list):
        if len(spec) != width:
            raise _err(where, f"expected {width} coordinates")
        return [scalar(c, where) if constant else poly(c, where) for c in spec]
    if not isinstance(spec, Mapping):
        raise _err(where, "expected a coordinate list or a {name: coefficient} object")
    out = [Poly() for _ in range(width)] if not constant else [Fraction(0)] * width
    for name, coef in spec.items():
        if name == CANONICAL_NAME and canonical is not None:
            vec = canonical
        elif name in names:
            vec = names[name]
        else:
            raise _err(where, f"unknown name {name!r}")
        c = scalar(coef, where) if constant else poly(coef, where)
        for k, x in enumerate(vec):
            if x:
                out[k] = out[k] + c * x
    return out


def _sparse(vec, basis) -> dict:
    return {b: render(c) for b, c in zip(basis, vec) if c}


# ---------------------------------------------------------------------------
# lattices

SURFACE_KEYS = {"name", "basis", "gram", "canonical", "degree", "curves", "neg_curves", "eff_generators", "relations", "orbits"}


def parse_surface(obj, where: str = "lattice") -> SurfaceLattice:
    check_keys(obj, SURFACE_KEYS, where, ("basis", "gram", "canonical"))
    basis = _name_list(obj["basis"], f"{where}.basis")
    n = len(basis)
    gram = obj["gram"]
    if not isinstance(gram, list) or len(gram) != n or any(not isinstance(r, list) or len(r) != n for r in gram):
        raise _err(f"{where}.gram", f"expected a {n}x{n} matrix")
    gram = [[scalar(x, f"{where}.gram") for x in row] for row in gram]
    names = {b: [Fraction(int(i == k)) for k in range(n)] for i, b in enumerate(basis)}
    curves = {}
    for cname, spec in (obj.get("curves") or {}).items():
        if cname in names or cname == CANONICAL_NAME:
            raise _err(f"{where}.curves", f"{cname!r} is already defined")
        names[cname] = curves[cname] = _coords(spec, names, n, f"{where}.curves.{cname}")
    canonical = _coords(obj["canonical"], names, n, f"{where}.canonical")
    relations = []
    for i, rel in enumerate(obj.get("relations") or []):
        w = f"{where}.relations[{i}]"
        check_keys(rel, {"label", "lhs", "rhs"}, w, ("lhs", "rhs"))
        lhs = _coords(rel["lhs"], names, n, w, canonical)
        rhs = _coords(rel["rhs"], names, n, w, canonical)
        relations.append((rel.get("label", f"relation {i}"), lhs, rhs))
    degree = obj.get("degree")
    try:
        return SurfaceLattice(
            obj.get("name", ""),
            basis,
            gram,
            canonical,
            None if degree is None else scalar(degree, f"{where}.degree"),
            curves,
            _name_list(obj.get("neg_curves", []), f"{where}.neg_curves"),
            _name_list(obj.get("eff_generators", []), f"{where}.eff_generators"),
            tuple(relations),
            _name_list(obj.get("orbits", []), f"{where}.orbits"),
        )
    except AzdeltaError as exc:
        raise _err(where, str(exc)) from exc


def dump_surface(L: SurfaceLattice) -> dict:
    out = {
        "name": L.name,
        "basis": list(L.basis),
        "gram": [[render(x) for x in row] for row in L.gram],
        "canonical": _sparse(L.canonical, L.basis),
    }
    if L.degree is not None:
        out["degree"] = render(L.degree)
    extra = {k: _sparse(v, L.basis) for k, v in L.curves.items() if k not in L.basis}
    if extra:
        out["curves"] = extra
    out["neg_curves"] = list(L.neg_curves)
    out["eff_generators"] = list(L.eff_generators)
    if L.relations:
        out["relations"] = [
            {"label": lab, "lhs": _sparse(lhs, L.basis), "rhs": _sparse(rhs, L.basis)} for lab, lhs, rhs in L.relations
        ]
    if L.orbits:
        out["orbits"] = list(L.orbits)
    return out


THREEFOLD_KEYS = {"name", "basis", "triple", "canonical", "degree", "mori", "classes", "eff_generators", "relations"}


@dataclass(frozen=True)
class ThreefoldData:
    lattice: ThreefoldLattice
    relations: tuple  # (label, lhs coords, rhs coords), checked coordinatewise


def parse_threefold(obj, where: str = "threefold") -> ThreefoldData:
    check_keys(obj, THREEFOLD_KEYS, where, ("basis", "triple", "canonical"))
    basis = _name_list(obj["basis"], f"{where}.basis")
    n = len(basis)
    index = {b: i for i, b in enumerate(basis)}
    triple = {}
    tri = obj["triple"]
    if not isinstance(tri, Mapping):
        raise _err(f"{where}.triple", "expected an object of monomials")
    for key, v in tri.items():
        parts = key.split(".")
        if len(parts) != 3 or any(p not in index for p in parts):
            raise _err(f"{where}.triple", f"bad monomial {key!r}; write it as A.B.C over the basis")
        k = tuple(sorted(index[p] for p in parts))
        if k in triple:
            raise _err(f"{where}.triple", f"monomial {key!r} given twice")
        triple[k] = scalar(v, f"{where}.triple.{key}")
    names = {b: [Fraction(int(i == k)) for k in range(n)] for i, b in enumerate(basis)}
    classes = {}
    for cname, spec in (obj.get("classes") or {}).items():
        if cname in names:
            raise _err(f"{where}.classes", f"{cname!r} is already defined")
        names[cname] = classes[cname] = _coords(spec, names, n, f"{where}.classes.{cname}")
    canonical = _coords(obj["canonical"], names, n, f"{where}.canonical")
    mori = []
    for i, ray in enumerate(obj.get("mori") or []):
        mori.append(_coords(ray, names, n, f"{where}.mori[{i}]"))
    relations = []
    for i, rel in enumerate(obj.get("relations") or []):
        w = f"{where}.relations[{i}]"
        check_keys(rel, {"label", "lhs", "rhs"}, w, ("lhs", "rhs"))
        relations.append(
            (rel.get("label", f"relation {i}"), tuple(_coords(rel["lhs"], names, n, w, canonical)), tuple(_coords(rel["rhs"], names, n, w, canonical)))
        )
    degree = obj.get("degree")
    try:
        X = ThreefoldLattice(
            obj.get("name", ""),
            basis,
            triple,
            canonical,
            None if degree is None else scalar(degree, f"{where}.degree"),
            mori,
            classes,
            _name_list(obj.get("eff_generators", []), f"{where}.eff_generators"),
        )
    except AzdeltaError as exc:
        raise _err(where, str(exc)) from exc
    return ThreefoldData(X, tuple(relations))


def dump_threefold(data: ThreefoldData) -> dict:
    X = data.lattice
    out = {
        "name": X.name,
        "basis": list(X.basis),
        "triple": {".".join(X.basis[i] for i in k): render(v) for k, v in sorted(X.triple_numbers.items()) if v},
        "canonical": _sparse(X.canonical, X.basis),
    }
    if X.degree is not None:
        out["degree"] = render(X.degree)
    out["mori"] = [[render(x) for x in ray] for ray in X.mori]
    extra = {k: _sparse(v, X.basis) for k, v in X.classes.items() if k not in X.basis}
    if extra:
        out["classes"] = extra
    out["eff_generators"] = list(X.eff_generators)
    if data.relations:
        out["relations"] = [
            {"label": lab, "lhs": _sparse(lhs, X.basis), "rhs": _sparse(rhs, X.basis)} for lab, lhs, rhs in data.relations
        ]
    return out


# ---------------------------------------------------------------------------
# ledgers, points, families

SETUP_KEYS = {"divisor", "tau", "var", "pieces", "restriction", "cycles"}
PIECE_KEYS = {"lo", "hi", "positive", "negative"}


def parse_setup(obj, X: ThreefoldLattice, S: SurfaceLattice | None, name: str, where: str) -> ThreefoldSetup:
    check_keys(obj, SETUP_KEYS, where, ("divisor", "tau", "pieces"))
    xnames = {k: list(v) for k, v in X.classes.items()}
    n = len(X.basis)
    var = obj.get("var", "u")
    divisor = X.cls(_coords(obj["divisor"], xnames, n, f"{where}.divisor"))
    pieces = []
    for i, p in enumerate(obj["pieces"]):
        w = f"{where}.pieces[{i}]"
        check_keys(p, PIECE_KEYS, w, ("lo", "hi", "positive"))
        pos = X.cls(_coords(p["positive"], xnames, n, f"{w}.positive", constant=False))
        neg = {}
        for e, f in (p.get("negative") or {}).items():
            if e not in X.classes:
                raise _err(f"{w}.negative", f"unknown class {e!r}")
            neg[e] = poly(f, f"{w}.negative.{e}")
        pieces.append(LedgerPiece(scalar(p["lo"], w), scalar(p["hi"], w), pos, neg))
    restriction = {}
    cycles = {}
    if S is not None:
        snames = {k: list(v) for k, v in S.curves.items()}
        m = len(S.basis)
        for b, spec in (obj.get("restriction") or {}).items():
            if b not in X.basis:
                raise _err(f"{where}.restriction", f"{b!r} is not a basis class of the threefold")
            restriction[b] = _coords(spec, snames, m, f"{where}.restriction.{b}", list(S.canonical))
        for e, spec in (obj.get("cycles") or {}).items():
            if e not in X.classes:
                raise _err(f"{where}.cycles", f"unknown class {e!r}")
            check_keys(spec, S.curves.keys(), f"{where}.cycles.{e}")
            cycles[e] = {c: scalar(v, f"{where}.cycles.{e}") for c, v in spec.items()}
    elif obj.get("restriction") or obj.get("cycles"):
        raise _err(where, "restriction data needs a surface lattice")
    return ThreefoldSetup(
        X, divisor, scalar(obj["tau"], f"{where}.tau"), tuple(pieces), S, restriction, cycles, var, name
    )


def dump_setup(st: ThreefoldSetup) -> dict:
    X = st.threefold
    out = {
        "divisor": _sparse(st.divisor.coords, X.basis),
        "tau": render(st.tau),
        "var": st.var,
        "pieces": [],
    }
    for p in st.pieces:
        d = {"lo": render(p.lo), "hi": render(p.hi), "positive": _sparse(p.positive.coords, X.basis)}
        if p.negative:
            d["negative"] = {e: render(f) for e, f in p.negative.items()}
        out["pieces"].append(d)
    if st.surface is not None:
        out["restriction"] = {b: _sparse(v, st.surface.basis) for b, v in st.restriction.items()}
        if st.cycles:
            out["cycles"] = {e: {c: render(m) for c, m in cyc.items()} for e, cyc in st.cycles.items()}
    return out


POINT_KEYS = {"curve", "incidence", "lies_on", "upper", "log_discrepancy"}


def parse_point(obj, S: SurfaceLattice | None, name: str, where: str) -> FlagSpec:
    check_keys(obj, POINT_KEYS, where, ("curve",))
    curve = obj["curve"]
    known = S.curves if S is not None else {}
    if S is not None and curve not in known:
        raise _err(where, f"unknown curve {curve!r}")
    inc = obj.get("incidence") or {}
    check_keys(inc, known.keys() if S is not None else inc.keys(), f"{where}.incidence")
    incidence = {}
    for c, m in inc.items():
        v = scalar(m, f"{where}.incidence.{c}")
        if v < 0 or getattr(v, "denominator", 1) != 1:
            raise _err(f"{where}.incidence.{c}", "multiplicities are nonnegative integers")
        incidence[c] = v
    lies_on = obj.get("lies_on")
    if lies_on is not None:
        lies_on = frozenset(_name_list(lies_on, f"{where}.lies_on"))
        bad = sorted(c for c in lies_on if S is not None and c not in known)
        if bad:
            raise _err(f"{where}.lies_on", f"unknown curves {bad}")
    upper = obj.get("upper", False)
    if not isinstance(upper, bool):
        raise _err(f"{where}.upper", "expected true or false")
    A = scalar(obj.get("log_discrepancy", 1), f"{where}.log_discrepancy")
    return FlagSpec(curve, incidence, lies_on, upper, A, name)


def dump_point(p: FlagSpec) -> dict:
    out = {"curve": p.curve}
    if p.incidence:
        out["incidence"] = {c: render(m) for c, m in p.incidence.items()}
    if p.lies_on is not None:
        out["lies_on"] = sorted(p.lies_on)
    if p.upper:
        out["upper"] = True
    if p.log_discrepancy != 1:
        out["log_discrepancy"] = render(p.log_discrepancy)
    return out


def parse_family(obj, S: SurfaceLattice | None, where: str) -> Family:
    check_keys(obj, {"class", "var", "lo", "hi"}, where, ("class",))
    spec = obj["class"]
    check_keys(spec, (S.curves.keys() | {CANONICAL_NAME}) if S is not None else spec.keys(), f"{where}.class")
    coords = {c: poly(v, f"{where}.class.{c}") for c, v in spec.items()}
    var = obj.get("var", "u")
    bad = sorted({x for p in coords.values() for x in p.variables()} - {var})
    if bad:
        raise _err(where, f"coordinates use variables {bad} besides {var}")
    hi = obj.get("hi")
    return Family(coords, var, scalar(obj.get("lo", 0), f"{where}.lo"), None if hi is None else scalar(hi, f"{where}.hi"))


def family_class(S: SurfaceLattice, fam: Family):
    out = S.zero()
    for c, p in fam.coords.items():
        out = out + (S.K if c == CANONICAL_NAME else S.curve(c)) * p
    return out


def dump_family(fam: Family) -> dict:
    out = {"class": {c: render(p) for c, p in fam.coords.items()}, "var": fam.var, "lo": render(fam.lo)}
    out["hi"] = None if fam.hi is None else render(fam.hi)
    return out


# ---------------------------------------------------------------------------
# graph, projection, computations


def parse_graph(obj, where: str = "dual_graph") -> DualGraph:
    check_keys(obj, {"vertices", "edges", "rank"}, where, ("vertices", "edges"))
    verts = obj["vertices"]
    check_keys(verts, verts.keys() if isinstance(verts, Mapping) else (), f"{where}.vertices")
    vertices = {v: scalar(k, f"{where}.vertices.{v}") for v, k in verts.items()}
    edges = set()
    for e in obj["edges"]:
        if not isinstance(e, list) or len(e) != 2 or e[0] == e[1] or any(x not in vertices for x in e):
            raise _err(f"{where}.edges", f"bad edge {e!r}")
        edges.add(tuple(sorted(e)))
    rank = obj.get("rank")
    if rank is not None and (not isinstance(rank, int) or isinstance(rank, bool)):
        raise _err(f"{where}.rank", "expected an integer")
    return DualGraph(vertices, tuple(sorted(edges)), rank)


def dump_graph(g: DualGraph) -> dict:
    out = {"vertices": {v: int(k) if k.denominator == 1 else render(k) for v, k in g.vertices.items()}, "edges": [list(e) for e in g.edges]}
    if g.rank is not None:
        out["rank"] = g.rank
    return out


def parse_projection(obj, S: SurfaceLattice | None, where: str = "projection") -> Projection:
    check_keys(obj, {"onto", "pullback"}, where, ("onto", "pullback"))
    pull = obj["pullback"]
    check_keys(pull, pull.keys() if isinstance(pull, Mapping) else (), f"{where}.pullback")
    out = {}
    for down, spec in pull.items():
        check_keys(spec, S.curves.keys() if S is not None else spec.keys(), f"{where}.pullback.{down}")
        out[down] = {c: scalar(v, f"{where}.pullback.{down}") for c, v in spec.items()}
    return Projection(obj["onto"], out)


def dump_projection(p: Projection) -> dict:
    return {"onto": p.onto, "pullback": {d: {c: render(v) for c, v in m.items()} for d, m in p.pullback.items()}}


def parse_compute(obj, where: str) -> Computation:
    check_keys(obj, {"id", "op", "args"}, where, ("id", "op"))
    if not isinstance(obj["id"], str) or not isinstance(obj["op"], str):
        raise _err(where, "id and op must be strings")
    args = obj.get("args", {})
    check_keys(args, args.keys() if isinstance(args, Mapping) else (), f"{where}.args")
    return Computation(obj["id"], obj["op"], dict(args))


def parse_expect(obj, where: str) -> Expectation:
    check_keys(obj, {"compute", "field", "relation", "value", "provenance", "note"}, where, ("compute", "value", "provenance"))
    rel = obj.get("relation", "=")
    if rel not in RELATIONS:
        raise _err(where, f"relation must be one of {RELATIONS}")
    prov = obj["provenance"]
    if prov not in PROVENANCE:
        raise _err(where, f"provenance must be one of {PROVENANCE}")
    return Expectation(obj["compute"], obj.get("field", "value"), rel, obj["value"], prov, obj.get("note", ""))


def dump_expect(e: Expectation) -> dict:
    out = {"compute": e.compute, "field": e.field, "relation": e.relation, "value": e.value, "provenance": e.provenance}
    if e.note:
        out["note"] = e.note
    return out


# ---------------------------------------------------------------------------
# whole documents


def parse_fixture(obj, source: str = "", resolver=None) -> Fixture:
    """Build a :class:`Fixture` from decoded JSON.

    ``lattice`` and ``threefold`` may name another fixture instead of carrying
    the data; ``resolver(id)`` fetches it (the bundled set by default).
    """
    where = source or "scenario"
    check_keys(obj, TOP_KEYS, "", ("id",))
    resolver = resolver or _bundled
    try:
        fid = obj["id"]
        if not isinstance(fid, str) or not fid:
            raise _err("id", "expected a non-empty string")
        f = Fixture(fid, obj.get("description", ""), source=source)
        lat = obj.get("lattice")
        if isinstance(lat, str):
            f.lattice_ref = lat
            f.lattice = resolver(lat).lattice
            if f.lattice is None:
                raise _err("lattice", f"fixture {lat!r} has no surface lattice")
        elif lat is not None:
            f.lattice = parse_surface(lat)
        tf = obj.get("threefold")
        threefold_data = None
        if isinstance(tf, str):
            f.threefold_ref = tf
            threefold_data = resolver(tf).threefold_data
            if threefold_data is None:
                raise _err("threefold", f"fixture {tf!r} has no threefold")
        elif tf is not None:
            threefold_data = parse_threefold(tf)
        f.threefold_data = threefold_data
        f.threefold = threefold_data.lattice if threefold_data else None
        setups = obj.get("setups") or {}
        if setups and f.threefold is None:
            raise _err("setups", "ledgers need a threefold")
        check_keys(setups, setups.keys(), "setups")
        f.setups = {k: parse_setup(v, f.threefold, f.lattice, k, f"setups.{k}") for k, v in setups.items()}
        pts = obj.get("points") or {}
        check_keys(pts, pts.keys(), "points")
        f.points = {k: parse_point(v, f.lattice, k, f"points.{k}") for k, v in pts.items()}
        fams = obj.get("families") or {}
        check_keys(fams, fams.keys(), "families")
        f.families = {k: parse_family(v, f.lattice, f"families.{k}") for k, v in fams.items()}
        if obj.get("dual_graph") is not None:
            f.dual_graph = parse_graph(obj["dual_graph"])
        if obj.get("projection") is not None:
            f.projection = parse_projection(obj["projection"], f.lattice)
        comps = obj.get("compute") or []
        f.compute = tuple(parse_compute(c, f"compute[{i}]") for i, c in enumerate(comps))
        ids = [c.id for c in f.compute]
        dup = sorted({i for i in ids if ids.count(i) > 1})
        if dup:
            raise _err("compute", f"duplicate ids {dup}")
        f.expect = tuple(parse_expect(e, f"expect[{i}]") for i, e in enumerate(obj.get("expect") or []))
    except ScenarioError as exc:
        raise ScenarioError(str(exc), where) from exc
    return f


def dump_fixture(f: Fixture) -> dict:
    out = {"id": f.id}
    if f.description:
        out["description"] = f.description
    if f.lattice_ref:
        out["lattice"] = f.lattice_ref
    elif f.lattice is not None:
        out["lattice"] = dump_surface(f.lattice)
    if f.threefold_ref:
        out["threefold"] = f.threefold_ref
    elif getattr(f, "threefold_data", None) is not None:
        out["threefold"] = dump_threefold(f.threefold_data)
    if f.setups:
        out["setups"] = {k: dump_setup(v) for k, v in f.setups.items()}
    if f.points:
        out["points"] = {k: dump_point(v) for k, v in f.points.items()}
    if f.families:
        out["families"] = {k: dump_family(v) for k, v in f.families.items()}
    if f.dual_graph is not None:
        out["dual_graph"] = dump_graph(f.dual_graph)
    if f.projection is not None:
        out["projection"] = dump_projection(f.projection)
    if f.compute:
        out["compute"] = [{"id": c.id, "op": c.op, "args": c.args} for c in f.compute]
    if f.expect:
        out["expect"] = [dump_expect(e) for e in f.expect]
    return out


def dumps_fixture(f: Fixture) -> str:
    return json.dumps(dump_fixture(f), indent=1, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# the bundled set

DATA = Path(__file__).with_name("data")
_cache: dict = {}


def list_fixtures() -> list[str]:
    """Ids of the bundled fixtures, sorted."""
    return sorted(json.loads(p.read_text())["id"] for p in DATA.glob("*.json"))


def _path_for(fid: str) -> Path:
    key = fid.lower()
    for p in sorted(DATA.glob("*.json")):
        if p.stem.lower() == key:
            return p
    raise ScenarioError(f"unknown fixture {fid!r}; available: {', '.join(list_fixtures())}")


def _bundled(fid: str) -> Fixture:
    key = fid.lower()
    if key not in _cache:
        _cache[key] = None  # guards against reference cycles
        p = _path_for(key)
        _cache[key] = parse_fixture(json.loads(p.read_text()), str(p.name))
    if _cache[key] is None:
        raise ScenarioError(f"fixture {fid!r} refers to itself")
    return _cache[key]


def load_fixture(ref: str) -> Fixture:
    """A bundled fixture by id (case-insensitive) or a scenario file by path."""
    p = Path(ref)
    if p.suffix == ".json" or p.exists():
        if not p.exists():
            raise ScenarioError(f"no such scenario file {ref!r}")
        try:
            obj = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"invalid JSON: {exc}", ref) from exc
        return parse_fixture(obj, ref)
    return _bundled(ref)
