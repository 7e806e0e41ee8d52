"""Consistency checks for a parsed fixture."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import AzdeltaError
from ..invariants import Check, verify_threefold_ledger
from ..lattice import inertia, rank_pivots
from .run import OPS
from .schema import Fixture, load_fixture


@dataclass(frozen=True)
class ValidationReport:
    fixture: str
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]


def _graph_checks(f: Fixture, add) -> None:
    g, L = f.dual_graph, f.lattice
    if L is None:
        add("graph.lattice", False, "a dual graph needs a lattice")
        return
    missing = [v for v in g.vertices if v not in L.curves]
    add("graph.vertices", not missing, f"not curves of the lattice: {missing}")
    if missing:
        return
    names = sorted(g.vertices)
    bad = []
    for v in names:
        self_int = L.pair(L.curve(v), L.curve(v)).constant_value()
        if self_int != g.vertices[v]:
            bad.append(f"{v}^2 = {self_int}, vertex kind {g.vertices[v]}")
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            p = L.pair(L.curve(a), L.curve(b)).constant_value()
            want = 1 if (a, b) in g.edges else 0
            if p != want:
                bad.append(f"{a}.{b} = {p} but the graph says {want}")
    add("graph.pairings", not bad, "; ".join(bad))
    neg = set(L.neg_curves)
    add("graph.negative curves", neg == set(names), f"graph {names} vs negative curves {sorted(neg)}")
    if g.rank is not None:
        G = [[L.pair(L.curve(a), L.curve(b)).constant_value() for b in names] for a in names]
        r = len(rank_pivots(G))
        pos, negs, _ = inertia(G)
        add("graph.rank", r == g.rank, f"rank {r}, declared {g.rank}")
        add("graph.signature", (pos, negs) == (1, g.rank - 1), f"signature ({pos}, {negs})")


def _projection_checks(f: Fixture, add) -> None:
    p, L = f.projection, f.lattice
    try:
        D = load_fixture(p.onto).lattice
    except AzdeltaError as exc:
        add("projection.target", False, str(exc))
        return
    missing = [b for b in D.basis if b not in p.pullback]
    add("projection.coverage", not missing, f"no pullback for {missing}")
    if missing:
        return
    pull = {b: L.cls(p.pullback[b]) for b in D.basis}
    bad = []
    for i, a in enumerate(D.basis):
        for j, b in enumerate(D.basis):
            up = L.pair(pull[a], pull[b]).constant_value()
            if up != D.gram[i][j]:
                bad.append(f"{a}.{b}: {D.gram[i][j]} below, {up} above")
    add("projection.pairings", not bad, "; ".join(bad))
    mK = L.zero()
    for b, c in zip(D.basis, D.anticanonical.coords):
        mK = mK + pull[b] * c
    add("projection.crepant", L.numerically_equal(mK, L.anticanonical), "pullback of -K is not -K")


def validate_fixture(f: Fixture) -> ValidationReport:
    """Run every structural check; failures are report entries, not exceptions."""
    checks: list[Check] = []

    def add(name, ok, detail=""):
        checks.append(Check(name, bool(ok), "" if ok else detail))

    L = f.lattice
    if L is not None and f.lattice_ref is None:
        n = len(L.basis)
        sym = all(L.gram[i][j] == L.gram[j][i] for i in range(n) for j in range(n))
        add("lattice.symmetric", sym, "Gram matrix is not symmetric")
        issues = L.validate()
        add("lattice.consistent", not issues, "; ".join(issues))
        if L.degree is not None:
            K2 = L.pair(L.K, L.K).constant_value()
            add("lattice.degree", K2 == L.degree, f"K^2 = {K2}, declared {L.degree}")
        notneg = [c for c in L.neg_curves if L.pair(L.curve(c), L.curve(c)).constant_value() >= 0]
        add("lattice.negative curves", not notneg, f"non-negative self-intersection: {notneg}")
        for label, lhs, rhs in L.relations:
            add(f"lattice.relation {label}", L.numerically_equal(L.cls(lhs), L.cls(rhs)), "classes differ numerically")
    data = f.threefold_data
    if data is not None and f.threefold_ref is None:
        X = data.lattice
        issues = X.validate()
        add("threefold.consistent", not issues, "; ".join(issues))
        for label, lhs, rhs in data.relations:
            add(f"threefold.relation {label}", tuple(lhs) == tuple(rhs), f"{lhs} vs {rhs}")
    for name, st in f.setups.items():
        try:
            rep = verify_threefold_ledger(st, strict=False)
            bad = rep.failures()
            add(f"setup {name}", not bad, "; ".join(f"{c.name}: {c.detail}" for c in bad))
        except AzdeltaError as exc:
            add(f"setup {name}", False, str(exc))
    for name, pt in f.points.items():
        ok = L is not None and pt.curve in L.curves
        add(f"point {name}", ok, f"curve {pt.curve!r} is not on the lattice")
    if f.dual_graph is not None:
        _graph_checks(f, add)
    if f.projection is not None:
        _projection_checks(f, add)
    ids = {c.id for c in f.compute}
    unknown = sorted({c.op for c in f.compute} - set(OPS))
    add("compute.ops", not unknown, f"unknown operations {unknown}")
    dangling = sorted({e.compute for e in f.expect} - ids)
    add("expect.references", not dangling, f"expectations for undefined computations {dangling}")
    if f.threefold is not None and f.threefold.degree is not None:
        v = f.threefold.cube(f.threefold.anticanonical).constant_value()
        add("threefold.degree", v == f.threefold.degree, f"(-K)^3 = {v}")
    return ValidationReport(f.id, tuple(checks))
