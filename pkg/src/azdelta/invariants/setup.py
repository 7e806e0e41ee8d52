"""Threefold Zariski ledgers, restriction to a surface, and their checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import LedgerError, LatticeError
from ..exact import Poly, is_nonnegative_on
from ..lattice import DivClass, SurfaceLattice, ThreefoldLattice, is_pseff, pseff_threshold


@dataclass(frozen=True)
class LedgerPiece:
    """On ``[lo, hi]``: ``-K - u*S = positive + sum negative[E] * E``."""

    lo: Fraction
    hi: Fraction
    positive: DivClass
    negative: dict = field(default_factory=dict)  # threefold class name -> Poly in u


@dataclass(eq=False)
class ThreefoldSetup:
    threefold: ThreefoldLattice
    divisor: DivClass  # the surface S as a class on the threefold
    tau: Fraction
    pieces: tuple
    surface: SurfaceLattice | None = None
    restriction: dict = field(default_factory=dict)  # basis name -> surface coordinates
    cycles: dict = field(default_factory=dict)  # E_j -> {surface curve: multiplicity}
    var: str = "u"
    name: str = ""

    def restrict(self, D: DivClass) -> DivClass:
        """Numerical restriction of a threefold class to the surface."""
        if self.surface is None:
            raise LatticeError("setup has no surface lattice")
        D = self.threefold.cls(D)
        n = len(self.surface.basis)
        total = [Poly() for _ in range(n)]
        for name, c in zip(self.threefold.basis, D.coords):
            if c.is_zero():
                continue
            if name not in self.restriction:
                raise LatticeError(f"no restriction given for {name}")
            row = self.restriction[name]
            for k in range(n):
                if row[k]:
                    total[k] = total[k] + c * row[k]
        return DivClass(self.surface, total)

    def volume(self) -> Fraction:
        return self.threefold.cube(self.threefold.anticanonical).constant_value()

    def family(self) -> list[tuple]:
        """``(lo, hi, P(u)|_S)`` for every ledger piece."""
        return [(p.lo, p.hi, self.restrict(p.positive)) for p in self.pieces]

    def piece_at(self, u) -> LedgerPiece:
        for p in self.pieces:
            if p.lo <= u <= p.hi:
                return p
        raise ValueError(f"{u} outside [0, {self.tau}]")

    def negative_class(self, piece: LedgerPiece) -> DivClass:
        X = self.threefold
        out = X.cls([0] * len(X.basis))
        for name, f in piece.negative.items():
            out = out + X.named(name) * f
        return out


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class LedgerReport:
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]


def _samples(lo, hi, k: int = 7) -> list[Fraction]:
    return [lo + (hi - lo) * Fraction(i, k - 1) for i in range(k)]


def verify_threefold_ledger(setup: ThreefoldSetup, strict: bool = True) -> LedgerReport:
    """Check the ledger identity, nefness, the threshold and the restriction.

    With ``strict`` the first failing check raises :class:`LedgerError`.
    """
    X = setup.threefold
    u = setup.var
    checks: list[Check] = []

    def add(name, ok, detail=""):
        checks.append(Check(name, bool(ok), detail))
        if strict and not ok:
            raise LedgerError(f"{setup.name or X.name}: {name} failed: {detail}", name, detail)

    S = setup.divisor
    mK = X.anticanonical
    # pieces tile [0, tau]
    pieces = setup.pieces
    tiled = pieces and pieces[0].lo == 0 and pieces[-1].hi == setup.tau
    tiled = tiled and all(a.hi == b.lo for a, b in zip(pieces, pieces[1:]))
    add("coverage", tiled, f"pieces must tile [0, {setup.tau}]")
    try:
        tau = pseff_threshold(X, mK, S)
        add("threshold", tau == setup.tau, f"computed {tau}, declared {setup.tau}")
    except Exception as exc:  # LP trouble is itself a failed check
        add("threshold", False, str(exc))
    uvar = Poly.var(u)
    for idx, p in enumerate(pieces):
        residual = mK - S * uvar - p.positive - setup.negative_class(p)
        bad = [str(c) for c in residual.coords if not c.is_zero()]
        where = ""
        if bad:
            mid = (p.lo + p.hi) / 2
            vals = [c.evaluate({u: mid}) for c in residual.coords]
            where = f" residual at {u}={mid}: {[str(v) for v in vals]}"
        add(f"identity[{idx}]", not bad, where.strip())
        for name, f in p.negative.items():
            add(f"negative[{idx}].{name}", is_nonnegative_on(f, p.lo, p.hi, u) if f.variables() else f.constant_value() >= 0, str(f))
        for r in range(len(X.mori)):
            g = X.curve_pairing(p.positive, r)
            ok = is_nonnegative_on(g, p.lo, p.hi, u) if g.variables() else g.constant_value() >= 0
            ok = ok and all(g.evaluate({u: x}) >= 0 for x in _samples(p.lo, p.hi))
            add(f"nef[{idx}].ray{r}", ok, str(g))
        for x in (p.lo, p.hi):
            if not is_pseff(X, (mK - S * uvar).subs({u: x})):
                add(f"pseff[{idx}]", False, f"-K-{x}S")
        # the positive part is orthogonal to the surfaces it drops, in the sense P^2.E = 0
        for name in p.negative:
            E = X.named(name)
            v = X.triple(p.positive, p.positive, E)
            add(f"orthogonal[{idx}].{name}", v.is_zero(), f"P^2.{name} = {v}")
    for a, b in zip(pieces, pieces[1:]):
        pa = a.positive.subs({u: a.hi})
        pb = b.positive.subs({u: b.lo})
        add(f"continuity@{a.hi}", pa == pb, f"{pa} vs {pb}")
    if setup.surface is not None:
        Sf = setup.surface
        n = len(X.basis)
        bad = []
        for i in range(n):
            for j in range(i, n):
                Hi, Hj = X.named(X.basis[i]), X.named(X.basis[j])
                lhs = X.triple(Hi, Hj, S).constant_value()
                rhs = Sf.pair(setup.restrict(Hi), setup.restrict(Hj)).constant_value()
                if lhs != rhs:
                    bad.append(f"{X.basis[i]}.{X.basis[j]}.S={lhs} but restricted pairing {rhs}")
        add("restriction", not bad, "; ".join(bad))
        adj = setup.restrict(mK - S)
        add("adjunction", Sf.numerically_equal(adj, Sf.anticanonical), f"(-K_X-S)|_S = {adj}")
        for name, cyc in setup.cycles.items():
            cls = Sf.cls(cyc)
            ok = Sf.numerically_equal(cls, setup.restrict(X.named(name)))
            add(f"cycle.{name}", ok, f"{cls} vs {setup.restrict(X.named(name))}")
    return LedgerReport(tuple(checks))
