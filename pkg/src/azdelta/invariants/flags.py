"""Flag invariants for a surface inside a threefold, and their combination."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import MissingIncidenceError
from ..exact import Poly, Scalar, integrate_poly, sample_point
from ..zariski import ChamberComplex, two_param_chambers
from .setup import ThreefoldSetup


@dataclass(frozen=True)
class FlagSpec:
    """A point on a curve on the surface.

    ``incidence[c]`` is the local intersection number of ``c`` with the flag
    curve at the point.  A curve missing from the map counts as transversal
    (1) if it is listed in ``lies_on`` and as 0 if it is not; without
    ``lies_on`` a missing curve is an error.  With ``upper`` the numbers are
    only upper bounds and so is every result.
    """

    curve: str
    incidence: dict = field(default_factory=dict)
    lies_on: frozenset | None = None
    upper: bool = False
    log_discrepancy: Fraction = Fraction(1)
    label: str = ""


@dataclass(frozen=True)
class FlagValue:
    value: Scalar
    relation: str = "="  # "=" exact, "<=" upper bound


@dataclass(frozen=True)
class PointValue:
    base: Scalar
    f_p: Scalar
    relation: str = "="

    @property
    def total(self) -> Scalar:
        return self.base + self.f_p


@dataclass(frozen=True)
class AZBound:
    """``min`` of the three reciprocals, with the equality-case diagnosis."""

    s_x: Scalar
    s_curve: Scalar
    s_point: Scalar
    value: Scalar
    attained_by: tuple
    boundary: bool  # the minimum equals 1/S_X(S)
    strict: bool  # the bound certifies delta_P(X) > 1
    two_term: Scalar  # min(1/S_X, delta_P(S; W)) with delta_P(S; W) from the flag
    relation: str = ">="


def s_threefold_divisor(setup: ThreefoldSetup) -> Scalar:
    """``S_X(S) = (1/V) int_0^tau P(u)^3 du`` from the ledger."""
    X = setup.threefold
    total: Scalar = Fraction(0)
    for p in setup.pieces:
        total = total + integrate_poly(X.cube(p.positive), p.lo, p.hi, setup.var)
    return total / setup.volume()


@functools.lru_cache(maxsize=64)
def _flag_chambers(setup: ThreefoldSetup, curve: str) -> ChamberComplex:
    return two_param_chambers(setup.surface, setup.family(), curve, setup.var, "v")


def flag_chambers(setup: ThreefoldSetup, flag: FlagSpec | str) -> ChamberComplex:
    curve = flag.curve if isinstance(flag, FlagSpec) else flag
    return _flag_chambers(setup, curve)


def _order_on_curve(setup: ThreefoldSetup, piece, curve: str) -> Poly:
    """``ord_C(N(u)|_S)`` on one ledger piece."""
    acc = Poly()
    for name, f in piece.negative.items():
        if name not in setup.cycles and not f.is_zero():
            raise MissingIncidenceError(f"restriction of {name} to the surface is not described")
        m = setup.cycles.get(name, {}).get(curve, 0)
        if m:
            acc = acc + f * Fraction(m)
    return acc


def incidence_of(flag: FlagSpec, curve: str) -> Fraction:
    if curve in flag.incidence:
        return Fraction(flag.incidence[curve])
    if flag.lies_on is not None:
        return Fraction(int(curve in flag.lies_on))
    raise MissingIncidenceError(f"no incidence given for {curve} at the flag point on {flag.curve}")


def _restricted_order_at_point(setup: ThreefoldSetup, piece, flag: FlagSpec) -> Poly:
    """``ord_P(N'_S(u)|_C)`` on one ledger piece."""
    acc = Poly()
    for name, f in piece.negative.items():
        for comp, m in setup.cycles.get(name, {}).items():
            if comp == flag.curve or not m:
                continue
            inc = incidence_of(flag, comp)
            if inc:
                acc = acc + f * (Fraction(m) * inc)
        if name not in setup.cycles and not f.is_zero():
            raise MissingIncidenceError(f"restriction of {name} to the surface is not described")
    return acc


def s_w_curve(setup: ThreefoldSetup, flag: FlagSpec | str) -> FlagValue:
    curve = flag.curve if isinstance(flag, FlagSpec) else flag
    V = setup.volume()
    Sf = setup.surface
    total: Scalar = Fraction(0)
    for p in setup.pieces:
        ordC = _order_on_curve(setup, p, curve)
        if not ordC.is_zero():
            PS = setup.restrict(p.positive)
            total = total + integrate_poly(Sf.pair(PS, PS) * ordC, p.lo, p.hi, setup.var)
    cx = flag_chambers(setup, curve)
    total = total + cx.integrate(lambda cell: cell.volume)
    return FlagValue(3 * total / V)


def s_w_point(setup: ThreefoldSetup, flag: FlagSpec) -> PointValue:
    V = setup.volume()
    cx = flag_chambers(setup, flag)
    base = cx.integrate(lambda cell: cell.pairing(flag.curve) ** 2)

    def fp_integrand(cell):
        piece = setup.piece_at(sample_point(cell.lo, cell.hi))
        order = _restricted_order_at_point(setup, piece, flag)
        for c, a in cell.negative.items():
            if c == flag.curve:
                continue
            inc = incidence_of(flag, c)
            if inc:
                order = order + a * inc
        return cell.pairing(flag.curve) * order

    fp = cx.integrate(fp_integrand)
    return PointValue(3 * base / V, 6 * fp / V, "<=" if flag.upper else "=")


def az_min(s_x: Scalar, s_curve: Scalar, s_point: Scalar, log_discrepancy: Scalar = 1) -> AZBound:
    """``min(1/S_X, A/S(W;C), 1/S(W;P))`` from already computed invariants."""
    terms = {"S_X": s_x, "curve": s_curve, "point": s_point}
    for k, v in terms.items():
        if v <= 0:
            raise ValueError(f"{k} invariant must be positive, got {v}")
    recip = {"S_X": 1 / s_x, "curve": log_discrepancy / s_curve, "point": 1 / s_point}
    value = min(recip.values())
    attained = tuple(k for k, v in recip.items() if v == value)
    surface_term = min(recip["curve"], recip["point"])
    return AZBound(
        s_x,
        s_curve,
        s_point,
        value,
        attained,
        "S_X" in attained,
        value > 1,
        min(recip["S_X"], surface_term),
    )


def az_combine(setup: ThreefoldSetup, flag: FlagSpec, s_x: Scalar | None = None) -> AZBound:
    s_x = s_threefold_divisor(setup) if s_x is None else s_x
    curve = s_w_curve(setup, flag).value
    point = s_w_point(setup, flag)
    return az_min(s_x, curve, point.total, flag.log_discrepancy)
