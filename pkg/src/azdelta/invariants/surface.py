"""Flag bounds for local delta invariants of a polarized surface.

For a curve ``C`` on a surface with polarization ``L`` and a point ``O`` on
``C`` the two invariants are::

    S_L(C)   = (1/L^2) int vol(L - uC) du
    S(W^C;O) = (2/L^2) int (P(u).C) ord_O(N(u)|_C) du + (1/L^2) int (P(u).C)^2 du

and ``delta_O >= min(A(C)/S_L(C), 1/S(W^C;O))``.  The polarization may depend
polynomially on one parameter, in which case every result is a piecewise
rational function of it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import LatticeError
from ..exact import PiecewiseFn, Poly, RationalFn, Scalar, pointwise_min, sample_point
from ..lattice import SurfaceLattice, nef_pairings
from ..lattice.blowup import plane_blowup
from ..zariski import ChamberComplex, two_param_chambers
from .flags import FlagSpec, incidence_of


@dataclass(frozen=True)
class SurfaceFlagResult:
    """Invariants of one curve; ``points`` maps a label to ``S(W^C;O)``.

    Values are scalars for a fixed polarization and :class:`PiecewiseFn` of
    the parameter otherwise.
    """

    curve: str
    s_curve: object
    points: dict
    worst: object
    bound: object
    complex: ChamberComplex = field(repr=False, compare=False)
    log_discrepancy: Fraction = Fraction(1)


def auto_points(L: SurfaceLattice, curve: str) -> dict:
    """A general point of ``curve`` and one point on each negative curve meeting it."""
    C = L.curve(curve)
    pts = {"general": FlagSpec(curve, {}, frozenset())}
    for c in L.neg_curves:
        if c == curve:
            continue
        if L.pair(C, L.curve(c)).constant_value() > 0:
            pts[f"on {c}"] = FlagSpec(curve, {}, frozenset({c}))
    return pts


def _check_polarization(L, pol, var, lo, hi):
    xs = [lo] if hi == lo else [lo, sample_point(lo, hi), hi if hi is not None else lo + 10]
    for x in xs:
        D = pol.subs({var: x})
        bad = [c for c, v in nef_pairings(L, D).items() if v.constant_value() < 0]
        if bad:
            raise LatticeError(f"polarization is not nef at {var}={x}: negative on {bad}")
        if L.pair(D, D).constant_value() <= 0:
            raise LatticeError(f"polarization is not big at {var}={x}")


def _piecewise(spans, L2: Poly, var: str, weight: Scalar = 1):
    """Spans ``[(a, b, F)]`` of inner integrals to ``weight * F / L^2``."""
    if len(spans) == 1 and spans[0][0] == spans[0][1]:
        return weight * spans[0][2].constant_value() / L2.constant_value()
    bps = [spans[0][0]] + [b for _, b, _ in spans]
    pieces = tuple(RationalFn(F * weight, L2, var) for _, _, F in spans)
    return PiecewiseFn(var, tuple(bps), pieces).simplified()


def _neg(f):
    if isinstance(f, PiecewiseFn):
        return f.map(lambda p: -p)
    return -f


def _recip(f, A: Scalar = 1):
    if isinstance(f, PiecewiseFn):
        return f.map(lambda p: RationalFn.coerce(p, f.var).reciprocal() * A)
    return A / f


def _min(fs):
    if isinstance(fs[0], PiecewiseFn):
        return pointwise_min(fs)
    return min(fs)


def _max(fs):
    return _neg(_min([_neg(f) for f in fs]))


def flag_delta_surface(
    L: SurfaceLattice,
    polarization,
    curve: str,
    points: dict | None = None,
    var: str = "t",
    lo=Fraction(0),
    hi=Fraction(0),
    log_discrepancy: Scalar = Fraction(1),
) -> SurfaceFlagResult:
    """``S_L(C)``, ``S(W^C;O)`` for the given points and the resulting bound.

    ``points`` maps labels to :class:`FlagSpec`; by default it is
    :func:`auto_points`.  For a polarization depending on ``var`` the
    parameter runs over ``[lo, hi]`` (``hi=None`` for an unbounded range).
    """
    pol = L.cls(polarization)
    if pol.variables() - {var}:
        raise ValueError(f"polarization depends on variables other than {var}")
    if not pol.variables():
        lo = hi = Fraction(0)
    _check_polarization(L, pol, var, lo, hi)
    points = auto_points(L, curve) if points is None else dict(points)
    inner = "u" if var != "u" else "v"
    cx = two_param_chambers(L, [(lo, hi, pol)], curve, var, inner)
    L2 = L.pair(pol, pol)
    s_curve = _piecewise(cx.integrate_inner(lambda cell: cell.volume), L2, var)

    def point_integrand(flag):
        def integrand(cell):
            g = cell.pairing(curve)
            order = Poly()
            for c, a in cell.negative.items():
                if c != curve:
                    inc = incidence_of(flag, c)
                    if inc:
                        order = order + a * inc
            return g * g + g * order * 2
        return integrand

    values = {k: _piecewise(cx.integrate_inner(point_integrand(f)), L2, var) for k, f in points.items()}
    worst = _max(list(values.values()))
    A = Fraction(log_discrepancy) if isinstance(log_discrepancy, int) else log_discrepancy
    bound = _min([_recip(s_curve, A), _recip(worst)])
    return SurfaceFlagResult(curve, s_curve, values, worst, bound, cx, A)


# ---------------------------------------------------------------------------
# quartic del Pezzo surfaces polarized by -K + tC


@dataclass(frozen=True)
class ConicBound:
    kind: str
    bound: PiecewiseFn
    cases: dict  # label -> SurfaceFlagResult


def dp4_conic_bound(conic_kind: str = "smooth", lo=Fraction(0), hi=None) -> ConicBound:
    """Lower bound for ``delta_P(S, -K_S + tC)`` with ``C`` a conic through ``P``.

    The quartic surface is the plane blown up in five points.  For a smooth
    conic ``C ~ h - e1`` two cases are combined: ``P`` off every line (flag
    through the exceptional curve of the blow-up of ``P``, a cubic surface,
    with ``A = 2``) and ``P`` on the line ``e1``.  For a reducible conic
    ``C = e1 + B`` the flag curve is the component ``e1`` through ``P``.
    """
    t = Poly.var("t")
    dp4 = plane_blowup(5, "dP4")
    mK = dp4.anticanonical
    cases: dict = {}
    if conic_kind == "smooth":
        cubic = plane_blowup(6, "cubic")
        pol = cubic.anticanonical + cubic.curve("e6") + cubic.cls({"h": t, "e1": -t})
        cases["off lines"] = flag_delta_surface(cubic, pol, "e6", None, "t", lo, hi, 2)
        pts = {
            "on B": FlagSpec("e1", {}, frozenset({"B"})),
            "off B": FlagSpec("e1", {}, frozenset()),
        }
        pol = mK + dp4.cls({"h": t, "e1": -t})
        cases["on a line"] = flag_delta_surface(dp4, pol, "e1", pts, "t", lo, hi)
    elif conic_kind == "reducible":
        pol = mK + (dp4.curve("e1") + dp4.curve("B")) * t
        cases["component"] = flag_delta_surface(dp4, pol, "e1", None, "t", lo, hi)
    else:
        raise ValueError(f"conic kind must be 'smooth' or 'reducible', not {conic_kind!r}")
    bound = pointwise_min([r.bound for r in cases.values()])
    return ConicBound(conic_kind, bound, cases)
