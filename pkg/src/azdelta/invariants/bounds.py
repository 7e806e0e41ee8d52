"""Upper bounds for ``S(W^S;F)/A_S(F)`` that hold for every divisor ``F`` over ``S``.

Two mechanisms are provided.  :func:`nemuro_bound` splits the invariant into
the negative-part term, controlled by log canonical thresholds, and the
volume term, controlled by a known ``delta_P(S)`` after dominating the
restricted positive part by a multiple of ``-K_S``.  :func:`polarized_tail`
bounds the volume term by ``scale^3 * L^2 / delta_P(S, L)`` for a varying
polarization ``L = L(t(u))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import AzdeltaError
from ..exact import (
    Enclosure,
    PiecewiseFn,
    Poly,
    RationalFn,
    Scalar,
    integrate_numeric,
    integrate_poly,
    sample_point,
)
from ..exact import univariate as U
from ..lattice import is_pseff
from .setup import ThreefoldSetup

DELTA = "delta"


@dataclass(frozen=True)
class NemuroBound:
    """``S(W^S;F) <= coefficient * A_S(F)``.

    ``vol_weight`` is the multiple of ``1/delta_P(S)`` in the volume term, so
    ``coefficient = negative_term + vol_weight/delta``.  With a symbolic
    ``delta`` the coefficient and the lower bound for ``delta_P(S; W^S)`` are
    rational functions of ``delta``.
    """

    shape: str
    negative_term: Scalar
    vol_weight: Scalar
    coefficient: object
    lower_bound: object
    dominated: bool
    domination_failures: tuple = ()


def _const(p) -> Scalar:
    p = Poly.coerce(p)
    return p.constant_value()


def _shape(setup: ThreefoldSetup) -> str:
    names = {n for p in setup.pieces for n, f in p.negative.items() if not f.is_zero()}
    if not names:
        return "no negative part"
    if len(names) == 1:
        (name,) = names
        zero_then_linear = True
        started = False
        for p in setup.pieces:
            f = p.negative.get(name, Poly())
            if f.is_zero():
                zero_then_linear = zero_then_linear and not started
            else:
                started = True
                zero_then_linear = zero_then_linear and f.degree(setup.var) == 1
        if zero_then_linear:
            return "single delayed linear"
    return "general"


def nemuro_bound(
    setup: ThreefoldSetup,
    lct: dict | None = None,
    delta: Scalar | None = None,
    domination: list | None = None,
) -> NemuroBound:
    """Bound ``S(W^S;F)`` through log canonical thresholds and ``delta_P(S)``.

    ``lct`` maps each surface in the negative part to ``c_j``.  ``domination``
    lists ``(lo, hi, lam)`` with ``lam(u)*(-K_S) - P(u)|_S`` pseudo-effective;
    the default ``lam = 1`` is right when ``S`` is a fibre.  The domination
    is checked at both ends and the middle of each piece; failures are
    reported, not raised.  ``delta=None`` keeps ``delta_P(S)`` symbolic.
    """
    lct = dict(lct or {})
    if delta is not None and delta <= 0:
        raise ValueError("delta_P(S) must be positive")
    u = setup.var
    V = setup.volume()
    Sf = setup.surface
    neg: Scalar = Fraction(0)
    for p in setup.pieces:
        PS = setup.restrict(p.positive)
        sq = Sf.pair(PS, PS)
        for name, f in p.negative.items():
            if f.is_zero():
                continue
            c = lct.get(name)
            if c is None:
                raise AzdeltaError(f"no log canonical threshold given for {name}")
            if c == 0:
                raise ValueError(f"log canonical threshold of {name} is zero")
            neg = neg + integrate_poly(f * sq * (1 / Fraction(c)), p.lo, p.hi, u)
    neg = 3 * neg / V
    if domination is None:
        domination = [(Fraction(0), setup.tau, Poly.const(1))]
    mK = Sf.anticanonical
    failures = []
    cube: Scalar = Fraction(0)
    for lo, hi, lam in domination:
        lam = Poly.coerce(lam)
        cube = cube + integrate_poly(lam**3, lo, hi, u)
        for x in (lo, (lo + hi) / 2, hi):
            piece = setup.piece_at(x)
            PS = setup.restrict(piece.positive).subs({u: x})
            lx = lam.evaluate({u: x}) if lam.variables() else lam.constant_value()
            if not is_pseff(Sf, mK * lx - PS):
                failures.append(f"{u}={x}")
    covered = sum((hi - lo for lo, hi, _ in domination), Fraction(0))
    if covered != setup.tau:
        failures.append(f"domination covers length {covered}, not {setup.tau}")
    KS2 = _const(Sf.pair(mK, mK))
    weight = 3 * KS2 * cube / V
    if delta is None:
        d = Poly.var(DELTA)
        coefficient = RationalFn(d * neg + weight, d, DELTA)
        lower = coefficient.reciprocal()
    else:
        coefficient = neg + weight / delta
        lower = 1 / coefficient
    return NemuroBound(_shape(setup), neg, weight, coefficient, lower, not failures, tuple(failures))


def lemma34_combine(delta: Scalar, s_threefold: Scalar) -> Scalar:
    """``min(1/S_X(S), 2592 delta / (2560 + 63 delta))``."""
    if delta <= 0:
        raise ValueError("delta_P(S) must be positive")
    return min(1 / s_threefold, 2592 * delta / (2560 + 63 * delta))


# ---------------------------------------------------------------------------
# varying polarization


@dataclass(frozen=True)
class TailPiece:
    lo: Scalar
    hi: Scalar
    integrand: RationalFn
    exact: Scalar | None
    enclosure: Enclosure | None


@dataclass(frozen=True)
class TailResult:
    """``(3/V) int scale^3 L(t)^2 inv_delta(t) du`` split at the breakpoints."""

    pieces: tuple
    exact: Scalar | None
    enclosure: Enclosure | None


def _mobius_inverse(twist: RationalFn, value: Scalar) -> Scalar:
    n, d = twist.num.univariate_coeffs(twist.var), twist.den.univariate_coeffs(twist.var)
    if len(n) > 2 or len(d) > 2:
        raise ValueError("the twist must be a Moebius transformation")
    n = n + [Fraction(0)] * (2 - len(n))
    d = d + [Fraction(0)] * (2 - len(d))
    # (n0 + n1 u) = value (d0 + d1 u)
    slope = n[1] - value * d[1]
    if slope == 0:
        raise ValueError(f"twist never takes the value {value}")
    return (value * d[0] - n[0]) / slope


def _homogenize(f, p: Poly, q: Poly, var: str) -> tuple[Poly, Poly]:
    """``f(p/q)`` as an unreduced quotient of polynomials."""
    f = RationalFn.coerce(f, var)
    nc = f.num.univariate_coeffs(f.var) or [Fraction(0)]
    dc = f.den.univariate_coeffs(f.var)
    D = max(len(nc), len(dc)) - 1

    def hom(cs):
        acc = Poly()
        for k, c in enumerate(cs):
            if c:
                acc = acc + p**k * q ** (D - k) * c
        return acc

    return hom(nc), hom(dc)


def _clear_power(num: Poly, den: Poly, q: Poly, var: str) -> tuple[Poly, Poly]:
    """Cancel the common powers of ``q`` only, leaving any other common factor."""
    qc = q.univariate_coeffs(var)
    if len(qc) < 2:
        return num, den
    n, d = num.univariate_coeffs(var), den.univariate_coeffs(var)
    while True:
        n2, rn = U.divmod_(n, qc)
        d2, rd = U.divmod_(d, qc)
        if U.trim(rn) or U.trim(rd):
            return Poly.from_coeffs(n, var), Poly.from_coeffs(d, var)
        n, d = n2, d2


def polarized_tail(
    V: Scalar,
    lo: Scalar,
    hi: Scalar,
    twist: RationalFn,
    l_squared,
    inv_delta: PiecewiseFn,
    scale=1,
    var: str = "u",
    eps: Scalar | None = None,
) -> TailResult:
    """Integrate ``(3/V) scale(u)^3 L(t(u))^2 inv_delta(t(u))`` over ``[lo, hi]``.

    ``twist`` is ``t(u)``, a Moebius transformation; ``l_squared`` is a
    polynomial in the variable of ``inv_delta``.  Pieces whose integrand
    reduces to a polynomial are integrated exactly.  With ``eps`` every piece
    also gets a verified enclosure of the quotient with only the powers of the
    twist denominator cancelled, of total width
    at most ``eps``; ``exact`` is ``None`` as soon as one piece is not
    polynomial.
    """
    tv = inv_delta.var
    twist = RationalFn.coerce(twist, var)
    p, q = twist.num, twist.den
    scale = Poly.coerce(scale)
    cuts = {lo, hi}
    for b in inv_delta.breakpoints:
        if b is None:
            continue
        x = _mobius_inverse(twist, b)
        if lo < x < hi:
            cuts.add(x)
    pts = sorted(cuts)
    factor = Fraction(3) / V
    pieces = []
    n_pieces = len(pts) - 1
    for a, b in zip(pts, pts[1:]):
        t_mid = twist.evaluate(sample_point(a, b))
        idelta = inv_delta.piece_at(t_mid)
        ln, ld = _homogenize(Poly.coerce(l_squared), p, q, tv)
        dn, dd = _homogenize(idelta, p, q, tv)
        num, den = _clear_power(scale**3 * ln * dn * factor, ld * dd, q, var)
        f = RationalFn(num, den, var)
        exact = integrate_poly(f.num, a, b, var) if f.is_polynomial() else None
        enc = None
        if eps is not None:
            enc = integrate_numeric(num, den, a, b, Fraction(eps) / n_pieces, var)
        pieces.append(TailPiece(a, b, f, exact, enc))
    exact_total = None
    if all(pc.exact is not None for pc in pieces):
        exact_total = sum((pc.exact for pc in pieces), Fraction(0))
    enclosure = None
    if eps is not None:
        enclosure = pieces[0].enclosure
        for pc in pieces[1:]:
            enclosure = enclosure + pc.enclosure
    return TailResult(tuple(pieces), exact_total, enclosure)
