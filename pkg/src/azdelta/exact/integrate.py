"""Closed-form integration and verified numeric enclosures.

Every closed-form definite integral of a univariate polynomial passes through
:func:`integrate_poly`.  Inside :func:`recording` those calls are logged, which
lets a caller re-check each one against :func:`integrate_numeric`.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass
from fractions import Fraction

from ..errors import NeedsNumericPathError
from . import univariate as U
from .piecewise import PiecewiseFn
from .poly import Poly
from .ratfn import RationalFn
from .roots import real_roots
from .scalar import Scalar, rational_bounds, to_scalar

_RECORDERS: list[list] = []


@contextlib.contextmanager
def recording():
    """Collect ``(poly, var, lo, hi, value)`` for every closed-form integral."""
    log: list = []
    _RECORDERS.append(log)
    try:
        yield log
    finally:
        _RECORDERS.remove(log)


def _single_var(p: Poly, var: str | None) -> str:
    if var is not None:
        return var
    vs = p.variables()
    if len(vs) > 1:
        raise ValueError(f"{p} has several variables; name the one to integrate")
    return next(iter(vs), "x")


def integrate_poly(p, lo, hi, var: str | None = None) -> Scalar:
    """Exact definite integral of a univariate polynomial."""
    p = Poly.coerce(p)
    var = _single_var(p, var)
    lo, hi = to_scalar(lo), to_scalar(hi)
    value = p.integrate(var, lo, hi).constant_value()
    for log in _RECORDERS:
        log.append((p, var, lo, hi, value))
    return value


def _piece_integral(f, var: str, a, b) -> Scalar:
    if isinstance(f, RationalFn):
        if not f.is_polynomial():
            raise NeedsNumericPathError(
                f"{f} on [{a}, {b}] is not a polynomial; use integrate_numeric"
            )
        f = f.num
    return integrate_poly(Poly.coerce(f), a, b, var)


def integrate_piecewise(f: PiecewiseFn) -> Scalar:
    if f.hi is None:
        raise ValueError("cannot integrate over an unbounded interval")
    total: Scalar = Fraction(0)
    for a, b, piece in f.intervals():
        total = total + _piece_integral(piece, f.var, a, b)
    return total


@dataclass(frozen=True)
class Enclosure:
    """A closed interval ``[lo, hi]`` with rational endpoints."""

    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __add__(self, other: Enclosure) -> Enclosure:
        return Enclosure(self.lo + other.lo, self.hi + other.hi)

    def __str__(self):
        return f"[{float(self.lo):.15g}, {float(self.hi):.15g}]"


def _series_quotient(p: list, q: list, n: int) -> list:
    """First ``n + 1`` Taylor coefficients of ``p/q`` at 0 (needs ``q[0] != 0``)."""
    out: list = []
    for k in range(n + 1):
        acc = p[k] if k < len(p) else Fraction(0)
        for j in range(1, min(k, len(q) - 1) + 1):
            acc = acc - q[j] * out[k - j]
        out.append(acc / q[0])
    return out


def _abs_sum(coeffs, r) -> Scalar:
    total: Scalar = Fraction(0)
    rk: Scalar = Fraction(1)
    for c in coeffs:
        total = total + abs(c) * rk
        rk = rk * r
    return total


def _cell_estimate(num, den, a, b, order: int):
    """Integral of the Taylor polynomial on ``[a, b]`` and a remainder bound.

    Returns ``None`` when the denominator cannot be bounded away from zero.
    """
    m = (a + b) / 2
    r = (b - a) / 2
    p = U.shift(num, m)
    q = U.shift(den, m)
    if not q or q[0] == 0:
        return None
    T = _series_quotient(p, q, order)
    integral: Scalar = Fraction(0)
    rk = r
    for k, c in enumerate(T):
        if k % 2 == 0:
            integral = integral + 2 * c * rk / (k + 1)
        rk = rk * r
    # p - q*T = h^(order+1) * R(h)
    resid = U.sub(p, U.mul(q, T))
    R = resid[order + 1 :]
    if not R:
        return integral, Fraction(0)
    q_low = abs(q[0]) - _abs_sum(q[1:], r) * r
    if q_low <= 0:
        return None
    R_max = _abs_sum(R, r)
    err = R_max / q_low * 2 * r ** (order + 2) / (order + 2)
    return integral, err


def integrate_numeric(num, den, lo, hi, eps, var: str | None = None, order: int = 8) -> Enclosure:
    """Verified enclosure of ``int_lo^hi num/den`` of width at most ``eps``.

    The denominator must keep one sign on the closed interval.  On each
    subinterval the integrand is replaced by its Taylor polynomial at the
    midpoint, and the remainder ``h^(n+1) R(h) / q(h)`` is bounded by
    coefficient sums; pieces whose bound is too large are bisected.
    """
    num_p, den_p = Poly.coerce(num), Poly.coerce(den)
    vs = num_p.variables() | den_p.variables()
    if var is None:
        if len(vs) > 1:
            raise ValueError("integrand must be univariate")
        var = next(iter(vs), "x")
    n_c = num_p.univariate_coeffs(var)
    d_c = den_p.univariate_coeffs(var)
    if not d_c:
        raise ZeroDivisionError("zero denominator")
    lo, hi = to_scalar(lo), to_scalar(hi)
    eps = Fraction(eps)
    flip = False
    if hi < lo:
        lo, hi, flip = hi, lo, True
    if U.deg(d_c) > 0:
        if U.is_rational(d_c) and real_roots(d_c, lo, hi):
            raise ValueError("denominator vanishes on the integration interval")

    budget = eps * Fraction(2, 5)
    total_w = hi - lo
    stack = [(lo, hi)]
    value: Scalar = Fraction(0)
    error: Scalar = Fraction(0)
    steps = 0
    while stack:
        a, b = stack.pop()
        steps += 1
        if steps > 200000:
            raise RuntimeError("numeric integration did not converge")
        est = _cell_estimate(n_c, d_c, a, b, order)
        allowed = budget * (b - a) / total_w if total_w else budget
        if est is None or est[1] > allowed:
            mid = (a + b) / 2
            stack.append((mid, b))
            stack.append((a, mid))
            continue
        value = value + est[0]
        error = error + est[1]
    slack = eps / 10
    v_lo, _ = rational_bounds(value - error, slack)
    _, v_hi = rational_bounds(value + error, slack)
    if flip:
        v_lo, v_hi = -v_hi, -v_lo
    return Enclosure(Fraction(v_lo), Fraction(v_hi))
