"""Exact root isolation and sign analysis for univariate polynomials."""

from __future__ import annotations

from fractions import Fraction

from ..errors import UnsupportedRootsError
from . import univariate as U
from .poly import Poly
from .scalar import Scalar, sqrt_scalar


def _coeffs(p, var: str | None) -> list:
    if isinstance(p, Poly):
        vs = p.variables()
        if var is None:
            if len(vs) > 1:
                raise ValueError(f"{p} is not univariate")
            var = next(iter(vs), "x")
        return p.univariate_coeffs(var)
    return U.trim(p)


def _in_range(r, lo, hi) -> bool:
    return (lo is None or r >= lo) and (hi is None or r <= hi)


def _quadratic_roots(c: list) -> list[Scalar]:
    if len(c) == 2:
        return [-c[0] / c[1]]
    c0, c1, c2 = c
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        return []
    if disc == 0:
        return [-c1 / (2 * c2)]
    s = sqrt_scalar(disc)
    r1 = (-c1 - s) / (2 * c2)
    r2 = (-c1 + s) / (2 * c2)
    return sorted([r1, r2])


def roots_in_interval(p, lo, hi, var: str | None = None) -> list[Scalar]:
    """Distinct real roots of ``p`` in the closed interval, in increasing order.

    Only degree at most two is handled; roots come back in Q or Q(sqrt d).
    """
    c = _coeffs(p, var)
    if U.deg(c) > 2:
        raise UnsupportedRootsError(f"degree {U.deg(c)} root isolation requested")
    if not c:
        raise ValueError("the zero polynomial has no isolated roots")
    if len(c) == 1:
        return []
    if not U.is_rational(c):
        raise UnsupportedRootsError("roots of polynomials over Q(sqrt d)")
    return [r for r in _quadratic_roots(c) if _in_range(r, lo, hi)]


def real_roots(p, lo=None, hi=None, var: str | None = None) -> list[Scalar]:
    """Distinct real roots in ``[lo, hi]`` (``None`` means unbounded).

    Rational roots are split off first; what remains must have degree at most
    two, or provably no root in the interval (checked with a Sturm count).
    """
    c = _coeffs(p, var)
    if not c:
        raise ValueError("the zero polynomial has no isolated roots")
    if len(c) == 1:
        return []
    if not U.is_rational(c):
        if U.deg(c) == 1:
            r = -c[0] / c[1]
            return [r] if _in_range(r, lo, hi) else []
        raise UnsupportedRootsError("roots of polynomials over Q(sqrt d)")
    c = U.squarefree(c)
    found = U.rational_roots(c)
    rest = c
    for r in found:
        rest, rem = U.divmod_(rest, [-r, Fraction(1)])
        assert not rem
    out: list[Scalar] = [r for r in found if _in_range(r, lo, hi)]
    d = U.deg(rest)
    if d in (1, 2):
        out.extend(r for r in _quadratic_roots(rest) if _in_range(r, lo, hi))
    elif d > 2:
        a = lo
        if a is None:
            # Cauchy bound for the leftmost possible root
            bound = 1 + max(abs(x / rest[-1]) for x in rest[:-1])
            a = -bound - 1
        n = U.sturm_count(rest, a, hi)
        if U.evaluate(rest, a) == 0:
            n += 1
        if n:
            raise UnsupportedRootsError(
                f"irreducible factor of degree {d} has a root in the interval"
            )
    return sorted(out)


def sign_on_open(p, lo, hi, var: str | None = None) -> int:
    """Sign of ``p`` on ``(lo, hi)``, which must contain no root of ``p``."""
    c = _coeffs(p, var)
    if not c:
        return 0
    x = sample_point(lo, hi)
    v = U.evaluate(c, x)
    return (v > 0) - (v < 0)


def sample_point(lo, hi) -> Scalar:
    """A convenient interior point; ``None`` endpoints are unbounded."""
    if lo is None and hi is None:
        return Fraction(0)
    if hi is None:
        return lo + 1
    if lo is None:
        return hi - 1
    if lo == hi:
        return lo
    return (lo + hi) / 2


def sign_intervals(p, lo, hi, var: str | None = None) -> list[tuple[Scalar, Scalar, int]]:
    """Split ``[lo, hi]`` at the roots of ``p``; report the sign on each open piece."""
    c = _coeffs(p, var)
    if not c:
        return [(lo, hi, 0)]
    roots = [r for r in real_roots(c, lo, hi) if r != lo and r != hi]
    cuts = [lo, *roots, hi]
    return [(a, b, sign_on_open(c, a, b)) for a, b in zip(cuts, cuts[1:])]


def is_nonnegative_on(p, lo, hi, var: str | None = None) -> bool:
    """Exact check that ``p >= 0`` on the closed interval."""
    c = _coeffs(p, var)
    if not c:
        return True
    for a, b, s in sign_intervals(c, lo, hi):
        if s < 0:
            return False
    for x in (lo, hi):
        if x is not None and U.evaluate(c, x) < 0:
            return False
    if lo is not None and hi is not None and lo == hi:
        return U.evaluate(c, lo) >= 0
    return True


def sign_right_of(p, x, var: str | None = None) -> int:
    """Sign of ``p`` on ``(x, x + eps)`` for small ``eps``."""
    c = _coeffs(p, var)
    while c:
        v = U.evaluate(c, x)
        if v != 0:
            return (v > 0) - (v < 0)
        c = U.derivative(c)
    return 0

