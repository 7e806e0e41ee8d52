"""Exact scalars: rationals and elements of real quadratic fields.

A scalar is either a :class:`fractions.Fraction` or a :class:`QuadElem`
``a + b*sqrt(d)`` with ``d`` a square-free integer greater than one.  Every
constructor routes through :func:`quad`, which collapses ``b == 0`` back to a
plain ``Fraction`` so that rational results never carry a spurious field tag.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

from ..errors import FieldMismatchError

Scalar = Union[Fraction, "QuadElem"]


def _squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(k, m)`` with ``n == k*k*m`` and ``m`` square-free."""
    k, m = 1, n
    p = 2
    while p * p <= m:
        while m % (p * p) == 0:
            m //= p * p
            k *= p
        p += 1
    return k, m


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, bool):
        return Fraction(int(x))
    raise TypeError(f"not an exact rational: {x!r}")


def quad(a, b, d: int) -> Scalar:
    """Build ``a + b*sqrt(d)``; returns a ``Fraction`` when this is rational."""
    a, b = as_fraction(a), as_fraction(b)
    if b == 0:
        return a
    if d <= 0:
        raise ValueError("only real quadratic fields are supported")
    k, m = _squarefree_split(d)
    if m == 1:
        return a + b * k
    return QuadElem(a, b * k, m)


def sqrt_scalar(x) -> Scalar:
    """Exact square root of a non-negative rational."""
    x = as_fraction(x)
    if x < 0:
        raise ValueError("square root of a negative number")
    num, den = x.numerator, x.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    # sqrt(n/d) = sqrt(n*d)/d
    k, m = _squarefree_split(num * den)
    return quad(0, Fraction(k, den), m)


class QuadElem:
    """An element ``a + b*sqrt(d)`` of a real quadratic field, with ``b != 0``."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Fraction, b: Fraction, d: int):
        self.a = a
        self.b = b
        self.d = d

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QuadElem):
            if other.d != self.d:
                raise FieldMismatchError(
                    f"cannot combine sqrt({self.d}) and sqrt({other.d})"
                )
            return other.a, other.b
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Fraction(other), Fraction(0)
        return None

    def conjugate(self) -> QuadElem:
        return QuadElem(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return quad(self.a + c[0], self.b + c[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return quad(self.a - c[0], self.b - c[1], self.d)

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return quad(c[0] - self.a, c[1] - self.b, self.d)

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        a, b = c
        return quad(self.a * a + self.b * b * self.d, self.a * b + self.b * a, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        a, b = c
        n = a * a - b * b * self.d
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        # (x)(a - b sqrt d) / n
        return quad(
            (self.a * a - self.b * b * self.d) / n, (self.b * a - self.a * b) / n, self.d
        )

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        n = self.norm()
        inv = QuadElem(self.a / n, -self.b / n, self.d)
        return inv * quad(c[0], c[1], self.d)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return 1 / (self ** (-n))
        result: Scalar = Fraction(1)
        base: Scalar = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- order ------------------------------------------------------------
    def sign(self) -> int:
        """Exact sign, decided by comparing ``a**2`` with ``b**2 * d``."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sa == 0:
            return sb
        # opposite signs: the larger magnitude wins
        lhs, rhs = self.a * self.a, self.b * self.b * self.d
        return sa if lhs > rhs else sb

    def _cmp(self, other) -> int | None:
        c = self._coerce(other)
        if c is None:
            return None
        diff = quad(self.a - c[0], self.b - c[1], self.d)
        return scalar_sign(diff)

    def __lt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s < 0

    def __le__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s <= 0

    def __gt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s > 0

    def __ge__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s >= 0

    def __eq__(self, other):
        if isinstance(other, QuadElem):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        return False  # normalised: never equal to a rational

    def __hash__(self):
        return hash((QuadElem, self.a, self.b, self.d))

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __bool__(self):
        return True

    def __repr__(self):
        return f"QuadElem({self.a!s}, {self.b!s}, {self.d})"

    def __str__(self):
        return format_scalar(self)


def scalar_sign(x: Scalar) -> int:
    if isinstance(x, QuadElem):
        return x.sign()
    return (x > 0) - (x < 0)


def field_of(*xs) -> int:
    """Common radicand of the arguments (1 for purely rational input)."""
    d = 1
    for x in xs:
        if isinstance(x, QuadElem):
            if d not in (1, x.d):
                raise FieldMismatchError(f"cannot combine sqrt({d}) and sqrt({x.d})")
            d = x.d
    return d


def to_scalar(x) -> Scalar:
    if isinstance(x, QuadElem):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not exact scalars")
    return as_fraction(x)


def _fmt_frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x: Scalar) -> str:
    """Render in the grammar accepted by :func:`azdelta.exact.parse_scalar`."""
    if isinstance(x, QuadElem):
        rad = f"sqrt({x.d})"
        if x.b == 1:
            tail = rad
        elif x.b == -1:
            tail = "-" + rad
        else:
            tail = f"{_fmt_frac(x.b)}*{rad}"
        if x.a == 0:
            return tail
        sep = "" if tail.startswith("-") else "+"
        return f"{_fmt_frac(x.a)}{sep}{tail}"
    return _fmt_frac(as_fraction(x))


def rational_bounds(x: Scalar, eps: Fraction) -> tuple[Fraction, Fraction]:
    """Rationals ``lo <= x <= hi`` with ``hi - lo <= eps``."""
    if not isinstance(x, QuadElem):
        return x, x
    # bisect sqrt(d) on a dyadic grid fine enough for |b| * width <= eps
    scale = abs(x.b)
    width = eps / scale
    n = 1
    while Fraction(1, n) > width:
        n *= 2
    r = math.isqrt(x.d * n * n)  # r/n <= sqrt(d) < (r+1)/n
    lo_s, hi_s = Fraction(r, n), Fraction(r + 1, n)
    if x.b > 0:
        return x.a + x.b * lo_s, x.a + x.b * hi_s
    return x.a + x.b * hi_s, x.a + x.b * lo_s
