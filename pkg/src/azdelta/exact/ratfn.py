"""Univariate rational functions kept in lowest terms with a monic denominator."""

from __future__ import annotations

import math
from fractions import Fraction

from . import univariate as U
from .poly import Poly, _is_scalar
from .scalar import Scalar, to_scalar


class RationalFn:
    """``num/den`` in a single variable, gcd-reduced, denominator monic."""

    __slots__ = ("var", "_num", "_den")

    def __init__(self, num, den=None, var: str | None = None):
        num_p = Poly.coerce(num)
        den_p = Poly.coerce(1 if den is None else den)
        vs = num_p.variables() | den_p.variables()
        if len(vs) > 1:
            raise ValueError(f"rational functions are univariate, got {sorted(vs)}")
        if var is None:
            var = next(iter(vs), "x")
        elif vs and vs != {var}:
            raise ValueError(f"expected variable {var}, got {sorted(vs)}")
        n = num_p.univariate_coeffs(var)
        d = den_p.univariate_coeffs(var)
        if not d:
            raise ZeroDivisionError("zero denominator")
        if not n:
            n, d = [], [Fraction(1)]
        else:
            g = U.gcd(n, d)
            if len(g) > 1:
                n, _ = U.divmod_(n, g)
                d, _ = U.divmod_(d, g)
            lead = d[-1]
            n = [c / lead for c in n]
            d = [c / lead for c in d]
        self.var = var
        self._num = tuple(n)
        self._den = tuple(d)

    @classmethod
    def coerce(cls, x, var: str | None = None) -> RationalFn:
        if isinstance(x, RationalFn):
            return x
        return cls(x, 1, var)

    # -- parts ------------------------------------------------------------
    @property
    def num(self) -> Poly:
        return Poly.from_coeffs(self._num, self.var)

    @property
    def den(self) -> Poly:
        return Poly.from_coeffs(self._den, self.var)

    def is_polynomial(self) -> bool:
        return len(self._den) == 1

    def as_poly(self) -> Poly:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num

    def is_constant(self) -> bool:
        return self.is_polynomial() and len(self._num) <= 1

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._num[0] if self._num else Fraction(0)

    # -- arithmetic -------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, RationalFn):
            o = other
        elif isinstance(other, Poly) and other.variables():
            o = RationalFn(other, 1)
        elif isinstance(other, Poly) or _is_scalar(other):
            o = RationalFn(other, 1, self.var)
        else:
            return None
        if o.var != self.var and not (o.is_constant() or self.is_constant()):
            raise ValueError("rational functions in different variables")
        return o

    def _var_with(self, other: RationalFn) -> str:
        if self.is_constant() and not other.is_constant():
            return other.var
        return self.var

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        v = self._var_with(o)
        n = U.add(U.mul(self._num, o._den), U.mul(o._num, self._den))
        d = U.mul(self._den, o._den)
        return RationalFn(Poly.from_coeffs(n, v), Poly.from_coeffs(d, v), v)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den, self.var)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        v = self._var_with(o)
        n = U.mul(self._num, o._num)
        d = U.mul(self._den, o._den)
        return RationalFn(Poly.from_coeffs(n, v), Poly.from_coeffs(d, v), v)

    __rmul__ = __mul__

    def reciprocal(self) -> RationalFn:
        if not self._num:
            raise ZeroDivisionError("reciprocal of zero")
        return RationalFn(self.den, self.num, self.var)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.reciprocal()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.reciprocal() ** (-n)
        out = RationalFn(1, 1, self.var)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except ValueError:
            return False
        if o is None:
            return NotImplemented
        if self.is_constant() and o.is_constant():
            return self.constant_value() == o.constant_value()
        return (self.var, self._num, self._den) == (o.var, o._num, o._den)

    def __hash__(self):
        if self.is_constant():
            return hash(Poly.const(self.constant_value()))
        return hash((self.var, self._num, self._den))

    # -- evaluation -------------------------------------------------------
    def evaluate(self, x) -> Scalar:
        x = to_scalar(x)
        d = U.evaluate(self._den, x)
        if d == 0:
            raise ZeroDivisionError(f"pole of {self} at {x}")
        return U.evaluate(self._num, x) / d

    def __call__(self, x) -> Scalar:
        return self.evaluate(x)

    def compose(self, inner: RationalFn | Poly, var: str | None = None) -> RationalFn:
        """``self(inner)``; the result lives in the inner variable."""
        inner = RationalFn.coerce(inner, var)
        a, b = inner._num, inner._den
        n = max(len(self._num), len(self._den)) - 1

        def homog(c) -> list:
            acc: list = []
            for k, ck in enumerate(c):
                term = U.scale(U.mul(_pow(a, k), _pow(b, n - k)), ck)
                acc = U.add(acc, term)
            return acc

        v = inner.var
        return RationalFn(
            Poly.from_coeffs(homog(self._num), v), Poly.from_coeffs(homog(self._den), v), v
        )

    def derivative(self) -> RationalFn:
        n, d = list(self._num), list(self._den)
        top = U.sub(U.mul(U.derivative(n), d), U.mul(n, U.derivative(d)))
        v = self.var
        return RationalFn(Poly.from_coeffs(top, v), Poly.from_coeffs(U.mul(d, d), v), v)

    def __str__(self):
        if self.is_polynomial():
            return str(self.num)
        n, d = self._integral_parts()
        return f"({Poly.from_coeffs(n, self.var)})/({Poly.from_coeffs(d, self.var)})"

    def _integral_parts(self) -> tuple[list, list]:
        """Numerator and denominator scaled to coprime integer coefficients."""
        coeffs = self._num + self._den
        if not all(isinstance(c, Fraction) for c in coeffs):
            return list(self._num), list(self._den)
        scale = 1
        for c in coeffs:
            scale = math.lcm(scale, c.denominator)
        g = 0
        for c in coeffs:
            g = math.gcd(g, int(c * scale))
        k = Fraction(scale, g)
        return [c * k for c in self._num], [c * k for c in self._den]

    def __repr__(self):
        return f"RationalFn({self})"


def _pow(p, k: int) -> list:
    out: list = [Fraction(1)]
    for _ in range(k):
        out = U.mul(out, p)
    return out
