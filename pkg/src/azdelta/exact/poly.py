"""Sparse multivariate polynomials with exact scalar coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from ..errors import DegreeCapError
from .scalar import QuadElem, Scalar, format_scalar, to_scalar

# A monomial is a sorted tuple of (variable, exponent) pairs; () is 1.
Monomial = tuple


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, QuadElem)) and not isinstance(x, bool)


class Poly:
    """Immutable polynomial ``sum c_m * m`` over named variables.

    Scalars mix in freely, so ``2 * Poly.var("u") + 1`` works as expected.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: dict[Monomial, Scalar] = {}
        if terms:
            for m, c in terms.items():
                if c != 0:
                    clean[m] = to_scalar(c)
        self._terms = clean
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c) -> Poly:
        return cls({(): to_scalar(c)})

    @classmethod
    def var(cls, name: str) -> Poly:
        return cls({((name, 1),): Fraction(1)})

    @classmethod
    def coerce(cls, x) -> Poly:
        if isinstance(x, Poly):
            return x
        if _is_scalar(x):
            return cls.const(x)
        raise TypeError(f"cannot make a polynomial from {x!r}")

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, var: str) -> Poly:
        """Univariate polynomial from coefficients listed lowest degree first."""
        terms = {}
        for k, c in enumerate(coeffs):
            terms[((var, k),) if k else ()] = c
        return cls(terms)

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict[Monomial, Scalar]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((), Fraction(0))

    def variables(self) -> frozenset[str]:
        return frozenset(v for m in self._terms for v, _ in m)

    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in ``var``; the zero polynomial has degree -1."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(e for _, e in m) for m in self._terms)
        return max(dict(m).get(var, 0) for m in self._terms)

    def check_degree(self, cap: int = 4, what: str = "polynomial") -> Poly:
        if self.degree() > cap:
            raise DegreeCapError(f"{what} has degree {self.degree()} > {cap}: {self}")
        return self

    def coeffs(self, var: str) -> list[Poly]:
        """Coefficients in ``var`` (lowest first), each free of ``var``."""
        out: dict[int, dict] = {}
        for m, c in self._terms.items():
            d = dict(m)
            k = d.pop(var, 0)
            out.setdefault(k, {})[tuple(sorted(d.items()))] = c
        n = max(out) if out else -1
        return [Poly(out.get(k, {})) for k in range(n + 1)]

    def univariate_coeffs(self, var: str) -> list[Scalar]:
        """Scalar coefficients; the polynomial must involve no other variable."""
        extra = self.variables() - {var}
        if extra:
            raise ValueError(f"{self} is not univariate in {var}")
        return [c.constant_value() for c in self.coeffs(var)]

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Poly):
            if not _is_scalar(other):
                return NotImplemented
            other = Poly.const(other)
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms.get(m, 0) + c
        return Poly(terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, Poly) and not _is_scalar(other):
            return NotImplemented
        return self + (-Poly.coerce(other))

    def __rsub__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return Poly.const(other) - self

    def __mul__(self, other):
        if _is_scalar(other):
            if other == 0:
                return Poly()
            return Poly({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        terms: dict[Monomial, Scalar] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                terms[m] = terms.get(m, 0) + c1 * c2
        return Poly(terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly) and other.is_constant():
            other = other.constant_value()
        if not _is_scalar(other):
            return NotImplemented
        inv = 1 / to_scalar(other)
        return self * inv

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- equality ---------------------------------------------------------
    def __eq__(self, other):
        if _is_scalar(other):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- evaluation -------------------------------------------------------
    def subs(self, values: Mapping[str, object]) -> Poly:
        """Substitute scalars or polynomials for some variables."""
        result = Poly()
        cache: dict[tuple[str, int], Poly] = {}
        for m, c in self._terms.items():
            keep = []
            term = Poly.const(c)
            for v, e in m:
                if v in values:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = Poly.coerce(values[v]) ** e
                    term = term * cache[key]
                else:
                    keep.append((v, e))
            if keep:
                term = term * Poly({tuple(keep): Fraction(1)})
            result = result + term
        return result

    def evaluate(self, values: Mapping[str, object] | None = None, **kw) -> Scalar:
        vals = dict(values or {}, **kw)
        p = self.subs(vals)
        if not p.is_constant():
            missing = sorted(p.variables())
            raise ValueError(f"no value supplied for {missing}")
        return p.constant_value()

    def __call__(self, **kw) -> Scalar:
        return self.evaluate(kw)

    # -- calculus ---------------------------------------------------------
    def diff(self, var: str) -> Poly:
        terms = {}
        for m, c in self._terms.items():
            d = dict(m)
            e = d.get(var, 0)
            if e == 0:
                continue
            if e == 1:
                del d[var]
            else:
                d[var] = e - 1
            terms[tuple(sorted(d.items()))] = c * e
        return Poly(terms)

    def antiderivative(self, var: str) -> Poly:
        terms = {}
        for m, c in self._terms.items():
            d = dict(m)
            e = d.get(var, 0) + 1
            d[var] = e
            terms[tuple(sorted(d.items()))] = c / e
        return Poly(terms)

    def integrate(self, var: str, lo, hi) -> Poly:
        """Definite integral in ``var``; limits may be scalars or polynomials."""
        F = self.antiderivative(var)
        return F.subs({var: hi}) - F.subs({var: lo})

    # -- display ----------------------------------------------------------
    def _sorted_monomials(self):
        def key(m):
            return (-sum(e for _, e in m), m)

        return sorted(self._terms, key=key)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m in reversed(self._sorted_monomials()):
            c = self._terms[m]
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if isinstance(c, QuadElem):
                cs = f"({format_scalar(c)})"
                neg = False
            else:
                neg = c < 0
                cs = format_scalar(-c if neg else c)
            if not mono:
                body = cs
            elif cs == "1":
                body = mono
            else:
                body = f"{cs}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("-" if neg else "+") + body)
        return "".join(parts)

    def __repr__(self):
        return f"Poly({self})"


def as_poly(x) -> Poly:
    return Poly.coerce(x)


def poly_zero() -> Poly:
    return Poly()
