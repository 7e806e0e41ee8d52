"""Numerical lattices of surfaces and threefolds, and divisor classes on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Mapping, Sequence

from ..errors import LatticeError
from ..exact import Poly, parse_expr, parse_poly
from ..exact.scalar import QuadElem
from .lp import determinant, invert, rank_pivots


def _poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, str):
        return parse_poly(x)
    return Poly.coerce(Fraction(x) if not isinstance(x, (Fraction, QuadElem)) else x)


class DivClass:
    """A class ``sum coords[i] * basis[i]`` whose coefficients are polynomials."""

    __slots__ = ("lattice", "coords")

    def __init__(self, lattice, coords: Sequence):
        if len(coords) != len(lattice.basis):
            raise LatticeError(
                f"{len(coords)} coordinates for a rank-{len(lattice.basis)} basis"
            )
        self.lattice = lattice
        self.coords = tuple(_poly(c) for c in coords)

    def _check(self, other) -> DivClass:
        if not isinstance(other, DivClass):
            raise TypeError(f"expected a divisor class, got {other!r}")
        if other.lattice is not self.lattice:
            raise LatticeError(
                f"classes on different lattices: {self.lattice.name} and {other.lattice.name}"
            )
        return other

    def __add__(self, other):
        other = self._check(other)
        return DivClass(self.lattice, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        other = self._check(other)
        return DivClass(self.lattice, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return DivClass(self.lattice, [-a for a in self.coords])

    def __mul__(self, c):
        if isinstance(c, DivClass):
            return NotImplemented
        c = _poly(c) if not isinstance(c, Poly) else c
        return DivClass(self.lattice, [c * a for a in self.coords])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DivClass):
            return NotImplemented
        return other.lattice is self.lattice and self.coords == other.coords

    def __hash__(self):
        return hash((id(self.lattice), self.coords))

    def variables(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for c in self.coords:
            out |= c.variables()
        return out

    def is_constant(self) -> bool:
        return all(c.is_constant() for c in self.coords)

    def values(self) -> tuple:
        return tuple(c.constant_value() for c in self.coords)

    def subs(self, values: Mapping) -> DivClass:
        return DivClass(self.lattice, [c.subs(values) for c in self.coords])

    def at(self, **values) -> DivClass:
        return self.subs(values)

    def __str__(self):
        parts = []
        for name, c in zip(self.lattice.basis, self.coords):
            if c.is_zero():
                continue
            if c == 1:
                parts.append(name)
            elif c == -1:
                parts.append(f"-{name}")
            elif c.is_constant() and not isinstance(c.constant_value(), QuadElem):
                parts.append(f"{c}*{name}")
            else:
                parts.append(f"({c})*{name}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self):
        return f"DivClass({self.lattice.name}: {self})"


def _frac_matrix(rows) -> tuple:
    return tuple(tuple(Fraction(parse_expr(v)) if isinstance(v, str) else Fraction(v) for v in r) for r in rows)


def inertia(G: Sequence[Sequence]) -> tuple[int, int, int]:
    """``(positive, negative, zero)`` counts of a symmetric rational matrix."""
    n = len(G)
    A = [[Fraction(v) for v in row] for row in G]
    pos = neg = 0
    active = list(range(n))
    while active:
        i = next((k for k in active if A[k][k] != 0), None)
        if i is None:
            # all diagonal entries vanish: make one nonzero by a congruence
            pair = next(((a, b) for a in active for b in active if a != b and A[a][b] != 0), None)
            if pair is None:
                break
            a, b = pair
            for k in range(n):
                A[a][k] += A[b][k]
            for k in range(n):
                A[k][a] += A[k][b]
            continue
        d = A[i][i]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(i)
        for j in active:
            f = A[j][i] / d
            if f:
                for k in range(n):
                    A[j][k] -= f * A[i][k]
        for j in active:
            A[i][j] = A[j][i] = Fraction(0)
    return pos, neg, n - pos - neg


@dataclass(eq=False)
class SurfaceLattice:
    """Intersection data on a surface, possibly given by a redundant spanning set.

    ``gram`` may be degenerate: classes are then compared only numerically, and
    linear algebra runs on a maximal nondegenerate set of basis rows.
    """

    name: str
    basis: tuple
    gram: tuple
    canonical: tuple  # coordinates of K_S
    degree: Fraction | None = None  # declared K_S^2
    curves: dict = field(default_factory=dict)  # name -> coordinates
    neg_curves: tuple = ()
    eff_generators: tuple = ()
    relations: tuple = ()  # (label, lhs coords, rhs coords)
    orbits: tuple = ()  # negative curves standing for a sum of disjoint conjugate curves

    def __post_init__(self):
        n = len(self.basis)
        self.basis = tuple(self.basis)
        self.gram = _frac_matrix(self.gram)
        if len(self.gram) != n or any(len(r) != n for r in self.gram):
            raise LatticeError(f"{self.name}: Gram matrix must be {n}x{n}")
        for i in range(n):
            for j in range(n):
                if self.gram[i][j] != self.gram[j][i]:
                    raise LatticeError(f"{self.name}: Gram matrix is not symmetric")
        self.canonical = tuple(Fraction(x) for x in self.canonical)
        curves = {b: tuple(Fraction(int(i == k)) for k in range(n)) for i, b in enumerate(self.basis)}
        for name, coords in dict(self.curves).items():
            curves[name] = tuple(Fraction(x) for x in coords)
        self.curves = curves
        self.neg_curves = tuple(self.neg_curves)
        self.eff_generators = tuple(self.eff_generators or self.neg_curves)
        self.orbits = tuple(self.orbits)
        if set(self.orbits) - set(self.neg_curves):
            raise LatticeError(f"{self.name}: orbits must be negative curves")
        for c in self.neg_curves + self.eff_generators:
            if c not in self.curves:
                raise LatticeError(f"{self.name}: unknown curve {c!r}")
        self.pivots = tuple(rank_pivots(self.gram))
        self.rank = len(self.pivots)
        sub = [[self.gram[i][j] for j in self.pivots] for i in self.pivots]
        self._pivot_inverse = invert(sub)

    # -- classes ----------------------------------------------------------
    def cls(self, coords) -> DivClass:
        """Class from a coordinate list or a ``{name: coefficient}`` mapping."""
        if isinstance(coords, DivClass):
            if coords.lattice is not self:
                raise LatticeError("class from another lattice")
            return coords
        if isinstance(coords, Mapping):
            total = [Poly() for _ in self.basis]
            for name, coef in coords.items():
                if name not in self.curves:
                    raise LatticeError(f"{self.name}: unknown class name {name!r}")
                c = _poly(coef)
                for k, x in enumerate(self.curves[name]):
                    if x:
                        total[k] = total[k] + c * x
            return DivClass(self, total)
        return DivClass(self, coords)

    def curve(self, name: str) -> DivClass:
        if name not in self.curves:
            raise LatticeError(f"{self.name}: unknown curve {name!r}")
        cache = self.__dict__.setdefault("_curve_cache", {})
        if name not in cache:
            cache[name] = DivClass(self, self.curves[name])
        return cache[name]

    def zero(self) -> DivClass:
        return DivClass(self, [0] * len(self.basis))

    @property
    def K(self) -> DivClass:
        return DivClass(self, self.canonical)

    @property
    def anticanonical(self) -> DivClass:
        return -self.K

    # -- pairing ----------------------------------------------------------
    def pairing_vector(self, D: DivClass) -> tuple:
        """``(D . b_i)`` for every basis element."""
        D = self.cls(D)
        if D.is_constant():
            # plain rational arithmetic; most pairings in a decomposition are numeric
            x = [c.constant_value() for c in D.coords]
            return tuple(Poly.const(sum((g * c for g, c in zip(row, x) if g and c), Fraction(0))) for row in self.gram)
        out = []
        for row in self.gram:
            acc = Poly()
            for g, c in zip(row, D.coords):
                if g:
                    acc = acc + c * g
            out.append(acc)
        return tuple(out)

    def pair(self, D1: DivClass, D2: DivClass) -> Poly:
        v = self.pairing_vector(D1)
        D2 = self.cls(D2)
        if D2.is_constant() and all(a.is_constant() for a in v):
            x = (c.constant_value() for c in D2.coords)
            return Poly.const(sum((a.constant_value() * c for a, c in zip(v, x)), Fraction(0)))
        acc = Poly()
        for a, c in zip(v, D2.coords):
            acc = acc + a * c
        return acc

    def numerically_equal(self, D1, D2) -> bool:
        diff = self.cls(D1) - self.cls(D2)
        return all(p.is_zero() for p in self.pairing_vector(diff))

    def normal_form(self, D: DivClass) -> DivClass:
        """Representative supported on the pivot rows with the same pairings."""
        v = self.pairing_vector(D)
        sol = [Poly() for _ in self.basis]
        rhs = [v[i] for i in self.pivots]
        for row_idx, k in enumerate(self.pivots):
            acc = Poly()
            for a, r in zip(self._pivot_inverse[row_idx], rhs):
                if a:
                    acc = acc + r * a
            sol[k] = acc
        return DivClass(self, sol)

    # -- checks -----------------------------------------------------------
    def signature(self) -> tuple[int, int]:
        pos, neg, _ = inertia(self.gram)
        return pos, neg

    def validate(self) -> list[str]:
        """Problems found in the lattice data (empty when consistent)."""
        issues = []
        pos, neg = self.signature()
        if pos != 1:
            issues.append(f"signature ({pos}, {neg}) is not hyperbolic")
        K2 = self.pair(self.K, self.K).constant_value()
        if self.degree is not None and K2 != self.degree:
            issues.append(f"K^2 = {K2}, declared {self.degree}")
        for c in self.neg_curves:
            C = self.curve(c)
            c2 = self.pair(C, C).constant_value()
            if c2 >= 0:
                issues.append(f"negative curve {c} has self-intersection {c2}")
            # integral genus: C^2 + K.C is even
            g2 = c2 + self.pair(self.K, C).constant_value()
            if g2.denominator == 1 and g2 < -2 and c not in self.orbits:
                issues.append(f"curve {c} has arithmetic genus below 0")
        for label, lhs, rhs in self.relations:
            if not self.numerically_equal(self.cls(lhs), self.cls(rhs)):
                issues.append(f"relation {label} fails")
        return issues

    # -- change of basis --------------------------------------------------
    def rebase(self, M: Sequence[Sequence], name: str | None = None, prefix: str = "b") -> tuple[SurfaceLattice, list]:
        """New lattice with basis ``b'_i = sum_j M[i][j] b_j``.

        Returns the new lattice and the matrix converting old coordinates to new.
        """
        n = len(self.basis)
        M = [[Fraction(x) for x in row] for row in M]
        if determinant(M) == 0:
            raise LatticeError("change of basis must be invertible")
        gram = [
            [sum(M[i][a] * self.gram[a][b] * M[j][b] for a in range(n) for b in range(n)) for j in range(n)]
            for i in range(n)
        ]
        Minv = invert(M)
        # old coords x, new coords y: x = M^T y  =>  y = (M^-1)^T x
        conv = [[Minv[j][i] for j in range(n)] for i in range(n)]

        def convert(x):
            return tuple(sum(conv[i][j] * x[j] for j in range(n)) for i in range(n))

        new_basis = tuple(f"{prefix}{i + 1}" for i in range(n))
        curves = {k: convert(v) for k, v in self.curves.items()}
        rel = tuple((lab, convert(self.cls(l).values()), convert(self.cls(r).values())) for lab, l, r in self.relations)
        lat = SurfaceLattice(
            name or f"{self.name}'",
            new_basis,
            gram,
            convert(self.canonical),
            self.degree,
            curves,
            self.neg_curves,
            self.eff_generators,
            rel,
            self.orbits,
        )
        return lat, conv


@dataclass(eq=False)
class ThreefoldLattice:
    """Triple intersection numbers on a Fano threefold with Picard rank ``len(basis)``."""

    name: str
    basis: tuple
    triple_numbers: dict  # sorted index triple -> Fraction
    canonical: tuple
    degree: Fraction | None = None  # declared (-K)^3
    mori: tuple = ()  # pairing vectors D_i . gamma of extremal curves
    classes: dict = field(default_factory=dict)
    eff_generators: tuple = ()

    def __post_init__(self):
        n = len(self.basis)
        self.basis = tuple(self.basis)
        tn = {}
        for key, v in dict(self.triple_numbers).items():
            if len(key) != 3 or any(not 0 <= k < n for k in key):
                raise LatticeError(f"{self.name}: bad triple index {key}")
            tn[tuple(sorted(key))] = Fraction(v)
        self.triple_numbers = tn
        self.canonical = tuple(Fraction(x) for x in self.canonical)
        self.mori = tuple(tuple(Fraction(x) for x in ray) for ray in self.mori)
        classes = {b: tuple(Fraction(int(i == k)) for k in range(n)) for i, b in enumerate(self.basis)}
        for name, coords in dict(self.classes).items():
            classes[name] = tuple(Fraction(x) for x in coords)
        self.classes = classes
        self.eff_generators = tuple(self.eff_generators)
        for g in self.eff_generators:
            if g not in self.classes:
                raise LatticeError(f"{self.name}: unknown class {g!r}")

    def t(self, i: int, j: int, k: int) -> Fraction:
        return self.triple_numbers.get(tuple(sorted((i, j, k))), Fraction(0))

    def cls(self, coords) -> DivClass:
        if isinstance(coords, DivClass):
            if coords.lattice is not self:
                raise LatticeError("class from another lattice")
            return coords
        if isinstance(coords, Mapping):
            total = [Poly() for _ in self.basis]
            for name, coef in coords.items():
                if name not in self.classes:
                    raise LatticeError(f"{self.name}: unknown class name {name!r}")
                c = _poly(coef)
                for k, x in enumerate(self.classes[name]):
                    if x:
                        total[k] = total[k] + c * x
            return DivClass(self, total)
        return DivClass(self, coords)

    def named(self, name: str) -> DivClass:
        if name not in self.classes:
            raise LatticeError(f"{self.name}: unknown class {name!r}")
        return DivClass(self, self.classes[name])

    @property
    def K(self) -> DivClass:
        return DivClass(self, self.canonical)

    @property
    def anticanonical(self) -> DivClass:
        return -self.K

    def triple(self, D1, D2, D3) -> Poly:
        a, b, c = self.cls(D1).coords, self.cls(D2).coords, self.cls(D3).coords
        n = len(self.basis)
        acc = Poly()
        for i in range(n):
            if a[i].is_zero():
                continue
            for j in range(n):
                if b[j].is_zero():
                    continue
                ab = a[i] * b[j]
                for k in range(n):
                    t = self.t(i, j, k)
                    if t and not c[k].is_zero():
                        acc = acc + ab * c[k] * t
        return acc

    def cube(self, D) -> Poly:
        return self.triple(D, D, D)

    def curve_pairing(self, D, ray_index: int) -> Poly:
        D = self.cls(D)
        acc = Poly()
        for c, r in zip(D.coords, self.mori[ray_index]):
            if r:
                acc = acc + c * r
        return acc

    def validate(self) -> list[str]:
        issues = []
        if self.degree is not None:
            v = self.cube(self.anticanonical).constant_value()
            if v != self.degree:
                issues.append(f"(-K)^3 = {v}, declared {self.degree}")
        for i, j, k in combinations_with_replacement(range(len(self.basis)), 3):
            if self.t(i, j, k) < 0:
                issues.append(f"negative triple number for basis {i}{j}{k} of nef classes")
        for r, ray in enumerate(self.mori):
            if all(x == 0 for x in ray):
                issues.append(f"Mori ray {r} is zero")
        return issues
