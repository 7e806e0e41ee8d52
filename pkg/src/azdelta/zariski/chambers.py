"""Chamber decompositions of one- and two-parameter families of classes.

Inside a chamber the negative support is fixed, so the positive part, the
coefficients of the negative part and the volume are polynomials.  Chambers are
found by walking in the direction of increasing parameter and adding curves as
soon as the current positive part would meet them negatively.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import ChamberError, DegreeCapError, NonPolynomialWallError, NotPseudoEffectiveError
from ..exact import Poly, integrate_poly, is_nonnegative_on, real_roots, sample_point, sign_right_of
from ..lattice import DivClass, SurfaceLattice, is_pseff, parametric_threshold, pseff_threshold
from .pointwise import decompose, solve_support, support_gram

DEGREE_CAP = 4


@dataclass(frozen=True)
class Cell:
    """One chamber.

    For two-parameter complexes the chamber is
    ``lo <= u <= hi, inner_lo(u) <= v <= inner_hi(u)``; for one-parameter
    complexes ``inner_lo`` and ``inner_hi`` are ``None``.
    """

    lo: object
    hi: object
    support: tuple
    positive: DivClass
    negative: dict
    volume: Poly
    inner_lo: Poly | None = None
    inner_hi: Poly | None = None

    def pairing(self, curve) -> Poly:
        L = self.positive.lattice
        C = L.curve(curve) if isinstance(curve, str) else curve
        return L.pair(self.positive, C)

    def negative_class(self) -> DivClass:
        L = self.positive.lattice
        out = L.zero()
        for c, a in self.negative.items():
            out = out + L.curve(c) * a
        return out

    def contains(self, u, v=None) -> bool:
        if not (self.lo <= u <= self.hi):
            return False
        if self.inner_lo is None or v is None:
            return True
        var = _inner_var_of(self)
        lo = self.inner_lo.evaluate({var: u}) if self.inner_lo.variables() else self.inner_lo.constant_value()
        hi = self.inner_hi.evaluate({var: u}) if self.inner_hi.variables() else self.inner_hi.constant_value()
        return lo <= v <= hi


def _inner_var_of(cell: Cell) -> str:
    vs = cell.inner_lo.variables() | cell.inner_hi.variables()
    return next(iter(vs), "u")


@dataclass(frozen=True)
class ChamberComplex:
    lattice: SurfaceLattice
    var: str
    cells: tuple
    inner_var: str | None = None
    direction: DivClass | None = None
    threshold: tuple = field(default=())  # [(lo, hi, t(var))] pieces

    def cells_at(self, u, v=None) -> list[Cell]:
        return [c for c in self.cells if c.contains(u, v)]

    def integrate(self, integrand) -> Poly:
        """Sum over cells of the integral of ``integrand(cell)`` over the cell.

        Two-parameter complexes are integrated over ``v`` only when their outer
        parameter is not meant to be integrated; see :meth:`integrate_inner`.
        """
        total = Poly()
        for cell in self.cells:
            f = Poly.coerce(integrand(cell))
            if self.inner_var is not None:
                f = f.integrate(self.inner_var, cell.inner_lo, cell.inner_hi)
            total = total + integrate_poly(f, cell.lo, cell.hi, self.var)
        return total.constant_value()

    def integrate_inner(self, integrand) -> list[tuple]:
        """``[(lo, hi, F(u))]`` with ``F`` the inner integral summed over cells."""
        if self.inner_var is None:
            raise ValueError("one-parameter complex has no inner variable")
        finite = sorted({c.lo for c in self.cells} | {c.hi for c in self.cells if c.hi is not None})
        pts = finite + ([None] if any(c.hi is None for c in self.cells) else [])
        spans = [(pts[0], pts[0])] if len(pts) == 1 else list(zip(pts, pts[1:]))
        out = []
        for a, b in spans:
            x = sample_point(a, b)
            acc = Poly()
            for cell in self.cells:
                if a == b:
                    inside = cell.lo == a
                else:
                    inside = cell.lo < x and (cell.hi is None or x < cell.hi)
                if inside:
                    f = Poly.coerce(integrand(cell))
                    acc = acc + _inner_integral(f, self.inner_var, cell)
            out.append((a, b, acc))
        return out


def _inner_integral(f: Poly, var: str, cell: Cell) -> Poly:
    lims = cell.inner_lo.variables() | cell.inner_hi.variables()
    if not lims and f.variables() <= {var}:
        lo, hi = cell.inner_lo.constant_value(), cell.inner_hi.constant_value()
        return Poly.const(integrate_poly(f, lo, hi, var))
    return f.integrate(var, cell.inner_lo, cell.inner_hi)


def _cap(p: Poly, what: str) -> Poly:
    if p.degree() > DEGREE_CAP:
        raise DegreeCapError(f"{what} has degree {p.degree()} > {DEGREE_CAP}: {p}")
    return p


def _cap_cell(cell: Cell) -> Cell:
    for c in cell.positive.coords:
        _cap(c, "positive part coordinate")
    for name, a in cell.negative.items():
        _cap(a, f"coefficient of {name}")
    _cap(cell.volume, "volume")
    if cell.inner_lo is not None:
        _cap(cell.inner_lo, "wall")
        _cap(cell.inner_hi, "wall")
    return cell


# ---------------------------------------------------------------------------
# one parameter


def _closure_1d(L, D, var, x, support):
    """Enlarge ``support`` by curves that turn negative immediately after ``x``."""
    support = list(support)
    gram = None
    while True:
        a, P = solve_support(L, D, support, gram)
        added = False
        for c in L.neg_curves:
            if c in support:
                continue
            g = L.pair(P, L.curve(c))
            gx = g.evaluate({var: x}) if g.variables() else g.constant_value()
            if gx < 0:
                raise ChamberError(f"{c} meets the positive part negatively at {var}={x}")
            if gx == 0 and sign_right_of(g, x, var) < 0:
                support.append(c)
                added = True
        if not added:
            return support, a, P
        gram = None


def decompose_parametric(L: SurfaceLattice, family, var: str = "u", lo=Fraction(0), hi=None) -> ChamberComplex:
    """Chambers of ``family(var)`` for ``var`` in ``[lo, hi]``.

    With ``hi=None`` the family must be affine and is followed up to its
    pseudo-effective threshold.  Quadratic families need an explicit ``hi``.
    """
    D = L.cls(family)
    deg = max(c.degree(var) for c in D.coords)
    if D.variables() - {var}:
        raise ValueError(f"family depends on variables other than {var}")
    if deg > 2:
        raise DegreeCapError("families must be at most quadratic in the parameter")
    lo = Fraction(lo) if isinstance(lo, int) else lo
    if hi is None:
        if deg > 1:
            raise ValueError("quadratic families need an explicit upper limit")
        A = D.subs({var: lo})
        B = DivClass(L, [c.coeffs(var)[1] if c.degree(var) == 1 else Poly() for c in D.coords])
        end = lo + pseff_threshold(L, A, -B)
    else:
        end = hi
        if not is_pseff(L, D.subs({var: end})):
            raise NotPseudoEffectiveError(f"family is not pseudo-effective at {var}={end}")
    start = decompose(L, D.subs({var: lo}))
    support = list(start.support)
    cells = []
    x = lo
    while True:
        support, a, P = _closure_1d(L, D, var, x, support)
        for c, ac in zip(support, a):
            if ac.evaluate({var: x}) < 0 or (ac.evaluate({var: x}) == 0 and sign_right_of(ac, x, var) < 0):
                raise ChamberError(f"coefficient of {c} becomes negative after {var}={x}")
        wall = end
        for c in L.neg_curves:
            if c in support:
                continue
            g = L.pair(P, L.curve(c))
            if g.is_constant():
                continue
            for r in real_roots(g, x, end, var):
                if r > x and sign_right_of(g, r, var) < 0 and r < wall:
                    wall = r
        for c, ac in zip(support, a):
            if ac.is_constant():
                continue
            for r in real_roots(ac, x, wall, var):
                if r > x and sign_right_of(ac, r, var) < 0:
                    raise ChamberError(f"support curve {c} would leave at {var}={r}")
        cells.append(
            _cap_cell(Cell(x, wall, tuple(support), P, dict(zip(support, a)), L.pair(P, P)))
        )
        if wall == end:
            break
        x = wall
    return ChamberComplex(L, var, tuple(cells))


# ---------------------------------------------------------------------------
# two parameters


def _slope(g: Poly, ivar: str) -> Fraction:
    if g.degree(ivar) > 1:
        raise NonPolynomialWallError(f"pairing {g} is not affine in {ivar}")
    cs = g.coeffs(ivar)
    s = cs[1] if len(cs) > 1 else Poly()
    if not s.is_constant():
        raise NonPolynomialWallError(f"wall slope {s} depends on the outer parameter")
    return s.constant_value()


def _min_groups(cands, a, b, ovar):
    """Split ``[a, b]`` into pieces on which one group of candidates is minimal."""
    cuts = set()
    for i in range(len(cands)):
        for j in range(i + 1, len(cands)):
            diff = cands[i][1] - cands[j][1]
            if diff.is_zero() or diff.is_constant():
                continue
            for r in real_roots(diff, a, b, ovar):
                if r != a and r != b:
                    cuts.add(r)
    pts = [a, *sorted(cuts), b]
    pieces = []
    for s, e in zip(pts, pts[1:]):
        x = sample_point(s, e)
        vals = [f.evaluate({ovar: x}) if f.variables() else f.constant_value() for _, f in cands]
        m = min(vals)
        group = tuple(lab for (lab, _), v in zip(cands, vals) if v == m)
        if pieces and pieces[-1][2] == group:
            pieces[-1] = (pieces[-1][0], e, group)
        else:
            pieces.append((s, e, group))
    return pieces


def _walk_2d(L, D, C, ovar, ivar, a, b, v_cur, support, t, cells, depth=0):
    if depth > 60:
        raise ChamberError("chamber walk did not terminate")
    support = list(support)
    while True:
        gram = support_gram(L, support) if support else None
        while True:
            coeffs, P = solve_support(L, D, support, gram)
            added = []
            info = {}
            for c in L.neg_curves:
                if c in support:
                    continue
                g = L.pair(P, L.curve(c))
                s = _slope(g, ivar)
                g0 = g.subs({ivar: v_cur})
                info[c] = (s, g0)
                if g0.is_zero() and s < 0:
                    added.append(c)
            if not added:
                break
            support.extend(added)
            gram = support_gram(L, support)
        for c, ac in zip(support, coeffs):
            if _slope(ac, ivar) < 0:
                raise ChamberError(f"coefficient of {c} decreases along {ivar}")
        cands = [("<threshold>", t)]
        for c, (s, g0) in info.items():
            if s >= 0:
                continue
            if g0.variables():
                ok = is_nonnegative_on(g0, a, b, ovar)
            else:
                ok = g0.constant_value() >= 0
            if not ok:
                raise ChamberError(f"{c} is met negatively at the start of a chamber")
            cands.append((c, _cap(v_cur - g0 * (1 / s), "wall")))
        pieces = _min_groups(cands, a, b, ovar)
        if len(pieces) > 1:
            for s_, e_, _ in pieces:
                _walk_2d(L, D, C, ovar, ivar, s_, e_, v_cur, support, t, cells, depth + 1)
            return
        group = pieces[0][2]
        v_next = dict(cands)[group[0]]
        if (v_next - v_cur).is_zero() and "<threshold>" in group:
            return
        vol = L.pair(P, P)
        cells.append(
            _cap_cell(
                Cell(a, b, tuple(support), P, dict(zip(support, coeffs)), vol, v_cur, v_next)
            )
        )
        if "<threshold>" in group:
            return
        support.extend(g for g in group if g != "<threshold>")
        v_cur = v_next


def two_param_chambers(L: SurfaceLattice, pieces, curve, ovar: str = "u", ivar: str = "v") -> ChamberComplex:
    """Chambers for ``D(u) - v*curve`` with ``0 <= v <= t(u)``.

    ``pieces`` lists ``(lo, hi, D)`` with ``D`` a class polynomial in ``ovar``;
    ``hi`` may be ``None`` for an unbounded outer range.  ``D`` must be nef.
    """
    C = L.curve(curve) if isinstance(curve, str) else L.cls(curve)
    if not C.is_constant():
        raise ValueError("the direction must be a numeric class")
    cells: list[Cell] = []
    thresholds = []
    for lo, hi, fam in pieces:
        D0 = L.cls(fam)
        if D0.variables() - {ovar}:
            raise ValueError(f"family depends on variables other than {ovar}")
        D = D0 - C * Poly.var(ivar)
        for a, b, t in parametric_threshold(L, D0, C, ovar, lo, hi):
            thresholds.append((a, b, t))
            _walk_2d(L, D, C, ovar, ivar, a, b, Poly(), [], _cap(t, "threshold"), cells)
    return ChamberComplex(L, ovar, tuple(cells), ivar, C, tuple(thresholds))
