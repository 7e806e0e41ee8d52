"""Nef and pseudo-effective cones through exact linear programming."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import NotPseudoEffectiveError, UnboundedError
from ..exact import Poly, real_roots, sample_point
from .core import DivClass, SurfaceLattice, ThreefoldLattice
from .lp import invert, linprog_exact


@dataclass(frozen=True)
class PseffCertificate:
    """Either ``D = sum coefficients[g] * g`` or a separating class.

    For a non-effective ``D`` the ``separator`` pairs non-positively with every
    generator and positively with ``D``.
    """

    pseff: bool
    coefficients: dict | None = None
    separator: DivClass | None = None


def _generator_columns(L, gens):
    """Column vectors for the cone generators, in the LP coordinates of ``L``."""
    if isinstance(L, SurfaceLattice):
        cols = []
        for g in gens:
            v = L.pairing_vector(L.curve(g))
            cols.append([v[i].constant_value() for i in L.pivots])
        return cols
    return [list(L.classes[g]) for g in gens]


def _target(L, D: DivClass) -> list:
    if isinstance(L, SurfaceLattice):
        v = L.pairing_vector(D)
        return [v[i] for i in L.pivots]
    return list(D.coords)


def _scalar_target(L, D):
    return [p.constant_value() for p in _target(L, D)]


def _transpose(cols, m):
    return [[col[i] for col in cols] for i in range(m)]


def _separator(L, y) -> DivClass:
    if isinstance(L, SurfaceLattice):
        # y acts on pairings with the pivot rows: the functional is a class
        coords = [Fraction(0)] * len(L.basis)
        for yi, k in zip(y, L.pivots):
            coords[k] = yi
        return DivClass(L, coords)
    # for threefolds the functional lives on coordinates; report it as stored
    return DivClass(L, list(y))


def pseff_certificate(L, D) -> PseffCertificate:
    D = L.cls(D)
    gens = list(L.eff_generators)
    cols = _generator_columns(L, gens)
    b = _scalar_target(L, D)
    m = len(b)
    res = linprog_exact([0] * len(cols), _transpose(cols, m), b)
    if res.status == "infeasible":
        return PseffCertificate(False, separator=_separator(L, res.farkas))
    coeffs = {g: x for g, x in zip(gens, res.x) if x}
    return PseffCertificate(True, coefficients=coeffs)


def is_pseff(L, D) -> bool:
    return pseff_certificate(L, D).pseff


def nef_pairings(L, D) -> dict:
    """Pairings of ``D`` with the curves that test nefness."""
    D = L.cls(D)
    if isinstance(L, ThreefoldLattice):
        return {f"ray{r}": L.curve_pairing(D, r) for r in range(len(L.mori))}
    names = dict.fromkeys(L.neg_curves + L.eff_generators)
    return {c: L.pair(D, L.curve(c)) for c in names}


def is_nef(L, D) -> bool:
    return all(p.constant_value() >= 0 for p in nef_pairings(L, D).values())


def pseff_threshold(L, D, C) -> Fraction:
    """``sup{t : D - t*C pseudo-effective}`` by maximising ``t`` in one LP."""
    D, C = L.cls(D), L.cls(C)
    gens = list(L.eff_generators)
    cols = _generator_columns(L, gens)
    b = _scalar_target(L, D)
    cdir = _scalar_target(L, C)
    m = len(b)
    A = _transpose([cdir] + cols, m)
    res = linprog_exact([1] + [0] * len(cols), A, b)
    if res.status == "infeasible":
        raise NotPseudoEffectiveError(f"{D} is not pseudo-effective", _separator(L, res.farkas))
    if res.status == "unbounded":
        raise UnboundedError(f"{D} - t*({C}) stays pseudo-effective for all t")
    return res.x[0]


def parametric_threshold(L, D: DivClass, C: DivClass, var: str, lo, hi, _depth: int = 0) -> list:
    """Threshold ``t(var)`` for a family ``D(var)`` on ``[lo, hi]``.

    Returns ``[(a, b, poly)]`` covering the interval.  An optimal basis found
    at a sample point stays optimal while its basic solution is non-negative,
    so ``t`` is polynomial on each such piece.
    """
    if _depth > 40:
        raise RuntimeError("parametric threshold failed to stabilise")
    D, C = L.cls(D), L.cls(C)
    gens = list(L.eff_generators)
    cols = _generator_columns(L, gens)
    bpoly = _target(L, D)
    cdir = _scalar_target(L, C)
    m = len(bpoly)
    A = _transpose([cdir] + cols, m)
    x0 = sample_point(lo, hi)
    b0 = [p.evaluate({var: x0}) for p in bpoly]
    res = linprog_exact([1] + [0] * len(cols), A, b0)
    if res.status == "infeasible":
        raise NotPseudoEffectiveError(f"{D.subs({var: x0})} is not pseudo-effective")
    if res.status == "unbounded":
        raise UnboundedError("threshold is unbounded")
    rows, basis = res.rows, res.basis
    B = [[A[r][j] for j in basis] for r in rows]
    Binv = invert(B)
    xb = []
    for row in Binv:
        acc = Poly()
        for a, r in zip(row, rows):
            if a:
                acc = acc + bpoly[r] * a
        xb.append(acc)
    t = Poly()
    for j, val in zip(basis, xb):
        if j == 0:
            t = val
    cuts = set()
    for val in xb:
        if not val.is_constant():
            for r in real_roots(val, lo, hi, var):
                if r != lo and r != hi:
                    cuts.add(r)
    if not cuts:
        return [(lo, hi, t)]
    pts = [lo, *sorted(cuts), hi]
    out = []
    for a, b in zip(pts, pts[1:]):
        out.extend(parametric_threshold(L, D, C, var, a, b, _depth + 1))
    return _merge(out)


def _merge(pieces):
    out = []
    for a, b, t in pieces:
        if out and out[-1][2] == t:
            out[-1] = (out[-1][0], b, t)
        else:
            out.append((a, b, t))
    return out
