"""Zariski decomposition of a single pseudo-effective class on a surface."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import ChamberError, NotPseudoEffectiveError
from ..exact import Poly
from ..lattice import DivClass, SurfaceLattice, determinant, pseff_certificate, solve_linear


@dataclass(frozen=True)
class ZariskiCertificate:
    nef_pairings: dict  # curve -> P.C, all >= 0
    orthogonality: dict  # support curve -> P.C_j, all 0
    minors: tuple  # leading principal minors of the support Gram matrix


@dataclass(frozen=True)
class ZariskiResult:
    positive: DivClass
    negative: dict  # curve -> positive coefficient
    certificate: ZariskiCertificate

    @property
    def support(self) -> tuple:
        return tuple(self.negative)

    def negative_class(self) -> DivClass:
        L = self.positive.lattice
        out = L.zero()
        for c, a in self.negative.items():
            out = out + L.curve(c) * a
        return out


def _duals(L: SurfaceLattice) -> dict:
    """``name -> (C . b_i)`` as plain rationals, cached on the lattice."""
    cache = L.__dict__.get("_dual_cache")
    if cache is None or len(cache) != len(L.curves):
        cache = {n: tuple(p.constant_value() for p in L.pairing_vector(L.curve(n))) for n in L.curves}
        L.__dict__["_dual_cache"] = cache
    return cache


def _meet(x, dual) -> Fraction:
    return sum((a * b for a, b in zip(x, dual) if a and b), Fraction(0))


def support_gram(L: SurfaceLattice, support) -> list[list[Fraction]]:
    duals = _duals(L)
    return [[_meet(L.curves[b], duals[a]) for b in support] for a in support]


def solve_support(L: SurfaceLattice, D: DivClass, support, gram=None) -> tuple[list, DivClass]:
    """Coefficients ``a`` with ``(D - sum a_j C_j) . C_i = 0`` on the support."""
    if not support:
        return [], D
    G = gram if gram is not None else support_gram(L, support)
    rhs = [L.pair(D, L.curve(c)) for c in support]
    a = [Poly.coerce(x) for x in solve_linear(G, rhs)]
    P = D
    for c, ac in zip(support, a):
        P = P - L.curve(c) * ac
    return a, P


def leading_minors(G) -> tuple:
    return tuple(determinant([row[:k] for row in G[:k]]) for k in range(1, len(G) + 1))


def decompose(L: SurfaceLattice, D) -> ZariskiResult:
    """Zariski decomposition by iteratively enlarging the negative support."""
    D = L.cls(D)
    if not D.is_constant():
        raise ValueError("decompose needs a numeric class; use decompose_parametric")
    cert = pseff_certificate(L, D)
    if not cert.pseff:
        raise NotPseudoEffectiveError(f"{D} is not pseudo-effective", cert.separator)
    duals = _duals(L)
    support: list[str] = []
    while True:
        a, P = solve_support(L, D, support)
        x = [c.constant_value() for c in P.coords]
        new = [c for c in L.neg_curves if c not in support and _meet(x, duals[c]) < 0]
        if not new:
            break
        support.extend(new)
    coeffs = [v.constant_value() for v in a]
    if any(v <= 0 for v in coeffs):
        raise ChamberError(f"support coefficients {coeffs} are not all positive for {D}")
    nef = {}
    for c in dict.fromkeys(L.neg_curves + L.eff_generators):
        v = _meet(x, duals[c])
        if v < 0:
            raise ChamberError(f"positive part {P} meets {c} negatively")
        nef[c] = v
    ortho = {c: _meet(x, duals[c]) for c in support}
    minors = leading_minors(support_gram(L, support))
    for k, m in enumerate(minors, start=1):
        if m == 0 or (m > 0) != (k % 2 == 0):
            raise ChamberError("support is not negative definite")
    return ZariskiResult(
        DivClass(L, [p for p in P.coords]),
        dict(zip(support, coeffs)),
        ZariskiCertificate(nef, ortho, minors),
    )


def volume(L: SurfaceLattice, D) -> Fraction:
    """``P^2`` for the positive part ``P`` of ``D``; zero for non-big classes."""
    D = L.cls(D)
    try:
        z = decompose(L, D)
    except NotPseudoEffectiveError:
        return Fraction(0)
    v = L.pair(z.positive, z.positive).constant_value()
    return max(v, Fraction(0))
