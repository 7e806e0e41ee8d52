"""Blow-ups of the plane in points in general position."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from ..errors import LatticeError
from .core import SurfaceLattice


def plane_blowup(n: int, name: str | None = None) -> SurfaceLattice:
    """Lattice ``h, e1..en`` of the plane blown up in ``2 <= n <= 6`` general points.

    Curves: the exceptional curves ``e{i}``, the lines ``l{i}{j}`` through two
    points, for ``n = 5`` the conic ``B`` through all five points and for
    ``n = 6`` the conics ``c{i}`` missing the ``i``-th point.
    """
    if not 2 <= n <= 6:
        raise LatticeError("general position blow-ups are implemented for 2 <= n <= 6")
    dim = n + 1
    basis = ("h", *(f"e{i}" for i in range(1, n + 1)))
    gram = [[Fraction(0)] * dim for _ in range(dim)]
    gram[0][0] = Fraction(1)
    for k in range(1, dim):
        gram[k][k] = Fraction(-1)

    def vec(hc, minus):
        v = [Fraction(0)] * dim
        v[0] = Fraction(hc)
        for i in minus:
            v[i] -= 1
        return v

    curves = {}
    for i in range(1, n + 1):
        e = [Fraction(0)] * dim
        e[i] = Fraction(1)
        curves[f"e{i}"] = e
    for i, j in combinations(range(1, n + 1), 2):
        curves[f"l{i}{j}"] = vec(1, (i, j))
    if n == 5:
        curves["B"] = vec(2, range(1, 6))
    if n == 6:
        for i in range(1, 7):
            curves[f"c{i}"] = vec(2, [j for j in range(1, 7) if j != i])
    K = vec(-3, [])
    for k in range(1, dim):
        K[k] = Fraction(1)
    lines = tuple(curves)
    return SurfaceLattice(
        name or f"Bl{n}P2",
        basis,
        gram,
        K,
        Fraction(9 - n),
        curves,
        lines,
        lines,
    )
