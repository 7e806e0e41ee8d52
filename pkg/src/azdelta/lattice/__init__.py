"""Intersection lattices, divisor classes and their cones."""

from .cones import (
    PseffCertificate,
    is_nef,
    is_pseff,
    nef_pairings,
    parametric_threshold,
    pseff_certificate,
    pseff_threshold,
)
from .blowup import plane_blowup
from .core import DivClass, SurfaceLattice, ThreefoldLattice, inertia
from .lp import LPResult, determinant, invert, linprog_exact, rank_pivots, solve_linear


def pair(L, D1, D2):
    """Intersection number of two classes on a surface lattice."""
    return L.pair(D1, D2)


def triple(L, D1, D2, D3):
    """Triple intersection number on a threefold lattice."""
    return L.triple(D1, D2, D3)


__all__ = [
    "DivClass",
    "LPResult",
    "PseffCertificate",
    "SurfaceLattice",
    "ThreefoldLattice",
    "determinant",
    "inertia",
    "invert",
    "is_nef",
    "is_pseff",
    "linprog_exact",
    "nef_pairings",
    "pair",
    "plane_blowup",
    "parametric_threshold",
    "pseff_certificate",
    "pseff_threshold",
    "rank_pivots",
    "solve_linear",
    "triple",
]
