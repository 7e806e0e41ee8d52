"""Zariski decompositions, pointwise and over parameter chambers."""

from .chambers import Cell, ChamberComplex, decompose_parametric, two_param_chambers
from .pointwise import ZariskiCertificate, ZariskiResult, decompose, solve_support, volume


def volume_parametric(complex_: ChamberComplex):
    """Volume polynomial of every cell, in cell order."""
    return [(c.lo, c.hi, c.volume) for c in complex_.cells]


__all__ = [
    "Cell",
    "ChamberComplex",
    "ZariskiCertificate",
    "ZariskiResult",
    "decompose",
    "decompose_parametric",
    "solve_support",
    "two_param_chambers",
    "volume",
    "volume_parametric",
]
