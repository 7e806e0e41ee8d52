"""Abban-Zhuang invariants: threefold ledgers, flags and the derived bounds."""

from .bounds import NemuroBound, TailPiece, TailResult, lemma34_combine, nemuro_bound, polarized_tail
from .flags import (
    AZBound,
    FlagSpec,
    FlagValue,
    PointValue,
    az_combine,
    az_min,
    flag_chambers,
    incidence_of,
    s_threefold_divisor,
    s_w_curve,
    s_w_point,
)
from .setup import Check, LedgerPiece, LedgerReport, ThreefoldSetup, verify_threefold_ledger
from .surface import ConicBound, SurfaceFlagResult, auto_points, dp4_conic_bound, flag_delta_surface

__all__ = [
    "AZBound",
    "Check",
    "ConicBound",
    "FlagSpec",
    "FlagValue",
    "LedgerPiece",
    "LedgerReport",
    "NemuroBound",
    "PointValue",
    "SurfaceFlagResult",
    "TailPiece",
    "TailResult",
    "ThreefoldSetup",
    "auto_points",
    "az_combine",
    "az_min",
    "dp4_conic_bound",
    "flag_chambers",
    "flag_delta_surface",
    "incidence_of",
    "lemma34_combine",
    "nemuro_bound",
    "polarized_tail",
    "s_threefold_divisor",
    "s_w_curve",
    "s_w_point",
    "verify_threefold_ledger",
]
