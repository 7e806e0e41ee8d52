"""Exact arithmetic: scalars, polynomials, rational and piecewise functions."""

from .integrate import (
    Enclosure,
    integrate_numeric,
    integrate_piecewise,
    integrate_poly,
    recording,
)
from .parse import ParseError, parse_expr, parse_poly, parse_ratfn, parse_scalar
from .piecewise import PiecewiseFn, combine, pointwise_min
from .poly import Poly
from .ratfn import RationalFn
from .roots import (
    is_nonnegative_on,
    real_roots,
    roots_in_interval,
    sample_point,
    sign_intervals,
    sign_right_of,
)
from .scalar import (
    QuadElem,
    Scalar,
    format_scalar,
    quad,
    rational_bounds,
    scalar_sign,
    sqrt_scalar,
    to_scalar,
)

__all__ = [
    "Enclosure",
    "ParseError",
    "PiecewiseFn",
    "Poly",
    "QuadElem",
    "RationalFn",
    "Scalar",
    "combine",
    "format_scalar",
    "integrate_numeric",
    "integrate_piecewise",
    "integrate_poly",
    "is_nonnegative_on",
    "parse_expr",
    "parse_poly",
    "parse_ratfn",
    "parse_scalar",
    "pointwise_min",
    "quad",
    "rational_bounds",
    "real_roots",
    "recording",
    "roots_in_interval",
    "sample_point",
    "scalar_sign",
    "sign_intervals",
    "sign_right_of",
    "sqrt_scalar",
    "to_scalar",
]
