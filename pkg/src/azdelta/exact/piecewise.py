"""Piecewise functions on an interval of the real line."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .poly import Poly
from .ratfn import RationalFn
from .roots import real_roots, sample_point
from .scalar import Scalar, format_scalar


def _as_ratfn(f, var: str) -> RationalFn:
    if isinstance(f, RationalFn):
        return f
    return RationalFn(Poly.coerce(f), 1, var)


@dataclass(frozen=True)
class PiecewiseFn:
    """``pieces[i]`` is valid on ``[breakpoints[i], breakpoints[i+1]]``.

    A final breakpoint of ``None`` stands for +infinity.
    """

    var: str
    breakpoints: tuple
    pieces: tuple

    def __post_init__(self):
        if len(self.breakpoints) != len(self.pieces) + 1:
            raise ValueError("need one more breakpoint than pieces")
        bps = [b for b in self.breakpoints if b is not None]
        if any(b is None for b in self.breakpoints[:-1]):
            raise ValueError("only the last breakpoint may be unbounded")
        if any(a > b for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be non-decreasing")

    @classmethod
    def single(cls, f, lo, hi, var: str) -> PiecewiseFn:
        return cls(var, (lo, hi), (f,))

    @property
    def lo(self):
        return self.breakpoints[0]

    @property
    def hi(self):
        return self.breakpoints[-1]

    def intervals(self):
        for i, f in enumerate(self.pieces):
            yield self.breakpoints[i], self.breakpoints[i + 1], f

    def piece_at(self, x):
        for a, b, f in self.intervals():
            if x >= a and (b is None or x <= b):
                return f
        raise ValueError(f"{x} outside the domain of {self.var}")

    def evaluate(self, x) -> Scalar:
        f = self.piece_at(x)
        if isinstance(f, (Poly, RationalFn)):
            return f.evaluate({self.var: x}) if isinstance(f, Poly) else f.evaluate(x)
        return f

    __call__ = evaluate

    def is_continuous(self) -> bool:
        for i in range(1, len(self.pieces)):
            x = self.breakpoints[i]
            if _eval(self.pieces[i - 1], x, self.var) != _eval(self.pieces[i], x, self.var):
                return False
        return True

    def map(self, fn) -> PiecewiseFn:
        return PiecewiseFn(self.var, self.breakpoints, tuple(fn(p) for p in self.pieces))

    def simplified(self) -> PiecewiseFn:
        """Merge neighbouring pieces given by the same function."""
        bps = [self.breakpoints[0]]
        pieces: list = []
        for a, b, f in self.intervals():
            if a == b and pieces:
                continue
            if pieces and _as_ratfn(pieces[-1], self.var) == _as_ratfn(f, self.var):
                bps[-1] = b
                continue
            pieces.append(f)
            bps.append(b)
        if not pieces:
            return self
        return PiecewiseFn(self.var, tuple(bps), tuple(pieces))

    def __str__(self):
        parts = []
        for a, b, f in self.intervals():
            hi = "inf" if b is None else format_scalar(b)
            parts.append(f"[{format_scalar(a)}, {hi}]: {f}")
        return "; ".join(parts)


def _eval(f, x, var):
    if isinstance(f, Poly):
        return f.evaluate({var: x})
    if isinstance(f, RationalFn):
        return f.evaluate(x)
    return f


def refine(fns: Sequence[PiecewiseFn]) -> list:
    """Common breakpoints of functions sharing one domain."""
    lo, hi = fns[0].lo, fns[0].hi
    pts = set()
    for f in fns:
        if f.lo != lo or f.hi != hi:
            raise ValueError("piecewise functions on different domains")
        pts.update(b for b in f.breakpoints if b is not None)
    finite = sorted(pts)
    return finite + ([None] if hi is None else [])


def combine(fns: Sequence[PiecewiseFn], op) -> PiecewiseFn:
    """Apply ``op`` piece by piece on the common refinement."""
    cuts = refine(fns)
    var = fns[0].var
    pieces = []
    for a, b in zip(cuts, cuts[1:]):
        x = sample_point(a, b)
        pieces.append(op(*[f.piece_at(x) for f in fns]))
    return PiecewiseFn(var, tuple(cuts), tuple(pieces))


def pointwise_min(fns: Sequence[PiecewiseFn]) -> PiecewiseFn:
    """Exact lower envelope; crossings split the domain at algebraic points."""
    cuts = refine(fns)
    var = fns[0].var
    bps: list = [cuts[0]]
    pieces: list = []
    for a, b in zip(cuts, cuts[1:]):
        x0 = sample_point(a, b)
        local = [_as_ratfn(f.piece_at(x0), var) for f in fns]
        sub = {a, b} - {None}
        for i in range(len(local)):
            for j in range(i + 1, len(local)):
                diff = local[i] - local[j]
                if diff.is_constant():
                    continue
                lo_ = a
                for r in real_roots(diff.num, lo_, b):
                    sub.add(r)
        pts = sorted(sub) + ([None] if b is None else [])
        for s, e in zip(pts, pts[1:]):
            x = sample_point(s, e)
            best = min(range(len(local)), key=lambda k: local[k].evaluate(x))
            pieces.append(_simplify_piece(local[best]))
            bps.append(e)
    return PiecewiseFn(var, tuple(bps), tuple(pieces)).simplified()


def _simplify_piece(f: RationalFn):
    if f.is_constant():
        return f.constant_value()
    return f.num if f.is_polynomial() else f


def constant(value, lo, hi, var: str) -> PiecewiseFn:
    return PiecewiseFn(var, (lo, hi), (Fraction(value) if isinstance(value, int) else value,))
