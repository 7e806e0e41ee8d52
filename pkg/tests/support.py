"""Shared helpers for the test suite: fixture access and the pointwise oracle."""

from __future__ import annotations

import functools
import random
from fractions import Fraction

from azdelta.exact import Poly, rational_bounds
from azdelta.invariants import dp4_conic_bound, flag_chambers, flag_delta_surface
from azdelta.scenarios import list_fixtures, load_fixture
from azdelta.scenarios.schema import family_class
from azdelta.zariski import decompose, decompose_parametric

TINY = Fraction(1, 10**12)


@functools.lru_cache(maxsize=None)
def fixture(fid: str):
    return load_fixture(fid)


def lattice(fid: str):
    return fixture(fid).lattice


def setup(fid: str, name: str = "S"):
    return fixture(fid).setups[name]


def point(fid: str, name: str = "P"):
    return fixture(fid).points[name]


def rational_between(lo, hi, rng: random.Random) -> Fraction:
    """A random rational strictly inside ``(lo, hi)``; ``hi=None`` means lo + 4."""
    a = rational_bounds(lo, TINY)[1] if not isinstance(lo, (int, Fraction)) else Fraction(lo)
    if hi is None:
        b = a + 4
    else:
        b = rational_bounds(hi, TINY)[0] if not isinstance(hi, (int, Fraction)) else Fraction(hi)
    m = rng.randint(7, 97)
    return a + (b - a) * Fraction(rng.randint(1, m - 1), m)


def _at(p: Poly, env: dict):
    p = p.subs(env)
    return p.constant_value()


def cell_samples(cell, var: str, inner: str | None, rng: random.Random, n: int = 5):
    """``n`` random interior points ``{var: u[, inner: v]}`` of a chamber cell."""
    out = []
    for _ in range(n):
        u = rational_between(cell.lo, cell.hi, rng)
        env = {var: u}
        if inner is not None and cell.inner_lo is not None:
            lo, hi = _at(cell.inner_lo, env), _at(cell.inner_hi, env)
            if not lo < hi:
                continue
            env[inner] = rational_between(lo, hi, rng)
        out.append(env)
    return out


def pointwise_disagreements(cx, rng: random.Random, n: int = 5) -> list[str]:
    """Compare every cell of ``cx`` against :func:`decompose` at random samples."""
    L = cx.lattice
    bad = []
    for k, cell in enumerate(cx.cells):
        for env in cell_samples(cell, cx.var, cx.inner_var, rng, n):
            P = cell.positive.subs(env)
            N = {c: _at(a, env) for c, a in cell.negative.items()}
            D = P + cell.negative_class().subs(env)
            res = decompose(L, D)
            want_N = {c: a for c, a in N.items() if a != 0}
            if res.negative != want_N or not L.numerically_equal(res.positive, P):
                bad.append(f"cell {k} at {env}: pointwise N={res.negative}, parametric N={want_N}")
    return bad


@functools.lru_cache(maxsize=None)
def all_complexes():
    """Every chamber complex the bundled fixtures give rise to, with a label."""
    seen = []
    for fid in list_fixtures():
        f = fixture(fid)
        for sname, st in f.setups.items():
            if st.surface is None:
                continue
            for pname, pt in f.points.items():
                seen.append((f"{fid}:{sname}:{pt.curve}", flag_chambers(st, pt.curve)))
        for name, fam in f.families.items():
            D = family_class(f.lattice, fam)
            seen.append((f"{fid}:family {name}", decompose_parametric(f.lattice, D, fam.var, fam.lo, fam.hi)))
        if fid.endswith("resolution"):
            L = f.lattice
            for c in L.neg_curves:
                seen.append((f"{fid}:flag {c}", flag_delta_surface(L, L.anticanonical, c).complex))
                cx = decompose_parametric(L, L.anticanonical - L.curve(c) * Poly.var("u"), "u", 0, None)
                seen.append((f"{fid}:-K-u{c}", cx))
    for kind in ("smooth", "reducible"):
        for label, r in dp4_conic_bound(kind, Fraction(0), Fraction(3)).cases.items():
            seen.append((f"dp4 {kind} {label}", r.complex))
    return tuple(seen)


@functools.lru_cache(maxsize=None)
def pointwise_report(seed: int = 2024, n: int = 5) -> tuple:
    """Disagreements over :func:`all_complexes`, computed once per session."""
    rng = random.Random(seed)
    bad = []
    for label, cx in all_complexes():
        bad += [f"{label}: {b}" for b in pointwise_disagreements(cx, rng, n)]
    return tuple(bad)
