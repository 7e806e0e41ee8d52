from __future__ import annotations

import dataclasses
from fractions import Fraction

import pytest
import sympy

from azdelta.errors import AzdeltaError, LedgerError, MissingIncidenceError
from azdelta.exact import PiecewiseFn, Poly, RationalFn, parse_poly, parse_ratfn, parse_scalar, quad
from azdelta.invariants import (
    FlagSpec,
    LedgerPiece,
    az_combine,
    az_min,
    dp4_conic_bound,
    flag_delta_surface,
    incidence_of,
    lemma34_combine,
    nemuro_bound,
    polarized_tail,
    s_threefold_divisor,
    s_w_curve,
    s_w_point,
    verify_threefold_ledger,
)
from azdelta.lattice import plane_blowup
from azdelta.scenarios import list_fixtures
from azdelta.zariski import decompose_parametric, volume_parametric

from support import fixture, lattice, point, setup

U, W, T = sympy.symbols("u v t")


def cube(a, b, c):
    """(aH1 + bH2 + cH3)^3 from H1H2H3 = 2, H1H3^2 = H2H3^2 = 1, all else 0."""
    return 12 * a * b * c + 3 * a * c**2 + 3 * b * c**2


def frac(x) -> Fraction:
    x = sympy.nsimplify(x)
    return Fraction(int(x.p), int(x.q))


# -- S_X(S) --------------------------------------------------------------------


def test_divisor_invariant_of_h1_against_sympy():
    # nef on [0,1]; beyond 1 the positive part is (2-u)H2 + (3-2u)H3
    vol = sympy.integrate(cube(1 - U, 1, 1), (U, 0, 1)) + sympy.integrate(cube(0, 2 - U, 3 - 2 * U), (U, 1, sympy.Rational(3, 2)))
    assert frac(vol / 18) == Fraction(175, 288)
    assert s_threefold_divisor(setup("threefold-3.3", "H1")) == Fraction(175, 288)


def test_divisor_invariant_of_h3_against_sympy():
    vol = sympy.integrate(cube(1, 1, 1 - U), (U, 0, 1))
    assert frac(vol / 18) == Fraction(4, 9)
    assert s_threefold_divisor(setup("threefold-3.3", "H3")) == Fraction(4, 9)


def test_divisor_invariant_of_zero_length_ledger():
    st = setup("threefold-3.3", "H3")
    X = st.threefold
    trivial = dataclasses.replace(st, tau=Fraction(0), pieces=(LedgerPiece(Fraction(0), Fraction(0), X.anticanonical),))
    assert s_threefold_divisor(trivial) == 0


def test_surface_fixtures_share_the_threefold_values():
    assert s_threefold_divisor(setup("dp5-a1-section4")) == Fraction(175, 288)
    assert s_threefold_divisor(setup("dp4-lemma3.9")) == Fraction(4, 9)
    assert s_threefold_divisor(setup("dp2-lemma3.8")) == Fraction(7, 18)


# -- S(W;C) --------------------------------------------------------------------


@pytest.mark.parametrize(
    "fid, expected",
    [
        ("dp2-lemma3.8", Fraction(31, 36)),
        ("weak-dp4-lemma3.10", Fraction(8, 9)),
        ("dp5-a1-section4", Fraction(137, 144)),
        ("dp5-2a1-section4", Fraction(137, 144)),
        ("dp4-lemma3.9", Fraction(7, 9)),
        ("dp4-lemma3.11", Fraction(1)),
    ],
)
def test_curve_invariant(fid, expected):
    assert s_w_curve(setup(fid), point(fid)).value == expected


def test_curve_invariant_from_hand_written_chambers():
    # weak quartic: 8-4u-4v up to v = 1-u, then (3-u-v)^2 up to the threshold 3-u
    inner = sympy.integrate(8 - 4 * U - 4 * W, (W, 0, 1 - U)) + sympy.integrate((3 - U - W) ** 2, (W, 1 - U, 3 - U))
    assert frac(sympy.integrate(inner, (U, 0, 1)) * 3 / 18) == Fraction(8, 9)
    inner = sympy.integrate(8 - 4 * U - 4 * W, (W, 0, 2 - U))
    assert frac(sympy.integrate(inner, (U, 0, 1)) * 3 / 18) == Fraction(7, 9)


# -- S(W;P) --------------------------------------------------------------------


def test_point_invariant_on_fibre():
    pv = s_w_point(setup("dp4-lemma3.9"), point("dp4-lemma3.9"))
    # (P.C)^2 = 4 over the triangle of area 3/2
    assert pv.base == Fraction(3, 18) * 4 * Fraction(3, 2) == 1
    assert pv.f_p == 0 and pv.total == 1 and pv.relation == "="


def test_point_invariant_of_main_flag():
    pv = s_w_point(setup("dp5-a1-section4"), point("dp5-a1-section4"))
    assert (pv.base, pv.f_p, pv.total) == (Fraction(59, 96), Fraction(71, 288), Fraction(31, 36))


def test_point_invariant_with_upper_incidences():
    pv = s_w_point(setup("dp4-lemma3.11"), point("dp4-lemma3.11"))
    assert pv.base == Fraction(5, 6)
    assert pv.f_p == Fraction(1, 36)
    assert pv.relation == "<="


def test_f_p_nonnegative_everywhere():
    for fid in list_fixtures():
        f = fixture(fid)
        for st in f.setups.values():
            if st.surface is None:
                continue
            for p in f.points.values():
                assert s_w_point(st, p).f_p >= 0, fid


def test_f_p_vanishes_without_incidences():
    for fid in ("dp5-a1-section4", "dp4-lemma3.11", "dp2-lemma3.8"):
        p = point(fid)
        bare = FlagSpec(p.curve, {}, frozenset())
        assert s_w_point(setup(fid), bare).f_p == 0


def test_missing_incidence_is_an_error():
    flag = FlagSpec("e1", {})
    with pytest.raises(MissingIncidenceError):
        incidence_of(flag, "l1")
    with pytest.raises(MissingIncidenceError):
        s_w_point(setup("dp5-a1-section4"), flag)


def test_explicit_incidence_overrides_lies_on():
    flag = FlagSpec("e1", {"l1": 2}, frozenset({"Z"}))
    assert incidence_of(flag, "l1") == 2
    assert incidence_of(flag, "Z") == 1
    assert incidence_of(flag, "l2") == 0


# -- combining -----------------------------------------------------------------


def test_az_min_attained_by_curve():
    b = az_min(Fraction(4, 9), Fraction(8, 9), Fraction(7, 9))
    assert b.value == Fraction(9, 8)
    assert b.attained_by == ("curve",)
    assert b.strict and not b.boundary


def test_az_min_attained_by_point_is_not_strict():
    b = az_min(Fraction(7, 18), Fraction(31, 36), Fraction(1))
    assert b.value == 1 and b.attained_by == ("point",)
    assert not b.strict and not b.boundary
    assert b.two_term == 1


def test_az_min_boundary_case():
    b = az_min(Fraction(1), Fraction(1, 2), Fraction(1, 2))
    assert b.boundary and b.value == 1


def test_az_min_uses_log_discrepancy():
    assert az_min(Fraction(1, 4), Fraction(1), Fraction(1, 4), log_discrepancy=2).value == 2


@pytest.mark.parametrize("args", [(0, 1, 1), (1, -1, 1), (1, 1, 0)])
def test_az_min_rejects_nonpositive(args):
    with pytest.raises(ValueError):
        az_min(*(Fraction(a) for a in args))


def test_az_combine_on_main_flag():
    b = az_combine(setup("dp5-a1-section4"), point("dp5-a1-section4"))
    assert b.value == Fraction(144, 137) and b.strict


# -- surface flags ---------------------------------------------------------------


def test_singular_point_flag():
    L = lattice("dp5-a1-resolution")
    r = flag_delta_surface(L, L.anticanonical, "l0")
    # oracle: the two volume pieces 5-2u^2 and 8-6u+u^2
    s = sympy.integrate(5 - 2 * U**2, (U, 0, 1)) + sympy.integrate(8 - 6 * U + U**2, (U, 1, 2))
    assert frac(s / 5) == r.s_curve == Fraction(17, 15)
    assert r.worst == 1
    assert r.bound == Fraction(15, 17)


def test_pencil_flag_on_two_node_surface():
    L = lattice("dp5-2a1-resolution")
    r = flag_delta_surface(L, L.anticanonical, "pencil", {"general": point("dp5-2a1-resolution", "pencil-general")})
    assert r.s_curve == Fraction(11, 15)
    assert r.worst == Fraction(23, 30)
    assert r.bound == Fraction(30, 23)


def test_line_flag_on_smooth_quartic():
    L = plane_blowup(5)
    r = flag_delta_surface(L, L.anticanonical, "e1")
    # the conic table at t = 0 gives 17/24
    assert r.s_curve == Fraction(17, 24)
    # until the lines meeting e1 are hit, vol(-K - u e1) = 4 - 2u - u^2
    lo, hi, first = volume_parametric(decompose_parametric(L, L.anticanonical - L.curve("e1") * Poly.var("u"), "u", 0, None))[0]
    assert (lo, hi) == (0, 1)
    assert first == parse_poly("4-2*u-u^2")


def test_flag_invariants_scale_with_polarization():
    L = lattice("dp5-a1-resolution")
    for c in ("l0", "e1", "pencil"):
        r1 = flag_delta_surface(L, L.anticanonical, c)
        r3 = flag_delta_surface(L, L.anticanonical * 3, c)
        assert r3.s_curve == 3 * r1.s_curve
        assert all(r3.points[k] == 3 * v for k, v in r1.points.items())


def test_conic_bound_smooth():
    b = dp4_conic_bound("smooth", Fraction(0), None).bound
    assert b.evaluate(Fraction(0)) == Fraction(24, 19)
    # both branches agree where they meet
    assert parse_ratfn("24/(19+8*t+t^2)", "t").evaluate(Fraction(1)) == Fraction(6, 7)
    assert parse_ratfn("6(1+t)/(5+6*t+3*t^2)", "t").evaluate(Fraction(1)) == Fraction(6, 7)
    assert b.evaluate(Fraction(1)) == Fraction(6, 7)
    assert b.evaluate(Fraction(2)) == Fraction(18, 29)


def test_conic_bound_reducible():
    b = dp4_conic_bound("reducible", Fraction(0), None).bound
    assert b.evaluate(Fraction(0)) == Fraction(24, 19)
    assert b.evaluate(Fraction(1)) == Fraction(48, 61)


def test_conic_bound_rejects_unknown_kind():
    with pytest.raises(ValueError):
        dp4_conic_bound("cuspidal")


# -- nemuro and the tail ---------------------------------------------------------


def test_nemuro_without_negative_part():
    nb = nemuro_bound(setup("dp4-lemma3.9"))
    assert nb.shape == "no negative part" and nb.negative_term == 0
    assert nb.lower_bound.evaluate(Fraction(2)) == 3
    assert nb.lower_bound == RationalFn(3 * Poly.var("delta"), Poly.const(2), "delta")


def test_nemuro_symbolic_on_smooth_quintic():
    dom = [(Fraction(0), Fraction(1), Poly.const(1)), (Fraction(1), Fraction(3, 2), parse_poly("(7-4*u)/3"))]
    nb = nemuro_bound(setup("dp5-smooth-lemma3.4"), {"E2": 1}, None, dom)
    assert nb.dominated
    assert nb.negative_term == Fraction(7, 288)
    assert nb.vol_weight == Fraction(80, 81)
    d = Fraction(15, 13)
    assert nb.lower_bound.evaluate(d) == 2592 * d / (2560 + 63 * d)


def test_nemuro_numeric_head_on_main_section():
    nb = nemuro_bound(setup("dp5-a1-section4"), {"E2": 1}, Fraction(1), [(Fraction(0), Fraction(1), 1)])
    assert nb.negative_term == Fraction(7, 288)
    assert nb.coefficient == Fraction(247, 288)


def test_nemuro_errors():
    st = setup("dp5-smooth-lemma3.4")
    with pytest.raises(AzdeltaError):
        nemuro_bound(st, {})
    with pytest.raises(ValueError):
        nemuro_bound(st, {"E2": 0})
    with pytest.raises(ValueError):
        nemuro_bound(st, {"E2": 1}, Fraction(0))


def test_combination_with_known_delta():
    sx = Fraction(175, 288)
    assert lemma34_combine(Fraction(15, 13), sx) == Fraction(38880, 34225)
    assert lemma34_combine(Fraction(1), sx) == Fraction(2592, 2623)
    assert lemma34_combine(Fraction(2560, 2529), sx) == 1
    with pytest.raises(ValueError):
        lemma34_combine(Fraction(0), sx)


def test_fibre_tail_exact_and_enclosed():
    inv = PiecewiseFn("t", (Fraction(0), Fraction(1)), (parse_ratfn("(19+8*t+t^2)/24", "t"),))
    res = polarized_tail(Fraction(18), Fraction(0), Fraction(1), parse_ratfn("1-u", "u"), Poly.var("t") * 4 + 4, inv, eps=Fraction(1, 10**9))
    oracle = sympy.integrate((4 + 4 * T) * (19 + 8 * T + T**2) / 24, (T, 0, 1)) * 3 / 18
    assert res.exact == frac(oracle) == Fraction(143, 144)
    assert res.enclosure.contains(res.exact)
    assert res.enclosure.hi - res.enclosure.lo <= Fraction(1, 10**9)


def test_tail_with_a_quadratic_breakpoint():
    r = parse_scalar("-1/2+1/6*sqrt(21)")
    inv = PiecewiseFn("t", (Fraction(0), r, None), (RationalFn.coerce(1, "t"), parse_ratfn("(6*t^2+18*t+13)/(15+12*t)", "t")))
    res = polarized_tail(
        Fraction(18), Fraction(1), Fraction(3, 2), parse_ratfn("(u-1)/(3-2*u)", "u"), Poly.var("t") * 4 + 5, inv, 3 - 2 * Poly.var("u"), eps=Fraction(1, 10**6)
    )
    assert res.pieces[0].exact == quad(Fraction(47, 441), Fraction(-1, 294), 21)
    assert res.exact == Fraction(247, 2016)
    assert res.enclosure.contains(Fraction(247, 2016))


# -- ledgers -------------------------------------------------------------------


def test_ledgers_pass():
    for name in ("H1", "H3", "H1+H2"):
        assert verify_threefold_ledger(setup("threefold-3.3", name), strict=False).ok
    for fid in ("dp5-a1-section4", "dp4-lemma3.11", "weak-dp4-lemma3.10"):
        assert verify_threefold_ledger(setup(fid), strict=False).ok


def test_ledger_without_negative_part():
    st = setup("threefold-3.3", "H3")
    assert all(not p.negative for p in st.pieces)
    rep = verify_threefold_ledger(st, strict=False)
    assert rep.ok and not [c for c in rep.checks if c.name.startswith("orthogonal")]


def _corrupted():
    st = setup("threefold-3.3", "H1")
    bad = dataclasses.replace(st.pieces[1], negative={"E1": st.pieces[1].negative["E2"]})
    return dataclasses.replace(st, pieces=(st.pieces[0], bad))


def test_corrupted_ledger_fails():
    rep = verify_threefold_ledger(_corrupted(), strict=False)
    names = {c.name for c in rep.failures()}
    assert {"identity[1]", "orthogonal[1].E1"} <= names


def test_corrupted_ledger_raises_when_strict():
    with pytest.raises(LedgerError) as info:
        verify_threefold_ledger(_corrupted())
    assert info.value.check == "identity[1]"


# -- invariance ----------------------------------------------------------------


def test_values_survive_a_change_of_surface_basis():
    st = setup("dp5-a1-section4")
    Sf = st.surface
    n = len(Sf.basis)
    M = [[int(i == j) + (j == (i + 2) % n) for j in range(n)] for i in range(n)]
    R, conv = Sf.rebase(M)
    restriction = {k: tuple(sum(conv[i][j] * row[j] for j in range(n)) for i in range(n)) for k, row in st.restriction.items()}
    moved = dataclasses.replace(st, surface=R, restriction=restriction)
    p = point("dp5-a1-section4")
    assert s_w_curve(moved, p).value == s_w_curve(st, p).value
    assert s_w_point(moved, p) == s_w_point(st, p)
    assert verify_threefold_ledger(moved, strict=False).ok
