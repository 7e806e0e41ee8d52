from __future__ import annotations

import dataclasses
import random
from fractions import Fraction

import pytest

from azdelta.errors import NotPseudoEffectiveError
from azdelta.exact import Poly, parse_poly
from azdelta.invariants import flag_chambers
from azdelta.lattice import SurfaceLattice, determinant
from azdelta.zariski import decompose, decompose_parametric, two_param_chambers, volume, volume_parametric

from support import all_complexes, cell_samples, lattice, pointwise_disagreements, pointwise_report, rational_between, setup

u = Poly.var("u")
v = Poly.var("v")


def assert_certified(L, D, res):
    """Check a decomposition from first principles, not from its own certificate."""
    assert L.numerically_equal(res.positive + res.negative_class(), D)
    for c in L.neg_curves + L.eff_generators:
        assert L.pair(res.positive, L.curve(c)).constant_value() >= 0
    for c, a in res.negative.items():
        assert a > 0
        assert L.pair(res.positive, L.curve(c)) == 0
    names = list(res.negative)
    for k in range(1, len(names) + 1):
        G = [[L.pair(L.curve(a), L.curve(b)).constant_value() for b in names[:k]] for a in names[:k]]
        assert determinant(G) * (-1) ** k > 0


# -- decompose ---------------------------------------------------------------


def test_anticanonical_plus_fibre_on_double_plane():
    L = lattice("dp2-lemma3.8")
    D = L.anticanonical + L.curve("C") * 2
    res = decompose(L, D)
    assert res.negative == {}
    assert volume(L, D) == 10  # 10-8u-4v at u=v=0


def test_nef_class_is_its_own_positive_part():
    L = lattice("dp5-a1-resolution")
    res = decompose(L, L.anticanonical)
    assert res.negative == {} and res.positive.values() == L.anticanonical.values()


def test_weak_quartic_at_a_wall_crossing_sample():
    L = lattice("weak-dp4-lemma3.10")
    x, y = Fraction(1), Fraction(3, 2)
    D = L.cls({"C": 3 - x - y, "e1": 1, "e2": 1})
    res = decompose(L, D)
    # the table's coefficient (u+v-1)/2 evaluated at the sample
    assert res.negative == {"e1": (x + y - 1) / 2, "e2": (x + y - 1) / 2} == {"e1": Fraction(3, 4), "e2": Fraction(3, 4)}
    assert volume(L, D) == (x + y - 3) ** 2 == Fraction(1, 4)
    assert_certified(L, D, res)


def test_certificate_fields_are_consistent():
    L = lattice("dp5-2a1-resolution")
    D = L.anticanonical - L.curve("l1") * Fraction(5, 2)
    res = decompose(L, D)
    cert = res.certificate
    assert set(cert.orthogonality) == set(res.negative)
    assert all(x == 0 for x in cert.orthogonality.values())
    assert all(x >= 0 for x in cert.nef_pairings.values())
    assert [m * (-1) ** (k + 1) > 0 for k, m in enumerate(cert.minors)] == [True] * len(cert.minors)


def test_not_pseff_is_refused():
    L = lattice("dp5-a1-resolution")
    with pytest.raises(NotPseudoEffectiveError):
        decompose(L, L.anticanonical - L.curve("l0") * 3)


def test_certified_on_random_effective_classes():
    rng = random.Random(5)
    for fid in ("dp5-a1-resolution", "dp5-2a1-resolution", "dp5-a1-section4", "dp4-conic-parametric"):
        L = lattice(fid)
        for _ in range(8):
            D = L.anticanonical * rng.randint(0, 2)
            for c in rng.sample(list(L.eff_generators), 3):
                D = D + L.curve(c) * Fraction(rng.randint(0, 6), rng.randint(1, 3))
            assert_certified(L, D, decompose(L, D))


def test_curve_order_does_not_matter():
    rng = random.Random(9)
    for fid in ("dp5-a1-resolution", "dp5-2a1-resolution", "dp4-conic-parametric"):
        L = lattice(fid)
        for _ in range(4):
            order = list(L.neg_curves)
            rng.shuffle(order)
            M = dataclasses.replace(L, neg_curves=tuple(order), eff_generators=tuple(reversed(L.eff_generators)))
            D = L.anticanonical
            for c in rng.sample(order, 2):
                D = D + L.curve(c) * rng.randint(1, 4)
            a, b = decompose(L, D), decompose(M, M.cls(D.values()))
            assert a.negative == b.negative
            assert a.positive.values() == b.positive.values()


# -- one parameter ------------------------------------------------------------


def test_singular_point_pencil_on_one_node_resolution():
    L = lattice("dp5-a1-resolution")
    cx = decompose_parametric(L, L.anticanonical - L.curve("l0") * u, "u", 0, None)
    assert [(c.lo, c.hi) for c in cx.cells] == [(0, 1), (1, 2)]
    assert cx.cells[0].negative == {}
    assert cx.cells[1].negative == {"e1": u - 1, "e2": u - 1, "e3": u - 1}


def test_line_through_both_nodes():
    L = lattice("dp5-2a1-resolution")
    cx = decompose_parametric(L, L.anticanonical - L.curve("l1") * u, "u", 0, None)
    assert [(c.lo, c.hi) for c in cx.cells] == [(0, 2), (2, 3)]
    assert [c.pairing("l1") for c in cx.cells] == [Poly.const(1), 3 - u]


def test_nef_direction_gives_one_cell():
    L = lattice("dp5-a1-resolution")
    cx = decompose_parametric(L, L.anticanonical * (1 - u), "u", 0, None)
    assert [(c.lo, c.hi) for c in cx.cells] == [(0, 1)]
    assert cx.cells[0].negative == {}
    assert volume_parametric(cx) == [(0, 1, 5 * (1 - u) ** 2)]


# -- two parameters -----------------------------------------------------------


def test_reducible_fibre_walls():
    cx = flag_chambers(setup("dp4-lemma3.11"), "C")
    walls = [(c.inner_lo, c.inner_hi) for c in cx.cells]
    assert walls == [(0, 1), (1, 2 - u), (2 - u, Fraction(5, 2) - u)]
    assert [c.pairing("C") for c in cx.cells] == [1 + v, Poly.const(2), 10 - 4 * u - 4 * v]


def test_main_flag_walls_beyond_one():
    cx = flag_chambers(setup("dp5-a1-section4"), "e1")
    late = [c for c in cx.cells if c.lo == 1]
    assert [c.inner_hi for c in late] == [3 - 2 * u, 6 - 4 * u]
    assert [c.pairing("e1") for c in late] == [parse_poly("(4+v-2*u)/2"), parse_poly("(10-6*u-v)/2")]


def test_fibre_direction_never_hits_a_wall():
    cx = flag_chambers(setup("dp4-lemma3.9"), "C")
    assert len(cx.cells) == 1 and cx.cells[0].support == ()


def test_quartic_walls_have_low_degree():
    L = lattice("dp4-conic-parametric")
    cx = two_param_chambers(L, [(Fraction(0), Fraction(1), L.anticanonical + L.curve("e1") * u)], "e1", "u", "v")
    assert all(c.inner_hi.degree("u") <= 2 for c in cx.cells)


# -- volumes ------------------------------------------------------------------


def test_quartic_fibre_volume():
    cx = flag_chambers(setup("dp4-lemma3.9"), "C")
    assert cx.cells[0].volume == 8 - 4 * u - 4 * v


def test_volume_vanishes_at_threshold():
    cx = flag_chambers(setup("weak-dp4-lemma3.10"), "C")
    (lo, hi, t), = cx.threshold
    assert t == 3 - u
    last = cx.cells[-1]
    assert last.volume.subs({"v": t}).is_zero()


def test_quintic_slice_volumes():
    L = lattice("dp5-a1-section4")
    D = L.cls({"e1": 2 - v, "l1": 2, "l2": 1})
    cx = decompose_parametric(L, D, "v", 0, 2)
    pieces = volume_parametric(cx)
    assert [p for _, _, p in pieces] == [parse_poly("(10-4*v-v^2)/2"), parse_poly("(2-v)(6-v)/2")]


# -- properties ---------------------------------------------------------------


def test_parametric_agrees_with_pointwise_everywhere():
    assert not pointwise_report()


def test_pointwise_oracle_detects_a_wrong_cell():
    cx = flag_chambers(setup("dp5-a1-section4"), "e1")
    cell = cx.cells[1]
    L = cx.lattice
    # move half of the negative part into the positive part: same class, wrong split
    half = cell.negative["l1"] * Fraction(1, 2)
    wrong = dataclasses.replace(cell, negative={"l1": half}, positive=cell.positive + L.curve("l1") * half)
    assert not pointwise_disagreements(dataclasses.replace(cx, cells=(cell,)), random.Random(1), 3)
    assert pointwise_disagreements(dataclasses.replace(cx, cells=(wrong,)), random.Random(1), 3)


def test_volume_continuous_across_walls():
    for label, cx in all_complexes():
        cells = cx.cells
        for a in cells:
            for b in cells:
                if cx.inner_var is None:
                    if a.hi is not None and a.hi == b.lo:
                        assert a.volume.subs({cx.var: a.hi}) == b.volume.subs({cx.var: a.hi}), label
                elif a.lo == b.lo and a.hi == b.hi and a.inner_hi == b.inner_lo:
                    assert a.volume.subs({cx.inner_var: a.inner_hi}) == b.volume.subs({cx.inner_var: a.inner_hi}), label


def test_volume_non_increasing_and_negative_parts_nonnegative():
    rng = random.Random(77)
    for label, cx in all_complexes():
        if cx.inner_var is None:
            continue
        for cell in cx.cells:
            dv = cell.volume.diff(cx.inner_var)
            for env in cell_samples(cell, cx.var, cx.inner_var, rng, 3):
                assert dv.subs(env).constant_value() <= 0, label
                for a in cell.negative.values():
                    assert a.subs(env).constant_value() >= 0, label


def test_volume_zero_at_every_threshold():
    rng = random.Random(4)
    for label, cx in all_complexes():
        for lo, hi, t in cx.threshold:
            x = rational_between(lo, hi, rng)
            end = [c for c in cx.cells if c.contains(x) and c.inner_hi is not None and c.inner_hi.subs({cx.var: x}) == t.subs({cx.var: x})]
            assert end, label
            env = {cx.var: x, cx.inner_var: t.subs({cx.var: x}).constant_value()}
            assert end[0].volume.subs(env).constant_value() == 0, label


def test_explicit_lattice_without_negative_curves():
    L = SurfaceLattice("P1xP1", ("f", "g"), [[0, 1], [1, 0]], (-2, -2), eff_generators=("f", "g"))
    cx = two_param_chambers(L, [(Fraction(0), Fraction(1), L.cls({"f": 2 - u, "g": 2}))], "f", "u", "v")
    assert len(cx.cells) == 1
    assert cx.cells[0].volume == 2 * 2 * (2 - u - v)
