import random

import pytest

from randgen import random_degree, random_form, random_general_problem
from tropref import fixtures as fx
from tropref.evaluation import GeneralProblem, OmegaProblem, default_delta
from tropref.groupring import QuotientGroup, RingElement, binomial_term
from tropref.lattice import TwoForm
from tropref.moduli import Degree, enumerate_trivalent
from tropref.multiplicity import (
    SignUndefined,
    complex_mult_det,
    complex_mult_sink,
    intersection_index,
    marked_factor,
    omega_closed_form,
    omega_leaves,
    pluecker_leaves,
    refined_mult,
    vertex_bivectors,
)

D = fx.LINES_R4


def test_single_vertex_has_multiplicity_one():
    d = Degree.from_slopes([(1, 0), (0, 1), (-1, -1)])
    gp = GeneralProblem.from_kernels(d, {0: [(0, 1)], 1: [(1, 0)]})
    (t,) = enumerate_trivalent(3)
    assert complex_mult_det(t, gp) == 1
    assert complex_mult_sink(t, d, pluecker_leaves(gp)) == 1


@pytest.mark.parametrize("name", ["omega1", "omega2", "omega3", "omega+"])
def test_omega_closed_form_matches_determinant(name):
    om = fx.form(name)
    for e0 in range(5):
        p = OmegaProblem(D, om, e0, default_delta(D, om, e0))
        leaves = omega_leaves(p)
        for t in enumerate_trivalent(5):
            m = complex_mult_det(t, p)
            assert omega_closed_form(t, p) == m
            assert complex_mult_sink(t, D, leaves) == m


def test_sink_on_random_problems_with_marked_points():
    rng = random.Random(5)
    for _ in range(15):
        d = random_degree(rng, 5, 3, marked=1)
        gp = random_general_problem(rng, d)
        leaves = pluecker_leaves(gp)
        for t in enumerate_trivalent(5):
            det = complex_mult_det(t, gp)
            assert {complex_mult_sink(t, d, leaves, v) for v in t.vertices} == {det}


def test_refined_under_omega4():
    om = fx.form("omega4")
    g = QuotientGroup(4, fx.OMEGA4_K)
    target = fx.two_point_expected(g)
    types = {t.name(): t for t in enumerate_trivalent(5)}
    assert refined_mult(types["12//3//45"], D, om, g) == target
    assert refined_mult(types["13//2//45"], D, om, g) == target
    # a vertex joining e2 and e3 has bivector e23, which lies in K
    assert refined_mult(types["23//1//45"], D, om, g).is_zero()


def test_refined_is_oriented_product():
    om = fx.form("omega1")
    g = QuotientGroup(4)
    t = enumerate_trivalent(5)[0]
    expected = RingElement.one(g)
    for _, pi in vertex_bivectors(t, D):
        if sum(a * b for a, b in zip(pi, om.upper())) < 0:
            pi = tuple(-x for x in pi)
        expected = expected * binomial_term(g, pi)
    assert refined_mult(t, D, om, g) == expected


def test_sign_undefined_outside_k():
    om = fx.form("omega0")
    t = next(t for t in enumerate_trivalent(5) if t.name() == "12//3//45")
    with pytest.raises(SignUndefined):
        refined_mult(t, D, om, QuotientGroup(4))
    assert refined_mult(t, D, om, QuotientGroup(4, [(1, 0, 0, 0, 0, 0)])).is_zero()


def test_flat_vertex_gives_zero():
    d = Degree.from_slopes([(1, 0), (1, 0), (-2, 0), (0, 1), (0, -1)])
    om = TwoForm(((0, 1), (-1, 0)))
    g = QuotientGroup(2, [(1,)])
    t = next(t for t in enumerate_trivalent(5) if t.name().startswith("12//"))
    assert refined_mult(t, d, om, g).is_zero()


def test_marked_factor_and_intersection_index():
    d = Degree.from_slopes([(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1), (0, 0, 0)])
    phi = (1, 3, 2)
    assert intersection_index(phi, d) == 6
    # p in a cherry with end i: the curve near p has slope +-n_i
    for i, expected in enumerate((1, 3, 2, 6)):
        cherry = [t for t in enumerate_trivalent(5) if frozenset({i, 4}) in t.edges
                  or frozenset(range(5)) - frozenset({i, 4}) in t.edges]
        assert cherry
        assert {marked_factor(t, d, {4: phi}) for t in cherry} == {expected}
    # balancing: the positive and negative parts of phi on the ends agree
    assert sum(abs(phi[0] * n[0] + phi[1] * n[1] + phi[2] * n[2]) for n in d.slopes) == 2 * 6


def test_random_forms_give_nonnegative_closed_form():
    rng = random.Random(9)
    for _ in range(10):
        d = random_degree(rng, 5, 3)
        om = random_form(rng, 3)
        if not all(any(om.contract(n)) for n in d.slopes):
            continue
        p = OmegaProblem(d, om, 0, default_delta(d, om, 0))
        for t in enumerate_trivalent(5):
            assert omega_closed_form(t, p) == complex_mult_det(t, p) >= 0
