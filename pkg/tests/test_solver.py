import random
from fractions import Fraction

import pytest

from randgen import random_degree, random_general_problem
from tropref import fixtures as fx
from tropref.evaluation import (
    GeneralProblem,
    OmegaProblem,
    codomain_basis_general,
    default_delta,
    evaluate_rows,
)
from tropref.lattice import Sublattice, TwoForm
from tropref.moduli import Degree, enumerate_trivalent
from tropref.multiplicity import intersection_index
from tropref.solver import (
    HypothesisViolation,
    NonGeneric,
    displayed_identity,
    epsilon_signs,
    greg_components,
    invariant_omega,
    k_omega,
    menelaus_sum,
    omega_group,
    solve,
    solve_generic,
)

D = fx.LINES_R4


def test_solutions_reproduce_targets():
    om = fx.form("omega1")
    p = OmegaProblem(D, om, 0, default_delta(D, om, 0))
    targets, sols = solve_generic(p, random.Random(1))
    assert sols
    for s in sols:
        assert all(l > 0 for l in s.lengths)
        assert menelaus_sum(s, D, om) == 0


def test_targets_on_a_wall_are_rejected():
    rng = random.Random(4)
    d = random_degree(rng, 5, 3)
    gp = random_general_problem(rng, d)
    rows = codomain_basis_general(gp)
    t = enumerate_trivalent(5)[0]
    # a curve of this type with one bounded edge of length zero
    targets = evaluate_rows(t, d, rows, (3, -2, 7), (0, 5))
    with pytest.raises(NonGeneric):
        solve(gp, targets)


def test_curve_is_recovered():
    rng = random.Random(8)
    d = random_degree(rng, 5, 3)
    gp = random_general_problem(rng, d)
    rows = codomain_basis_general(gp)
    for t in enumerate_trivalent(5):
        targets = evaluate_rows(t, d, rows, (1, 2, 3), (4, 7))
        try:
            sols = solve(gp, targets)
        except NonGeneric:
            continue
        mine = [s for s in sols if s.ctype == t]
        assert mine and mine[0].lengths == (Fraction(4), Fraction(7))


def test_k_omega_examples():
    assert k_omega(D, fx.form("omega1")).rank == 0
    assert k_omega(D, fx.form("omega0")) == Sublattice(6, ((1, 0, 0, 0, 0, 0),))
    assert k_omega(D, fx.form("omega4")).basis == tuple(fx.OMEGA4_K)
    # a symplectic form in the plane vanishes on no bivector
    planar = Degree.from_slopes([(1, 0), (0, 1), (-1, -1)])
    assert k_omega(planar, TwoForm(((0, 1), (-1, 0)))).rank == 0


def test_epsilon_stable_under_edge_reordering():
    gp = GeneralProblem.from_kernels(D, fx.GENERAL_KERNELS)
    om = fx.form("omega3")
    base = epsilon_signs(gp, om)
    types = enumerate_trivalent(5)
    swapped = epsilon_signs(gp, om, edge_orders={t: tuple(reversed(t.edges)) for t in types})
    assert base == swapped


def test_epsilon_hypothesis_violation():
    tp = GeneralProblem.from_kernels(D, fx.TWO_POINT_KERNELS)
    with pytest.raises(HypothesisViolation):
        epsilon_signs(tp, fx.form("omega1"))


def test_enhanced_marked_point_relation():
    om = TwoForm.from_upper([[0, 3, -5], [0, 0, 7], [0, 0, 0]])
    d0 = Degree.from_slopes([(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)])
    d1 = Degree.from_slopes(list(d0.slopes) + [(0, 0, 0)])
    phi = (1, 3, 2)
    plain = invariant_omega(d0, om, 0, trials=4)
    marked = invariant_omega(d1, om, 0, trials=4, phis={4: phi})
    assert marked.group == plain.group
    assert marked.polynomial == plain.polynomial * intersection_index(phi, d1)


def test_regular_graph_is_connected_for_two_points():
    tp = GeneralProblem.from_kernels(D, fx.TWO_POINT_KERNELS)
    comps = greg_components(D, fx.form("omega4"), tp)
    assert len(comps) == 1 and len(comps[0]) == 6


def test_displayed_identity_on_random_vectors():
    rng = random.Random(13)
    om = fx.form("omega1")
    g = omega_group(D, om)
    for _ in range(30):
        a = [tuple(rng.randint(-3, 3) for _ in range(4)) for _ in range(3)]
        a.append(tuple(-sum(v[i] for v in a) for i in range(4)))
        if any(not any(v) for v in a):
            continue
        assert displayed_identity(a, om, g)


def test_invariant_agrees_across_deltas():
    rep = invariant_omega(D, fx.form("omega+"), 0, trials=4, seed=3, deltas=3)
    assert len({t.delta for t in rep.trials}) == 3
    assert all(t.polynomial == rep.polynomial for t in rep.trials)
    n0 = D.slopes[0]
    om = fx.form("omega+")
    assert len({Fraction(t.complex_count, abs(om(n0, t.delta))) for t in rep.trials}) == 1


def test_seeds_are_reproducible():
    a = invariant_omega(D, fx.form("omega1"), 0, trials=2, seed=42)
    b = invariant_omega(D, fx.form("omega1"), 0, trials=2, seed=42)
    assert [t.targets for t in a.trials] == [t.targets for t in b.trials]


def test_parallel_trials_match_serial():
    a = invariant_omega(D, fx.form("omega1"), 0, trials=4, seed=7)
    b = invariant_omega(D, fx.form("omega1"), 0, trials=4, seed=7, jobs=2)
    assert [t.targets for t in a.trials] == [t.targets for t in b.trials]
    assert a.polynomial == b.polynomial
