import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropref import fixtures as fx
from tropref.lattice import (
    Polyvector,
    Sublattice,
    TwoForm,
    det,
    hnf,
    interior_product,
    kernel_basis,
    matmul,
    orthogonal_dual,
    pair,
    pluecker,
    snf,
    two_form_as_polyvector,
    two_form_on_bivector,
    wedge_poly,
    wedge_vectors,
)

small = st.integers(-20, 20)


def vec(r):
    return st.tuples(*[small] * r)


# --- 2-forms ------------------------------------------------------------------


def test_two_form_values():
    om = fx.form("omega1")
    assert om((1, 0, 0, 0), (0, 1, 0, 0)) == -68
    assert om((0, 0, 1, 0), (0, 0, 0, 1)) == 30
    assert om.contract((1, 0, 0, 0)) == (0, -68, -53, 86)


def test_printed_matrix_typo_is_rejected():
    with pytest.raises(ValueError, match="antisymmetric"):
        TwoForm(tuple(map(tuple, fx.PRINTED["omega2"])))
    with pytest.raises(ValueError, match="diagonal"):
        TwoForm(((1, 0), (0, 0)))


@given(vec(4), vec(4), vec(4), small)
def test_two_form_bilinear_and_alternating(a, b, c, k):
    om = fx.form("omega1")
    ab = tuple(x + k * y for x, y in zip(a, b))
    assert om(ab, c) == om(a, c) + k * om(b, c)
    assert om(a, b) == -om(b, a)
    assert om(a, a) == 0


@given(vec(4), vec(4))
def test_form_on_wedge(a, b):
    om = fx.form("omega2")
    assert two_form_on_bivector(om, wedge_vectors(a, b)) == om(a, b)


# --- exterior algebra ---------------------------------------------------------


@given(vec(3), vec(3), vec(3))
def test_interior_product_of_wedge(n, a, b):
    lhs = interior_product(n, wedge_poly(Polyvector.covector(a), Polyvector.covector(b)))
    rhs = Polyvector.covector([pair(a, n) * y for y in b]) + -Polyvector.covector([pair(b, n) * x for x in a])
    assert lhs == rhs


@given(vec(4), vec(4))
def test_interior_product_squares_to_zero(n, m):
    rho = wedge_poly(Polyvector.covector(m), two_form_as_polyvector(fx.form("omega1")))
    assert interior_product(n, interior_product(n, rho)).is_zero()


@settings(max_examples=50)
@given(st.lists(vec(3), min_size=3, max_size=3))
def test_top_wedge_is_determinant(rows):
    assert Polyvector.of_covectors(rows, 3).top_coefficient() == det(rows)


def test_wedge_above_rank_vanishes():
    p = Polyvector.of_covectors([(1, 0), (0, 1)], 2)
    assert wedge_poly(p, Polyvector.covector((1, 1))).is_zero()


# --- normal forms -------------------------------------------------------------


def test_det_examples():
    assert det([[2, 0], [0, 3]]) == 6
    assert det([[0, 1], [1, 0]]) == -1
    assert det([[1, 2, 3], [4, 5, 6], [7, 8, 9]]) == 0


@settings(max_examples=50)
@given(st.lists(vec(4), min_size=1, max_size=4), st.integers(-3, 3))
def test_hnf_is_basis_invariant(rows, k):
    mixed = list(rows)
    if len(mixed) > 1:
        mixed[0] = tuple(x + k * y for x, y in zip(mixed[0], mixed[1]))
        mixed.reverse()
    assert hnf(rows, 4) == hnf(mixed, 4)


@settings(max_examples=30)
@given(st.lists(vec(3), min_size=2, max_size=3))
def test_snf_decomposition(rows):
    u, d, v = snf(rows)
    assert matmul(matmul(u, rows), v) == d
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
    assert all(diag[i + 1] % diag[i] == 0 for i in range(len(diag) - 1) if diag[i])


def test_sublattice_membership_and_index():
    lat = Sublattice(3, ((2, 0, 0), (0, 3, 0)))
    assert (4, 9, 0) in lat
    assert (1, 0, 0) not in lat
    assert lat.index_in_saturation() == 6
    assert lat.saturation() == Sublattice(3, ((1, 0, 0), (0, 1, 0)))
    assert lat.plus((1, 0, 0)).contains_lattice(lat)


def test_kernel_and_dual():
    ker = kernel_basis([(1, 1, 1)], 3)
    assert ker.rank == 2 and all(pair((1, 1, 1), b) == 0 for b in ker.basis)
    assert orthogonal_dual(ker) == Sublattice(3, ((1, 1, 1),))


def test_pluecker_vector():
    p = pluecker(Sublattice(3, ((1, 0, 0),)))
    assert p.grade == 2 and p.coeffs == {(1, 2): 1}
    # adding the slope of an end
    q = pluecker(Sublattice(3, ((1, 0, 0),)), extra=(0, 1, 0))
    assert q.coeffs == {(2,): 1}
