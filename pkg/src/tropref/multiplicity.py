"""Complex and refined multiplicities of trivalent combinatorial types."""

from __future__ import annotations

from typing import Mapping, Sequence

from .evaluation import (
    GeneralProblem,
    OmegaProblem,
    general_matrix,
    omega_matrix,
)
from .groupring import QuotientGroup, RingElement, binomial_term
from .lattice import (
    Polyvector,
    TwoForm,
    Vector,
    interior_product,
    neg,
    pair,
    wedge_poly,
    wedge_vectors,
)
from .moduli import CombinatorialType, Degree


class SignUndefined(ValueError):
    """omega vanishes on a vertex bivector that is not killed by K."""


# ---------------------------------------------------------------------------
# Complex multiplicity


def complex_mult_det(ctype: CombinatorialType, problem) -> int:
    """|det| of the composed evaluation map on the cone of `ctype`."""
    if isinstance(problem, OmegaProblem):
        return abs(omega_matrix(ctype, problem).determinant)
    if isinstance(problem, GeneralProblem):
        return abs(general_matrix(ctype, problem).determinant)
    raise TypeError(f"unsupported problem {type(problem).__name__}")


def _neighbours(ctype: CombinatorialType, v: frozenset):
    """Adjacent vertices and ends of v, as ("v", clade) / ("e", label)."""
    out = []
    p = ctype.parent(v)
    if p is not None:
        out.append(("v", p))
    out += [("v", c) for c in ctype.child_vertices(v)]
    out += [("e", e) for e in ctype.attached_ends(v)]
    return out


def _incoming(ctype, degree, leaves, node, towards) -> tuple[Polyvector, Vector]:
    """Polyvector carried by the edge from `node` to `towards`, and the total
    slope of the ends lying on the `node` side."""
    kind, x = node
    if kind == "e":
        return leaves[x], degree.slopes[x]
    parts = [
        _incoming(ctype, degree, leaves, nb, x)
        for nb in _neighbours(ctype, x)
        if not (nb[0] == "v" and nb[1] == towards)
    ]
    acc = Polyvector.one(degree.r)
    slope = (0,) * degree.r
    for rho, s in parts:
        acc = wedge_poly(acc, rho)
        slope = tuple(a + b for a, b in zip(slope, s))
    if acc.is_zero() or acc.grade == 0:
        # nothing to contract: the vertex is unconstrained from this side
        return Polyvector.zero(degree.r, 0), slope
    return interior_product(slope, acc), slope


def complex_mult_sink(
    ctype: CombinatorialType,
    degree: Degree,
    leaves: Mapping[int, Polyvector],
    sink: frozenset | None = None,
) -> int:
    """Multiplicity by propagating leaf polyvectors towards `sink`.

    Each non-sink vertex passes iota_n(rho_1 ^ ... ^ rho_s) along its edge
    towards the sink, n being the sum of the slopes beyond it.  At the sink
    the wedge of everything must be a top form; its coefficient is returned
    in absolute value.  A grade mismatch anywhere means the multiplicity is 0.
    """
    sink = ctype.root if sink is None else sink
    r = degree.r
    acc = Polyvector.one(r)
    for nb in _neighbours(ctype, sink):
        rho, _ = _incoming(ctype, degree, leaves, nb, sink)
        acc = wedge_poly(acc, rho)
        if acc.is_zero():
            return 0
    if acc.grade != r:
        return 0
    return abs(acc.top_coefficient())


def pluecker_leaves(problem: GeneralProblem) -> dict[int, Polyvector]:
    """Wedge of each end's codomain basis (the lattice-normalized Pluecker vector)."""
    r = problem.degree.r
    return {e: Polyvector.of_covectors(block, r) for e, block in enumerate(problem.rows)}


def omega_leaves(problem: OmegaProblem) -> dict[int, Polyvector]:
    """Raw moment covectors, the line constraint at e0, and phi at marked points."""
    d = problem.degree
    out = {}
    for e, n in enumerate(d.slopes):
        if e == problem.e0:
            out[e] = problem.e0_polyvector()
        elif any(n):
            out[e] = Polyvector.covector(problem.omega.contract(n))
        else:
            out[e] = Polyvector.covector(problem.phis[e])
    return out


# ---------------------------------------------------------------------------
# Vertices


def is_marked_vertex(ctype: CombinatorialType, degree: Degree, v: frozenset) -> bool:
    return any(not any(degree.slopes[e]) for e in ctype.attached_ends(v))


def vertex_bivectors(ctype: CombinatorialType, degree: Degree) -> list[tuple[frozenset, Vector]]:
    """(vertex, a ^ b) for every vertex not carrying a marked point."""
    out = []
    for v in ctype.vertices:
        if is_marked_vertex(ctype, degree, v):
            continue
        slopes = ctype.outgoing_slopes(degree, v)
        if len(slopes) != 3:
            raise ValueError("refined multiplicity needs a trivalent type")
        out.append((v, wedge_vectors(slopes[1], slopes[2])))
    return out


def oriented_bivector(omega: TwoForm, pi: Sequence[int]) -> tuple[Vector, int]:
    """(pi or -pi, value) with omega(result) >= 0."""
    from .lattice import two_form_on_bivector

    w = two_form_on_bivector(omega, pi)
    if w < 0:
        return neg(pi), -w
    return tuple(pi), w


def has_zero_bounded_slope(ctype: CombinatorialType, degree: Degree) -> bool:
    return any(not any(degree.slope_sum(e)) for e in ctype.edges)


def refined_mult(
    ctype: CombinatorialType,
    degree: Degree,
    omega: TwoForm,
    group: QuotientGroup,
) -> RingElement:
    """Product of q^pi_V - q^-pi_V over vertices, with omega(pi_V) > 0.

    Vertices carrying a marked point contribute 1.  A flat vertex or a
    vertex whose bivector lies in K gives 0.
    """
    if has_zero_bounded_slope(ctype, degree):
        return RingElement.zero(group)
    out = RingElement.one(group)
    for v, pi in vertex_bivectors(ctype, degree):
        if not any(pi):
            return RingElement.zero(group)
        pi, w = oriented_bivector(omega, pi)
        if w == 0:
            if pi in group.K:
                return RingElement.zero(group)
            raise SignUndefined(
                f"omega vanishes on vertex {sorted(v)} of {ctype.name(degree.labels)} "
                f"but its bivector {pi} is not in K"
            )
        out = out * binomial_term(group, pi)
        if out.is_zero():
            return out
    return out


def omega_closed_form(ctype: CombinatorialType, problem: OmegaProblem) -> int:
    """|omega(n_e0, delta)| * prod |omega(pi_V)| * prod |phi_i(delta_i)|."""
    d = problem.degree
    if has_zero_bounded_slope(ctype, d):
        return 0
    out = abs(problem.omega(d.slopes[problem.e0], problem.delta))
    for _, pi in vertex_bivectors(ctype, d):
        out *= abs(oriented_bivector(problem.omega, pi)[1])
    return out * marked_factor(ctype, d, problem.phis)


# ---------------------------------------------------------------------------
# Marked points


def marked_slope(ctype: CombinatorialType, degree: Degree, i: int) -> Vector:
    """Slope of the curve at marked point i (outgoing along a non-marked branch)."""
    v = ctype.end_vertex(i)
    for b in ctype.branches(v):
        if b != frozenset([i]):
            return degree.slope_sum(b)
    raise ValueError("marked point vertex has no other branch")


def marked_factor(ctype: CombinatorialType, degree: Degree, phis: Mapping[int, Sequence[int]]) -> int:
    out = 1
    for i in degree.marked_points():
        out *= abs(pair(phis[i], marked_slope(ctype, degree, i)))
    return out


def intersection_index(phi: Sequence[int], degree: Degree) -> int:
    """phi . Delta: sum of the positive values of phi on the end slopes."""
    return sum(max(pair(phi, n), 0) for n in degree.slopes)
