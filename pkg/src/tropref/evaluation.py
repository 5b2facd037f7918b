"""Composed evaluation maps restricted to the cones of the moduli space."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from .lattice import (
    Polyvector,
    Sublattice,
    TwoForm,
    Vector,
    basis_vector,
    content,
    det,
    interior_product,
    kernel_basis,
    orthogonal_dual,
    pair,
    primitive,
    scale,
    volume_form,
    wedge_vectors,
)
from .moduli import CombinatorialType, Degree


class ProblemError(ValueError):
    """Invalid enumerative problem data."""


def _sign(x) -> int:
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------------------
# Problems


@dataclass(frozen=True)
class GeneralProblem:
    """Affine constraints on ends and marked points.

    rows[e] is the HNF basis of the saturated lattice (<n_e> + L_e)^perp in M
    (for a marked point, L_e^perp).  phis[e] are the linear forms of the
    associated enhanced omega-problem, one per marked point.
    """

    degree: Degree
    rows: tuple[tuple[Vector, ...], ...]
    phis: Mapping[int, Vector] = field(default_factory=dict)

    def __post_init__(self):
        d = self.degree
        if len(self.rows) != d.n:
            raise ProblemError("one constraint block per end")
        for e, block in enumerate(self.rows):
            for m in block:
                if pair(m, d.slopes[e]):
                    raise ProblemError(f"constraint covector {m} does not vanish on n_{d.labels[e]}")
        total = sum(len(b) for b in self.rows)
        expected = d.n + d.r - 3
        if total != expected:
            raise ProblemError(
                f"dimension balance violated: total corank {total} != {expected}"
            )
        for i in d.marked_points():
            if self.phis and i not in self.phis:
                raise ProblemError(f"marked point {d.labels[i]} has no linear form phi")

    @classmethod
    def from_kernels(
        cls,
        degree: Degree,
        kernels: Mapping[int, Sequence[Sequence[int]]],
        phis: Mapping[int, Sequence[int]] | None = None,
    ) -> "GeneralProblem":
        """L_e is the image in N/<n_e> of the common kernel of the given covectors."""
        r = degree.r
        rows = []
        for e in range(degree.n):
            covs = [tuple(c) for c in kernels.get(e, ())]
            if not covs:
                rows.append(())
                continue
            for c in covs:
                if len(c) != r:
                    raise ProblemError(f"covector {c} has wrong length")
            lift = kernel_basis(covs, r).plus(degree.slopes[e]) if any(degree.slopes[e]) else kernel_basis(covs, r)
            rows.append(tuple(orthogonal_dual(lift).basis))
        return cls(degree, tuple(rows), {k: tuple(v) for k, v in (phis or {}).items()})

    @classmethod
    def from_spans(
        cls,
        degree: Degree,
        spans: Mapping[int, Sequence[Sequence[int]]],
        phis: Mapping[int, Sequence[int]] | None = None,
    ) -> "GeneralProblem":
        """L_e given by generating vectors (lifted to N)."""
        r = degree.r
        rows = []
        for e in range(degree.n):
            gens = [tuple(v) for v in spans.get(e, ())]
            lat = Sublattice(r, tuple(gens))
            if any(degree.slopes[e]):
                lat = lat.plus(degree.slopes[e])
            rows.append(tuple(orthogonal_dual(lat).basis))
        return cls(degree, tuple(rows), {k: tuple(v) for k, v in (phis or {}).items()})

    def coranks(self) -> list[int]:
        return [len(b) for b in self.rows]


def codomain_basis_general(problem: GeneralProblem) -> list[tuple[int, Vector]]:
    """Flat list of (end, covector) in label order; this order orients the codomain."""
    return [(e, m) for e, block in enumerate(problem.rows) for m in block]


@dataclass(frozen=True)
class OmegaProblem:
    """Fixed moments for every end, plus end e0 on a line of slope delta.

    Marked points (zero slopes) are allowed when a linear form phi is given
    for each; they are constrained to hyperplanes of slope ker phi.
    """

    degree: Degree
    omega: TwoForm
    e0: int
    delta: Vector
    phis: Mapping[int, Vector] = field(default_factory=dict)

    def __post_init__(self):
        d = self.degree
        if self.omega.rank != d.r:
            raise ProblemError("2-form rank differs from the degree rank")
        if not 0 <= self.e0 < d.n or not any(d.slopes[self.e0]):
            raise ProblemError("e0 must be an end with nonzero slope")
        for e, n in enumerate(d.slopes):
            if any(n):
                if not any(self.omega.contract(n)):
                    raise ProblemError(f"iota_n omega vanishes for end {d.labels[e]}")
            elif e not in self.phis:
                raise ProblemError(f"marked point {d.labels[e]} needs a linear form phi")
        if len(self.delta) != d.r:
            raise ProblemError("delta has wrong length")
        if self.omega(d.slopes[self.e0], self.delta) == 0:
            raise ProblemError("omega(n_e0, delta) must be nonzero")

    @cached_property
    def e0_rows(self) -> tuple[Vector, ...]:
        n0 = self.degree.slopes[self.e0]
        span = Sublattice(self.degree.r, (n0, tuple(self.delta)))
        rows = list(orthogonal_dual(span).basis)
        # scale so that the block wedges to +-iota_delta iota_n0 of the volume form
        c = content(wedge_vectors(n0, self.delta))
        if rows and c != 1:
            rows[0] = scale(c, rows[0])
        return tuple(rows)

    def e0_polyvector(self) -> Polyvector:
        n0 = self.degree.slopes[self.e0]
        return interior_product(self.delta, interior_product(n0, volume_form(self.degree.r)))


def codomain_basis_omega(problem: OmegaProblem) -> list[tuple[int, Vector]]:
    """(end, covector) rows: the e0 block, raw moments iota_{n_e} omega, and phis."""
    d = problem.degree
    out = []
    for e in range(d.n):
        if e == problem.e0:
            out += [(e, m) for m in problem.e0_rows]
        elif any(d.slopes[e]):
            out.append((e, problem.omega.contract(d.slopes[e])))
        else:
            out.append((e, tuple(problem.phis[e])))
    if len(out) != d.n + d.r - 3:
        raise ProblemError("omega-problem codomain has the wrong dimension")
    return out


def default_delta(degree: Degree, omega: TwoForm, e0: int) -> Vector:
    """First small primitive vector with omega(n_e0, delta) != 0."""
    n0 = degree.slopes[e0]
    r = degree.r
    candidates = [basis_vector(r, i) for i in range(r)]
    candidates += [
        tuple(a + b for a, b in zip(basis_vector(r, i), basis_vector(r, j)))
        for i in range(r) for j in range(i + 1, r)
    ]
    for c in candidates:
        if omega(n0, c) != 0:
            return primitive(c)
    raise ProblemError("no delta with omega(n_e0, delta) != 0; iota_n_e0 omega vanishes")


# ---------------------------------------------------------------------------
# Matrices


@dataclass(frozen=True)
class EvaluationMatrix:
    """Square matrix of a composed evaluation map on one cone.

    Columns: root vertex position (r coordinates), then bounded-edge lengths
    in `edge_order`.  Rows follow the codomain basis order.
    """

    ctype: CombinatorialType
    root: frozenset
    edge_order: tuple[frozenset, ...]
    rows: tuple[tuple[int, Vector], ...]
    matrix: tuple[tuple[int, ...], ...]

    @cached_property
    def determinant(self) -> int:
        return det(self.matrix)

    @property
    def sign(self) -> int:
        return _sign(self.determinant)


def build_matrix(
    ctype: CombinatorialType,
    degree: Degree,
    rows: Sequence[tuple[int, Vector]],
    root: frozenset | None = None,
    edge_order: Sequence[frozenset] | None = None,
) -> EvaluationMatrix:
    root = ctype.root if root is None else root
    edges = tuple(ctype.edges if edge_order is None else edge_order)
    col = {e: i for i, e in enumerate(edges)}
    r = degree.r
    slopes = {e: degree.slope_sum(e) for e in edges}
    mat = []
    for end, m in rows:
        row = list(m) + [0] * len(edges)
        for edge, orient in ctype.path_edges(root, end):
            row[r + col[edge]] = orient * pair(m, slopes[edge])
        mat.append(tuple(row))
    if len(mat) != r + len(edges):
        raise ProblemError(f"matrix is {len(mat)}x{r + len(edges)}, not square")
    return EvaluationMatrix(ctype, root, edges, tuple(rows), tuple(mat))


def det_and_sign(m: EvaluationMatrix) -> tuple[int, int]:
    return m.determinant, m.sign


def general_matrix(ctype: CombinatorialType, problem: GeneralProblem, **kw) -> EvaluationMatrix:
    return build_matrix(ctype, problem.degree, codomain_basis_general(problem), **kw)


def omega_matrix(ctype: CombinatorialType, problem: OmegaProblem, **kw) -> EvaluationMatrix:
    return build_matrix(ctype, problem.degree, codomain_basis_omega(problem), **kw)


def vertex_positions(ctype: CombinatorialType, degree: Degree, root_pos, lengths) -> dict:
    """Positions of all vertices, walking the tree from the root vertex."""
    length = dict(zip(ctype.edges, lengths))
    pos = {ctype.root: tuple(root_pos)}
    # parents before children: larger clades first
    for v in sorted(ctype.edges, key=len, reverse=True):
        p = ctype.parent(v)
        s = degree.slope_sum(v)
        pos[v] = tuple(x + length[v] * y for x, y in zip(pos[p], s))
    return pos


def evaluate_rows(ctype, degree, rows, root_pos, lengths) -> list:
    """Evaluate the constraint covectors on an explicit curve."""
    pos = vertex_positions(ctype, degree, root_pos, lengths)
    return [sum(a * b for a, b in zip(m, pos[ctype.end_vertex(e)])) for e, m in rows]
