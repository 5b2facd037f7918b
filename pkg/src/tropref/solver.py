"""Brute-force solving of the enumerative problems and invariance checks."""

from __future__ import annotations

import itertools
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from .evaluation import (
    EvaluationMatrix,
    GeneralProblem,
    OmegaProblem,
    ProblemError,
    build_matrix,
    codomain_basis_general,
    codomain_basis_omega,
    default_delta,
    evaluate_rows,
    general_matrix,
    omega_matrix,
    vertex_positions,
)
from .groupring import (
    QuotientGroup,
    RingElement,
    binomial_term,
    limit_q_to_1,
    project,
    specialize_one_variable,
)
from .lattice import (
    Sublattice,
    TwoForm,
    Vector,
    content,
    primitive,
    rank,
    solve as linsolve,
    two_form_on_bivector,
    wedge_vectors,
)
from .moduli import CombinatorialType, Degree, enumerate_trivalent, enumerate_walls, vertex_types
from .multiplicity import (
    SignUndefined,
    intersection_index,
    marked_factor,
    oriented_bivector,
    refined_mult,
)

log = logging.getLogger(__name__)

TARGET_BOUND = 10**6
MAX_RESAMPLE = 50


class NonGeneric(RuntimeError):
    """The sampled constraints hit a wall or the image of a degenerate cone."""


class InvarianceViolation(RuntimeError):
    """Two generic instances produced different counts."""


class HypothesisViolation(RuntimeError):
    """A type with vanishing constrained multiplicity has nonzero omega multiplicity."""


# ---------------------------------------------------------------------------
# Solutions


@dataclass(frozen=True)
class Solution:
    ctype: CombinatorialType
    root_position: tuple[Fraction, ...]
    lengths: tuple[Fraction, ...]
    complex_mult: int
    sign: int

    def name(self, labels=None) -> str:
        return self.ctype.name(labels)


def type_matrices(problem, types=None) -> list[EvaluationMatrix]:
    """Evaluation matrices of every trivalent type, in canonical order."""
    types = enumerate_trivalent(problem.degree.n) if types is None else types
    if isinstance(problem, OmegaProblem):
        return [omega_matrix(t, problem) for t in types]
    return [general_matrix(t, problem) for t in types]


def solve(problem, targets: Sequence, matrices: Sequence[EvaluationMatrix] | None = None) -> list[Solution]:
    """All curves with positive edge lengths whose evaluation equals `targets`.

    Raises NonGeneric when a solution has a zero length or the targets lie in
    the image of a cone where the evaluation map is not injective.
    """
    matrices = type_matrices(problem) if matrices is None else matrices
    r = problem.degree.r
    targets = [Fraction(x) for x in targets]
    out = []
    for m in matrices:
        if m.determinant == 0:
            aug = [list(row) + [b] for row, b in zip(m.matrix, targets)]
            if rank(m.matrix) == rank(aug):
                raise NonGeneric(f"targets lie in the image of degenerate type {m.ctype.name()}")
            continue
        x = linsolve(m.matrix, targets)
        lengths = tuple(x[r:])
        if any(l == 0 for l in lengths):
            raise NonGeneric(f"solution of type {m.ctype.name()} sits on a wall")
        if all(l > 0 for l in lengths):
            out.append(Solution(m.ctype, tuple(x[:r]), lengths, abs(m.determinant), m.sign))
    return out


def verify_solution(sol: Solution, problem, targets: Sequence) -> None:
    """Independent re-evaluation of a solution; raises AssertionError on mismatch."""
    d = problem.degree
    if isinstance(problem, OmegaProblem):
        rows = codomain_basis_omega(problem)
    else:
        rows = codomain_basis_general(problem)
    if any(l <= 0 for l in sol.lengths):
        raise AssertionError("non-positive edge length")
    values = evaluate_rows(sol.ctype, d, rows, sol.root_position, sol.lengths)
    if [Fraction(v) for v in values] != [Fraction(t) for t in targets]:
        raise AssertionError(f"solution of type {sol.name()} does not reproduce the targets")
    if isinstance(problem, OmegaProblem):
        if menelaus_sum(sol, d, problem.omega) != 0:
            raise AssertionError("moments of a solution do not sum to zero")


def moments(sol: Solution, degree: Degree, omega: TwoForm) -> list[Fraction]:
    pos = vertex_positions(sol.ctype, degree, sol.root_position, sol.lengths)
    out = []
    for e, n in enumerate(degree.slopes):
        p = pos[sol.ctype.end_vertex(e)]
        out.append(sum(Fraction(c) * x for c, x in zip(omega.contract(n), p)))
    return out


def menelaus_sum(sol: Solution, degree: Degree, omega: TwoForm) -> Fraction:
    return sum(moments(sol, degree, omega), Fraction(0))


def random_targets(rng: random.Random, size: int) -> list[int]:
    return [rng.randint(-TARGET_BOUND, TARGET_BOUND) for _ in range(size)]


def solve_generic(problem, rng: random.Random, matrices=None) -> tuple[list[int], list[Solution]]:
    """Sample targets until the instance is generic; bounded retries."""
    matrices = type_matrices(problem) if matrices is None else matrices
    size = problem.degree.n + problem.degree.r - 3
    for _ in range(MAX_RESAMPLE):
        targets = random_targets(rng, size)
        try:
            sols = solve(problem, targets, matrices)
        except NonGeneric as exc:
            log.info("resampling: %s", exc)
            continue
        for s in sols:
            verify_solution(s, problem, targets)
        return targets, sols
    raise NonGeneric(f"no generic instance after {MAX_RESAMPLE} samples")


# ---------------------------------------------------------------------------
# K_omega


def k_omega(degree: Degree, omega: TwoForm) -> Sublattice:
    """Span of the vertex bivectors on which omega vanishes."""
    gens = [
        vt.bivector
        for vt in vertex_types(degree)
        if any(vt.bivector) and two_form_on_bivector(omega, vt.bivector) == 0
    ]
    return Sublattice(comb(degree.r, 2), tuple(gens))


def omega_group(degree: Degree, omega: TwoForm) -> QuotientGroup:
    return QuotientGroup(degree.r, k_omega(degree, omega).basis)


# ---------------------------------------------------------------------------
# Reports


@dataclass
class Trial:
    seed: int
    delta: Vector | None
    targets: list[int]
    solutions: list[Solution]
    polynomial: RingElement
    complex_count: int


@dataclass
class InvariantReport:
    polynomial: RingElement
    group: QuotientGroup
    trials: list[Trial]
    complex_count: int
    signs: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)


def _seed_for(seed: int, index: int) -> int:
    return seed * 1_000_003 + index


def _sample_deltas(degree: Degree, omega: TwoForm, e0: int, count: int, rng: random.Random, first=None):
    n0 = degree.slopes[e0]
    out = [tuple(first) if first is not None else default_delta(degree, omega, e0)]
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 10_000:
            raise ProblemError("could not sample enough slopes delta")
        c = [rng.randint(-5, 5) for _ in range(degree.r)]
        if not any(c):
            continue
        c = primitive(c)
        if not any(c) or c in out or omega(n0, c) == 0:
            continue
        if not any(wedge_vectors(n0, c)):
            continue
        out.append(c)
    return out


def _omega_trial(args):
    problem, seed, multiplicities = args
    rng = random.Random(seed)
    matrices = type_matrices(problem)
    targets, sols = solve_generic(problem, rng, matrices)
    group = next(iter(multiplicities.values())).group if multiplicities else None
    total = RingElement.zero(group)
    for s in sols:
        total = total + multiplicities[s.ctype]
    return Trial(seed, tuple(problem.delta), targets, sols, total, sum(s.complex_mult for s in sols))


def _map(fn, items, jobs: int):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def _agree(trials: list[Trial], what: str) -> None:
    first = trials[0]
    for t in trials[1:]:
        if t.polynomial != first.polynomial:
            raise InvarianceViolation(
                f"{what}: trial seed {t.seed} gives {t.polynomial} but seed {first.seed} gives {first.polynomial}"
            )


def omega_multiplicities(degree: Degree, omega: TwoForm, group: QuotientGroup, phis=None, types=None):
    types = enumerate_trivalent(degree.n) if types is None else types
    phis = phis or {}
    out = {}
    for t in types:
        b = refined_mult(t, degree, omega, group)
        out[t] = b * marked_factor(t, degree, phis) if degree.marked_points() else b
    return out


def invariant_omega(
    degree: Degree,
    omega: TwoForm,
    e0: int,
    delta: Sequence[int] | None = None,
    trials: int = 20,
    seed: int = 0,
    deltas: int = 3,
    phis: Mapping[int, Sequence[int]] | None = None,
    jobs: int = 1,
) -> InvariantReport:
    """Refined count for the omega-problem, checked over trials and slopes delta."""
    group = omega_group(degree, omega)
    mults = omega_multiplicities(degree, omega, group, phis)
    rng = random.Random(_seed_for(seed, 999_999))
    slopes = _sample_deltas(degree, omega, e0, max(deltas, 1), rng, delta)
    work = []
    for k, dl in enumerate(slopes):
        problem = OmegaProblem(degree, omega, e0, dl, dict(phis or {}))
        for i in range(trials):
            work.append((problem, _seed_for(seed, k * trials + i), mults))
    results = _map(_omega_trial, work, jobs)
    _agree(results, "omega-problem invariance")
    # the complex count scales with |omega(n_e0, delta)|
    n0 = degree.slopes[e0]
    counts = {Fraction(t.complex_count, abs(omega(n0, t.delta))) for t in results}
    if len(counts) != 1:
        raise InvarianceViolation(f"complex counts differ across trials: {sorted(counts)}")
    return InvariantReport(
        results[0].polynomial,
        group,
        results,
        results[0].complex_count,
        metadata={
            "kind": "omega",
            "omega": [list(row) for row in omega.matrix],
            "e0": degree.labels[e0],
            "deltas": [list(d) for d in slopes],
            "K": [list(b) for b in group.K.basis],
        },
    )


# ---------------------------------------------------------------------------
# General problems


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def epsilon_signs(
    problem: GeneralProblem,
    omega: TwoForm,
    e0: int = 0,
    delta: Sequence[int] | None = None,
    types: Sequence[CombinatorialType] | None = None,
    edge_orders: Mapping[CombinatorialType, Sequence[frozenset]] | None = None,
) -> dict[CombinatorialType, int]:
    """Orientation ratios between the constrained and the omega evaluation maps.

    Types whose constrained determinant vanishes get +1 (their sign never
    matters).  The first type with both determinants nonzero is forced to +1.
    """
    d = problem.degree
    delta = default_delta(d, omega, e0) if delta is None else tuple(delta)
    wp = OmegaProblem(d, omega, e0, delta, dict(problem.phis))
    types = enumerate_trivalent(d.n) if types is None else types
    raw = {}
    ref = None
    for t in types:
        kw = {"edge_order": edge_orders[t]} if edge_orders and t in edge_orders else {}
        dl = general_matrix(t, problem, **kw).determinant
        dw = omega_matrix(t, wp, **kw).determinant
        if dl == 0:
            if dw != 0:
                raise HypothesisViolation(
                    f"type {t.name(d.labels)} has zero constrained multiplicity "
                    f"but omega multiplicity {abs(dw)}"
                )
            raw[t] = 1
            continue
        raw[t] = _sign(dl) * _sign(dw) if dw else 1
        if ref is None and dw:
            ref = raw[t]
    ref = ref or 1
    return {t: s * ref for t, s in raw.items()}


def _general_trial(args):
    problem, seed, weights = args
    rng = random.Random(seed)
    matrices = type_matrices(problem)
    targets, sols = solve_generic(problem, rng, matrices)
    group = next(iter(weights.values())).group
    total = RingElement.zero(group)
    for s in sols:
        total = total + weights[s.ctype]
    return Trial(seed, None, targets, sols, total, sum(s.complex_mult for s in sols))


def invariant_general(
    problem: GeneralProblem,
    omega: TwoForm,
    e0: int = 0,
    delta: Sequence[int] | None = None,
    trials: int = 20,
    seed: int = 0,
    jobs: int = 1,
) -> InvariantReport:
    """Signed refined count for affine constraints on ends and marked points."""
    d = problem.degree
    delta = default_delta(d, omega, e0) if delta is None else tuple(delta)
    signs = epsilon_signs(problem, omega, e0, delta)
    group = omega_group(d, omega)
    weights = {}
    for t, eps in signs.items():
        b = refined_mult(t, d, omega, group)
        if d.marked_points():
            b = b * marked_factor(t, d, problem.phis)
        weights[t] = b * eps
    work = [(problem, _seed_for(seed, i), weights) for i in range(trials)]
    results = _map(_general_trial, work, jobs)
    _agree(results, "general-problem invariance")
    counts = {t.complex_count for t in results}
    if len(counts) != 1:
        raise InvarianceViolation(f"complex counts differ across trials: {sorted(counts)}")
    return InvariantReport(
        results[0].polynomial,
        group,
        results,
        results[0].complex_count,
        signs={t.key: s for t, s in signs.items()},
        metadata={
            "kind": "general",
            "omega": [list(row) for row in omega.matrix],
            "e0": d.labels[e0],
            "delta": list(delta),
            "K": [list(b) for b in group.K.basis],
        },
    )


# ---------------------------------------------------------------------------
# Wall identities


@dataclass
class WallCheck:
    wall: str
    determinants: tuple[int, int, int]
    local_terms: tuple[RingElement, RingElement, RingElement]
    side_signs: tuple[int, int, int]
    omega_on_wall_zero: bool
    det_sum_ok: bool
    refined_ok: bool
    displayed_ok: bool


def wall_basis_matrices(wall, degree: Degree, rows) -> list[tuple[str, EvaluationMatrix]]:
    """Matrices of the three resolutions in the common basis of the wall:
    position of the quadrivalent vertex, the wall's edges, then the new edge."""
    out = []
    for name, t, new in wall.resolutions():
        order = tuple(wall.ctype.edges) + (new,)
        out.append((name, build_matrix(t, degree, rows, root=wall.vertex, edge_order=order)))
    return out


# With the uniform orientation of _local_pairs, the complex terms satisfy
# w(a0,a1)w(a2,a3) - w(a0,a2)w(a1,a3) + w(a0,a3)w(a1,a2) = 0.
PLUECKER_SIGNS = (1, -1, 1)


def _local_pairs(wall, degree):
    """For each resolution, the two vertex bivectors next to the new edge."""
    b = wall.branches
    a = [degree.slope_sum(x) for x in b]
    out = []
    for j, k, l in ((1, 2, 3), (2, 1, 3), (3, 1, 2)):
        # vertex (0, j, new) and vertex (k, l, -new)
        out.append((wedge_vectors(a[0], a[j]), wedge_vectors(a[k], a[l])))
    return a, out


def _oriented_term(group, omega, pi):
    if not any(pi):
        return RingElement.zero(group), 0
    pi, w = oriented_bivector(omega, pi)
    if w == 0 and pi not in group.K:
        raise SignUndefined(f"omega vanishes on {pi} outside K")
    return binomial_term(group, pi), w


def _q(group, x, y):
    """q^{x ^ y} - q^{y ^ x}, without any orientation."""
    return binomial_term(group, wedge_vectors(x, y))


def displayed_identity(a: Sequence[Vector], omega: TwoForm, group: QuotientGroup) -> bool:
    """Three-term identity between oriented vertex terms at a quadrivalent vertex.

    The slopes are relabelled so that omega is nonnegative on consecutive
    pairs and omega(a2, a3) >= omega(a1, a2).  Every factor is then oriented
    (omega >= 0 on its bivector); the a1 ^ a3 factor enters with the sign of
    omega(a1, a3).
    """
    perm = None
    for p in itertools.permutations(range(4)):
        b = [a[i] for i in p]
        if all(omega(b[i], b[(i + 1) % 4]) >= 0 for i in range(4)) and omega(b[1], b[2]) >= omega(b[0], b[1]):
            perm = b
            break
    if perm is None:
        raise ValueError("no cyclic labelling with nonnegative consecutive omega values")
    a1, a2, a3, _ = perm
    s = lambda x, y: tuple(u + v for u, v in zip(x, y))

    def term(x, y):
        return _oriented_term(group, omega, wedge_vectors(x, y))[0]

    lhs = term(a2, a3) * term(a1, s(a2, a3))
    t12 = term(a1, a2) * term(s(a1, a2), a3)
    t13 = term(a1, a3) * term(a2, s(a1, a3))
    if omega(a1, a3) > 0:
        return lhs == t12 + t13
    if omega(a1, a3) < 0:
        return lhs == t12 - t13
    # omega(a1, a3) = 0: the factor lies in K and vanishes, or the sign is undefined
    return lhs == t12 and t13.is_zero()


def check_wall_identities(
    degree: Degree,
    omega: TwoForm,
    rows=None,
    group: QuotientGroup | None = None,
    e0: int = 0,
    delta=None,
) -> list[WallCheck]:
    """Check every wall of the degree.

    rows: codomain rows of a constrained problem (default: the omega-problem
    with end e0).  The refined identity is checked in Z[Lambda^2 N / K_omega].
    """
    group = omega_group(degree, omega) if group is None else group
    wp = None
    if all(any(n) for n in degree.slopes) or rows is None:
        delta = default_delta(degree, omega, e0) if delta is None else tuple(delta)
        wp = OmegaProblem(degree, omega, e0, delta)
    if rows is None:
        rows = codomain_basis_omega(wp)
    out = []
    for wall in enumerate_walls(degree.n):
        mats = wall_basis_matrices(wall, degree, rows)
        dets = tuple(m.determinant for _, m in mats)
        a, pairs = _local_pairs(wall, degree)
        terms, signs, zero_wall = [], [], False
        for sigma, (p1, p2) in zip(PLUECKER_SIGNS, pairs):
            f1, w1 = _oriented_term(group, omega, p1)
            f2, w2 = _oriented_term(group, omega, p2)
            zero_wall = zero_wall or w1 == 0 or w2 == 0
            terms.append(f1 * f2)
            # side of the wall on which this resolution solves the problem
            signs.append(sigma * _sign(two_form_on_bivector(omega, p1) * two_form_on_bivector(omega, p2)))
        refined = RingElement.zero(group)
        for s, f in zip(signs, terms):
            refined = refined + f * s
        raw_sum = RingElement.zero(group)
        for sigma, (p1, p2) in zip(PLUECKER_SIGNS, pairs):
            raw_sum = raw_sum + binomial_term(group, p1) * binomial_term(group, p2) * sigma
        ok_refined = refined.is_zero() and raw_sum.is_zero()
        if wp is not None:
            # the omega-problem determinants give the same side assignment
            wmats = wall_basis_matrices(wall, degree, codomain_basis_omega(wp))
            eta = [m.sign for _, m in wmats]
            eta_sum = RingElement.zero(group)
            for e_, f in zip(eta, terms):
                eta_sum = eta_sum + f * e_
            ok_refined = ok_refined and eta_sum.is_zero()
            if sum(m.determinant for _, m in wmats) != 0:
                ok_refined = False
        out.append(
            WallCheck(
                wall.ctype.name(degree.labels),
                dets,
                tuple(terms),
                tuple(signs),
                zero_wall,
                sum(dets) == 0,
                ok_refined,
                displayed_identity(a, omega, group),
            )
        )
    return out


# ---------------------------------------------------------------------------
# Continuity, q -> 1 and the regular graph


def check_continuity(
    degree: Degree,
    omega_coarse: TwoForm,
    omega_fine: TwoForm,
    e0: int,
    trials: int = 5,
    seed: int = 0,
) -> bool:
    """Projection of the invariant for omega_fine equals the one for omega_coarse."""
    kc = k_omega(degree, omega_coarse)
    kf = k_omega(degree, omega_fine)
    if not kc.contains_lattice(kf):
        raise ProblemError("K of the finer form is not contained in K of the coarser form")
    coarse = invariant_omega(degree, omega_coarse, e0, trials=trials, seed=seed, deltas=1)
    fine = invariant_omega(degree, omega_fine, e0, trials=trials, seed=seed, deltas=1)
    return project(fine.polynomial, coarse.group) == coarse.polynomial


@dataclass
class LimitCheck:
    refined_limit: Fraction
    scale: int
    complex_count: int

    @property
    def ok(self) -> bool:
        return self.refined_limit * self.scale == self.complex_count


def q1_limit_check(
    degree: Degree,
    omega: TwoForm,
    e0: int,
    trials: int = 3,
    seed: int = 0,
    report: InvariantReport | None = None,
) -> LimitCheck:
    """Compare the q -> 1 limit of the refined invariant with the complex count.

    The complex count comes from |det| of the evaluation matrices of the
    solved instances; the refined side from the polynomial alone.
    """
    rep = invariant_omega(degree, omega, e0, trials=trials, seed=seed, deltas=1) if report is None else report
    delta = rep.trials[0].delta
    g = specialize_one_variable(omega, rep.polynomial)
    nverts = degree.n - 2 - len(degree.marked_points())
    lim = limit_q_to_1(g, nverts)
    scale = abs(omega(degree.slopes[e0], delta))
    return LimitCheck(lim, scale, rep.trials[0].complex_count)


def greg_components(
    degree: Degree,
    omega: TwoForm,
    problem: GeneralProblem | None = None,
) -> list[list[CombinatorialType]]:
    """Connected components of the wall graph on types with nonzero refined multiplicity."""
    group = omega_group(degree, omega)
    types = enumerate_trivalent(degree.n)
    alive = []
    for t in types:
        if refined_mult(t, degree, omega, group).is_zero():
            continue
        if problem is not None and general_matrix(t, problem).determinant == 0:
            continue
        alive.append(t)
    alive_set = set(alive)
    adj = {t: set() for t in alive}
    for wall in enumerate_walls(degree.n):
        res = [t for _, t, _ in wall.resolutions() if t in alive_set]
        for x, y in itertools.combinations(res, 2):
            adj[x].add(y)
            adj[y].add(x)
    seen, comps = set(), []
    for t in alive:
        if t in seen:
            continue
        stack, comp = [t], []
        seen.add(t)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps
