"""Random degrees, 2-forms and constrained problems for property tests."""

import random

from tropref.evaluation import GeneralProblem, ProblemError
from tropref.lattice import TwoForm, kernel_basis
from tropref.moduli import Degree


def random_degree(rng: random.Random, n: int, r: int, bound: int = 3, marked: int = 0) -> Degree:
    while True:
        slopes = [tuple(rng.randint(-bound, bound) for _ in range(r)) for _ in range(n - marked - 1)]
        slopes.append(tuple(-sum(s[i] for s in slopes) for i in range(r)))
        if all(any(s) for s in slopes):
            slopes += [(0,) * r] * marked
            return Degree.from_slopes(slopes)


def random_form(rng: random.Random, r: int, bound: int = 60) -> TwoForm:
    rows = [[0] * r for _ in range(r)]
    for i in range(r):
        for j in range(i + 1, r):
            rows[i][j] = rng.randint(-bound, bound)
    return TwoForm.from_upper(rows)


def random_covector_vanishing_on(rng, n, r, bound=9):
    """Random covector m with m(n) = 0 (any covector if n = 0)."""
    basis = kernel_basis([n], r).basis if any(n) else [tuple(int(i == j) for j in range(r)) for i in range(r)]
    while True:
        cs = [rng.randint(-bound, bound) for _ in basis]
        m = tuple(sum(c * b[i] for c, b in zip(cs, basis)) for i in range(r))
        if any(m):
            return m


def random_coranks(rng, degree: Degree):
    r = degree.r
    caps = [r if not any(n) else r - 1 for n in degree.slopes]
    total = degree.n + r - 3
    if total > sum(caps):
        return None
    cork = [0] * degree.n
    for _ in range(total):
        choices = [e for e in range(degree.n) if cork[e] < caps[e]]
        cork[rng.choice(choices)] += 1
    return cork


def random_general_problem(rng: random.Random, degree: Degree, coranks=None, phis=None) -> GeneralProblem:
    for _ in range(100):
        cork = coranks or random_coranks(rng, degree)
        if cork is None:
            raise ValueError("degree admits no balanced constraints")
        kernels = {
            e: [random_covector_vanishing_on(rng, degree.slopes[e], degree.r) for _ in range(c)]
            for e, c in enumerate(cork)
            if c
        }
        try:
            return GeneralProblem.from_kernels(degree, kernels, phis)
        except ProblemError:
            continue
    raise RuntimeError("could not build a random problem")


def hyperplane_problem(rng: random.Random, degree: Degree) -> GeneralProblem:
    """One generic hyperplane constraint per end (corank 1 everywhere)."""
    return random_general_problem(rng, degree, [1] * degree.n)
