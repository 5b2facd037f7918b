"""Reference problems for tropical lines in R^4 and their published invariants.

Polynomials are stored as (coefficient, numerator, denominator) triples,
where numerator and denominator list pair names: (2, "12 34", "13") stands
for 2 * q_12 q_34 / q_13.
"""

from __future__ import annotations

from .groupring import QuotientGroup, RingElement, parse_monomials
from .lattice import TwoForm
from .moduli import Degree

LINES_R4 = Degree.from_slopes(
    [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (-1, -1, -1, -1)]
)

# Full matrices as printed.  Two of them are not antisymmetric as printed;
# FORM_ENTRIES records which triangle is used (see the README).
PRINTED = {
    "omega1": [[0, -68, -53, 86], [68, 0, 46, -43], [53, -46, 0, 30], [-86, 43, -30, 0]],
    "omega2": [[0, 94, 23, 21], [-94, 0, 86, 11], [23, -86, 0, -27], [-21, -11, 27, 0]],
    "omega0": [[0, 0, 86, -20], [0, 0, -4, -22], [-86, 4, 0, -56], [20, 22, 56, 0]],
    "omega+": [[0, 1, 86, -20], [-1, 0, -4, -22], [-86, 4, 0, -56], [20, 22, 56, 0]],
    "omega-": [[0, -1, 86, -20], [1, 0, -4, -22], [-86, 4, 0, -56], [20, 22, 56, 0]],
    "omega3": [[0, 20, -51, 38], [-20, 0, 89, 13], [51, 4, 0, -24], [-38, -13, 24, 0]],
    "omega4": [[0, 1, 1, 1], [-1, 0, 0, 0], [-1, 0, 0, 0], [-1, 0, 0, 0]],
}

FORM_ENTRIES = {"omega2": "upper", "omega3": "upper"}


def form_from_lower(rows) -> TwoForm:
    r = len(rows)
    return TwoForm(tuple(tuple(rows[i][j] if i > j else -rows[j][i] for j in range(r)) for i in range(r)))


def form(name: str) -> TwoForm:
    rows = PRINTED[name]
    if FORM_ENTRIES.get(name, "upper") == "lower":
        return form_from_lower(rows)
    return TwoForm.from_upper(rows)


ALL6 = "12 13 14 23 24 34"

EXPECTED = {
    ("omega1", "1"): [
        (-1, ALL6, ""), (1, "", ALL6),
        (2, "12 13 14 23 24", "34"), (-2, "34", "12 13 14 23 24"),
        (-1, "12 13 14 23", "24 34"), (1, "24 34", "12 13 14 23"),
        (1, "12 13 14 34", "23 24"), (-1, "23 24", "12 13 14 34"),
        (-1, "12 13", "14 23 24 34"), (1, "14 23 24 34", "12 13"),
        (-1, "12 14 24 34", "13 23"), (1, "13 23", "12 14 24 34"),
        (1, "12 34", "13 14 23 24"), (-1, "13 14 23 24", "12 34"),
    ],
    ("omega2", "1"): [
        (1, "12 13 14 23 24", "34"), (-1, "34", "12 13 14 23 24"),
        (-1, "12 13 23", "14 24 34"), (1, "14 24 34", "12 13 23"),
        (-1, "12 13 14", "23 24 34"), (1, "23 24 34", "12 13 14"),
        (-1, "12 14 24 34", "13 23"), (1, "13 23", "12 14 24 34"),
        (1, "12 13 14 34", "23 24"), (-1, "23 24", "12 13 14 34"),
        (1, "12", "13 14 23 24 34"), (-1, "13 14 23 24 34", "12"),
    ],
    ("omega2", "2"): [
        (1, "12 13 14 23 24", "34"), (-1, "34", "12 13 14 23 24"),
        (-1, "12 13 23", "14 24 34"), (1, "14 24 34", "12 13 23"),
        (-1, "12 13 14", "23 24 34"), (1, "23 24 34", "12 13 14"),
        (-1, "12 14 24 34", "13 23"), (1, "13 23", "12 14 24 34"),
        (1, "12 13", "14 23 24 34"), (-1, "14 23 24 34", "12 13"),
        (1, "12 14 34", "13 23 24"), (-1, "13 23 24", "12 14 34"),
    ],
    ("omega0", "1"): [
        (1, "13 14 23 24 34", ""), (-1, "", "13 14 23 24 34"),
        (-1, "13 14 34", "23 24"), (1, "23 24", "13 14 34"),
        (1, "14 34", "13 23 24"), (-1, "13 23 24", "14 34"),
        (1, "13", "14 23 24 34"), (-1, "14 23 24 34", "13"),
    ],
    ("omega+", "1"): [
        (1, "13 14 23 24 34", "12"), (-1, "12", "13 14 23 24 34"),
        (-1, "12 13 14 34", "23 24"), (1, "23 24", "12 13 14 34"),
        (1, "12 14 34", "13 23 24"), (-1, "13 23 24", "12 14 34"),
        (1, "12 13", "14 23 24 34"), (-1, "14 23 24 34", "12 13"),
    ],
    ("omega-", "1"): [
        (1, ALL6, ""), (-1, "", ALL6),
        (-1, "12 13 14 34", "23 24"), (1, "23 24", "12 13 14 34"),
        (1, "12 14 34", "13 23 24"), (-1, "13 23 24", "12 14 34"),
        (1, "12 13", "14 23 24 34"), (-1, "14 23 24 34", "12 13"),
        (-1, "12 14 24 34", "13 23"), (1, "13 23", "12 14 24 34"),
        (-1, "12 13 23", "14 24 34"), (1, "14 24 34", "12 13 23"),
    ],
    ("omega3", "general"): [
        (1, "12 13 14 23 24", "34"), (-1, "34", "12 13 14 23 24"),
        (-1, "12 13 14 24 34", "23"), (1, "23", "12 13 14 24 34"),
        (1, "12 13 14 34", "23 24"), (-1, "23 24", "12 13 14 34"),
        (-1, "12 13 23", "14 24 34"), (1, "14 24 34", "12 13 23"),
        (-1, "12 14 34", "13 23 24"), (1, "13 23 24", "12 14 34"),
        (1, "12 34", "13 14 23 24"), (-1, "13 14 23 24", "12 34"),
    ],
}

# Constraint covectors of the general example, keyed by end index (0 = e1).
GENERAL_KERNELS = {
    0: [(0, 3780, -315, -2543), (0, -6958, 7243, 3904)],
    1: [(-25, 0, -16, -72)],
    2: [(-4387, 564, 0, 2857)],
    3: [(-720, -843, -718, 0)],
    4: [(-1091, -562, 653, 1000)],
}

TWO_POINT_KERNELS = {
    0: [(0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)],
    4: [(1, -1, 0, 0), (1, 0, -1, 0), (1, 0, 0, -1)],
}

OMEGA4_K = [
    (0, 0, 0, 1, 0, 0),
    (0, 0, 0, 0, 1, 0),
    (0, 0, 0, 0, 0, 1),
]


def expected(key, group: QuotientGroup) -> RingElement:
    return parse_monomials(group, EXPECTED[key])


def two_point_expected(group: QuotientGroup) -> RingElement:
    """(q_12 - 1/q_12)(q_13 - 1/q_13)(q_14 - 1/q_14)."""
    out = RingElement.one(group)
    for ij in ("12", "13", "14"):
        out = out * parse_monomials(group, [(1, ij, ""), (-1, "", ij)])
    return out
