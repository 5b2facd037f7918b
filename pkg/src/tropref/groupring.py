"""Sparse Laurent polynomials with exponents in Lambda^2 N / K."""

from __future__ import annotations

import logging
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from .lattice import (
    Sublattice,
    TwoForm,
    bivector_rank,
    neg,
    pair_indices,
    snf,
    two_form_on_bivector,
)

log = logging.getLogger(__name__)

Exponent = tuple[int, ...]


class NotAQuotient(ValueError):
    """Raised when projecting to a quotient whose kernel does not contain K."""


class QuotientGroup:
    """The group Lambda^2 N / K, with K given by generators.

    Coset representatives are the exponents reduced by the HNF basis of K,
    written in the ambient q_ij coordinates.  K is never saturated
    implicitly; a torsion quotient is supported and logged.
    """

    def __init__(self, r: int, generators: Iterable[Sequence[int]] = ()):
        self.r = r
        self.m = comb(r, 2)
        self.K = Sublattice(self.m, tuple(tuple(g) for g in generators))
        self._torsion: tuple[int, ...] | None = None
        if self.K.rank and self.torsion:
            log.warning("Lambda^2 N / K has torsion %s; exponents carry residues", self.torsion)

    @classmethod
    def trivial(cls, r: int) -> "QuotientGroup":
        return cls(r)

    @classmethod
    def of(cls, K: Sublattice) -> "QuotientGroup":
        return cls(bivector_rank(K.ambient), K.basis)

    @property
    def free_rank(self) -> int:
        return self.m - self.K.rank

    @property
    def torsion(self) -> tuple[int, ...]:
        """Invariant factors > 1 of K, i.e. the torsion of the quotient."""
        if self._torsion is None:
            if not self.K.rank:
                self._torsion = ()
            else:
                _, d, _ = snf(self.K.basis)
                self._torsion = tuple(
                    abs(d[i][i]) for i in range(self.K.rank) if abs(d[i][i]) > 1
                )
        return self._torsion

    def reduce(self, x: Sequence[int]) -> Exponent:
        if len(x) != self.m:
            raise ValueError(f"exponent has length {len(x)}, expected {self.m}")
        return self.K.reduce(x)

    def __eq__(self, other):
        return isinstance(other, QuotientGroup) and self.r == other.r and self.K == other.K

    def __hash__(self):
        return hash((self.r, self.K))

    def __repr__(self):
        return f"QuotientGroup(r={self.r}, K={list(self.K.basis)})"


class RingElement:
    """Element of Z[Lambda^2 N / K]; terms map coset representative -> coefficient."""

    __slots__ = ("group", "terms")

    def __init__(self, group: QuotientGroup, terms: Mapping[Sequence[int], int] | None = None):
        self.group = group
        out: dict[Exponent, int] = {}
        for e, c in (terms or {}).items():
            if c:
                k = group.reduce(e)
                out[k] = out.get(k, 0) + c
        self.terms = {k: v for k, v in out.items() if v}

    @classmethod
    def _raw(cls, group, terms):
        obj = cls.__new__(cls)
        obj.group = group
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, group: QuotientGroup) -> "RingElement":
        return cls._raw(group, {})

    @classmethod
    def one(cls, group: QuotientGroup) -> "RingElement":
        return cls._raw(group, {(0,) * group.m: 1})

    @classmethod
    def monomial(cls, group: QuotientGroup, exponent: Sequence[int], coeff: int = 1):
        return cls(group, {tuple(exponent): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "RingElement"):
        if self.group != other.group:
            raise ValueError("ring elements live in different quotients")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return RingElement._raw(self.group, out)

    def __neg__(self):
        return RingElement._raw(self.group, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return RingElement.zero(self.group)
            return RingElement._raw(self.group, {k: other * v for k, v in self.terms.items()})
        self._check(other)
        out: dict[Exponent, int] = {}
        red = self.group.reduce
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                k = red(tuple(x + y for x, y in zip(e1, e2)))
                out[k] = out.get(k, 0) + c1 * c2
        return RingElement._raw(self.group, {k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.group == other.group and self.terms == other.terms

    def __hash__(self):
        return hash((self.group, frozenset(self.terms.items())))

    def __repr__(self):
        return f"RingElement({canonical_print(self)})"

    def __str__(self):
        return canonical_print(self)


def reduce_exponent(group: QuotientGroup, x: Sequence[int]) -> Exponent:
    return group.reduce(x)


def binomial_term(group: QuotientGroup, pi: Sequence[int]) -> RingElement:
    """q^pi - q^-pi; vanishes when pi lies in K."""
    return RingElement(group, {tuple(pi): 1}) - RingElement(group, {neg(pi): 1})


def project(f: RingElement, coarse: QuotientGroup) -> RingElement:
    """Image of f under Z[Lambda^2 N / K] -> Z[Lambda^2 N / K'] for K inside K'."""
    fine = f.group
    if fine.r != coarse.r or not coarse.K.contains_lattice(fine.K):
        raise NotAQuotient("target kernel does not contain the source kernel")
    return RingElement(coarse, f.terms)


# ---------------------------------------------------------------------------
# Univariate specialisation q^pi -> t^omega(pi)


def specialize_one_variable(omega: TwoForm, f: RingElement) -> dict[int, int]:
    """Laurent polynomial in t as {exponent: coefficient}."""
    for g in f.group.K.basis:
        if two_form_on_bivector(omega, g):
            raise ValueError("2-form does not vanish on K; specialisation undefined")
    out: dict[int, int] = {}
    for e, c in f.terms.items():
        k = two_form_on_bivector(omega, e)
        out[k] = out.get(k, 0) + c
    return {k: v for k, v in out.items() if v}


def limit_q_to_1(g: Mapping[int, int], d: int) -> Fraction:
    """Value at t = 1 of g / (t - 1/t)^d, by exact division."""
    if not g:
        return Fraction(0)
    lo = min(g)
    # t^(d - lo) g is a polynomial divisible by (t^2 - 1)^d
    shift = d - lo
    deg = max(g) + shift
    poly = [0] * (deg + 1)
    for k, c in g.items():
        poly[k + shift] += c
    for _ in range(d):
        poly = _divide_t2_minus_1(poly)
    return Fraction(sum(poly))


def _divide_t2_minus_1(poly: list[int]) -> list[int]:
    """Exact division of a polynomial (ascending coefficients) by t^2 - 1."""
    if len(poly) < 3:
        if any(poly):
            raise ArithmeticError("polynomial not divisible by (t - 1/t)")
        return [0]
    rem = list(poly)
    quot = [0] * (len(poly) - 2)
    for i in range(len(poly) - 1, 1, -1):
        c = rem[i]
        quot[i - 2] = c
        rem[i] -= c
        rem[i - 2] += c
    if rem[0] or rem[1]:
        raise ArithmeticError("polynomial not divisible by (t - 1/t)")
    return quot


# ---------------------------------------------------------------------------
# Text form


def _monomial_text(e: Exponent, r: int) -> str:
    parts = []
    for (i, j), k in zip(pair_indices(r), e):
        if k == 0:
            continue
        name = f"q_{i + 1}{j + 1}" if r < 10 else f"q_{i + 1}_{j + 1}"
        parts.append(name if k == 1 else f"{name}^{k}")
    return "*".join(parts)


def sorted_terms(f: RingElement) -> list[tuple[Exponent, int]]:
    return sorted(f.terms.items(), key=lambda kv: kv[0], reverse=True)


def canonical_print(f: RingElement) -> str:
    """Deterministic text: terms in descending lexicographic exponent order."""
    if f.is_zero():
        return "0"
    out = []
    for idx, (e, c) in enumerate(sorted_terms(f)):
        mono = _monomial_text(e, f.group.r)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if idx == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


def machine_terms(f: RingElement) -> list[dict]:
    return [{"exponent": list(e), "coefficient": c} for e, c in sorted_terms(f)]


def parse_monomials(group: QuotientGroup, terms: Iterable[tuple[int, str, str]]) -> RingElement:
    """Build an element from (coefficient, numerator, denominator) triples.

    Numerator/denominator are whitespace-separated pair names such as "12 34",
    meaning q_12 * q_34.
    """
    idx = {f"{i + 1}{j + 1}": k for k, (i, j) in enumerate(pair_indices(group.r))}
    out = RingElement.zero(group)
    for coeff, num, den in terms:
        e = [0] * group.m
        for name in num.split():
            e[idx[name]] += 1
        for name in den.split():
            e[idx[name]] -= 1
        out = out + RingElement(group, {tuple(e): coeff})
    return out
