"""Exact integer linear algebra on N = Z^r and its dual M, plus exterior algebra.

Vectors and covectors are plain tuples of ints.  Bivectors of Lambda^2 N are
tuples indexed by the pairs (i, j), i < j, in lexicographic order.  Elements
of Lambda^k M are :class:`Polyvector` instances with sparse coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, gcd
from typing import Iterable, Sequence

Vector = tuple[int, ...]


class RankMismatch(ValueError):
    pass


class DegenerateSpan(ValueError):
    """Raised when a Pluecker vector is requested for a degenerate span."""


def _check_same_rank(*vs: Sequence[int]) -> int:
    r = len(vs[0])
    for v in vs[1:]:
        if len(v) != r:
            raise RankMismatch(f"rank mismatch: {len(v)} != {r}")
    return r


def content(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def is_primitive(v: Sequence[int]) -> bool:
    return content(v) == 1


def primitive(v: Sequence[int]) -> Vector:
    g = content(v)
    if g == 0:
        raise ValueError("zero vector has no primitive part")
    return tuple(x // g for x in v)


def add(a: Sequence[int], b: Sequence[int]) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def neg(a: Sequence[int]) -> Vector:
    return tuple(-x for x in a)


def scale(c: int, a: Sequence[int]) -> Vector:
    return tuple(c * x for x in a)


def vsum(vs: Iterable[Sequence[int]], r: int) -> Vector:
    out = [0] * r
    for v in vs:
        for i, x in enumerate(v):
            out[i] += x
    return tuple(out)


def pair(m: Sequence[int], v: Sequence[int]) -> int:
    """Duality pairing <m, v>."""
    return sum(x * y for x, y in zip(m, v))


def basis_vector(r: int, i: int) -> Vector:
    return tuple(1 if j == i else 0 for j in range(r))


# ---------------------------------------------------------------------------
# Bivectors and 2-forms


def pair_indices(r: int) -> list[tuple[int, int]]:
    """Canonical order (0,1), (0,2), ..., (r-2, r-1) of the basis of Lambda^2."""
    return list(combinations(range(r), 2))


def bivector_rank(m: int) -> int:
    """Recover r from m = C(r, 2)."""
    r = 2
    while comb(r, 2) < m:
        r += 1
    if comb(r, 2) != m:
        raise ValueError(f"{m} is not a binomial C(r,2)")
    return r


def wedge_vectors(a: Sequence[int], b: Sequence[int]) -> Vector:
    """a ^ b in Lambda^2 N, coordinates a_i b_j - a_j b_i for i < j."""
    r = _check_same_rank(a, b)
    return tuple(a[i] * b[j] - a[j] * b[i] for i, j in pair_indices(r))


@dataclass(frozen=True)
class TwoForm:
    """Antisymmetric integer 2-form with matrix[i][j] = omega(e_i, e_j)."""

    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        mat = tuple(tuple(int(x) for x in row) for row in self.matrix)
        r = len(mat)
        if r < 2 or any(len(row) != r for row in mat):
            raise ValueError("2-form matrix must be square of size >= 2")
        for i in range(r):
            if mat[i][i] != 0:
                raise ValueError(f"2-form diagonal entry ({i + 1},{i + 1}) is nonzero")
            for j in range(i + 1, r):
                if mat[i][j] != -mat[j][i]:
                    raise ValueError(
                        f"2-form matrix not antisymmetric at ({i + 1},{j + 1})"
                    )
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def from_upper(cls, rows: Sequence[Sequence[int]]) -> "TwoForm":
        """Build from the strict upper triangle, ignoring the lower one."""
        r = len(rows)
        mat = [[0] * r for _ in range(r)]
        for i in range(r):
            for j in range(i + 1, r):
                mat[i][j] = rows[i][j]
                mat[j][i] = -rows[i][j]
        return cls(tuple(map(tuple, mat)))

    @classmethod
    def from_bivector_coords(cls, coords: Sequence[int], r: int) -> "TwoForm":
        mat = [[0] * r for _ in range(r)]
        for c, (i, j) in zip(coords, pair_indices(r)):
            mat[i][j] = c
            mat[j][i] = -c
        return cls(tuple(map(tuple, mat)))

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def __call__(self, a: Sequence[int], b: Sequence[int]) -> int:
        return two_form_on_pair(self, a, b)

    def contract(self, n: Sequence[int]) -> Vector:
        """The covector iota_n omega = omega(n, -)."""
        r = self.rank
        return tuple(sum(n[i] * self.matrix[i][j] for i in range(r)) for j in range(r))

    def upper(self) -> Vector:
        return tuple(self.matrix[i][j] for i, j in pair_indices(self.rank))


def two_form_on_pair(omega: TwoForm, a: Sequence[int], b: Sequence[int]) -> int:
    r = _check_same_rank(a, b)
    if r != omega.rank:
        raise RankMismatch(f"rank mismatch: vectors {r}, form {omega.rank}")
    m = omega.matrix
    return sum(a[i] * m[i][j] * b[j] for i in range(r) for j in range(r) if m[i][j])


def two_form_on_bivector(omega: TwoForm, pi: Sequence[int]) -> int:
    if len(pi) != comb(omega.rank, 2):
        raise RankMismatch("bivector and 2-form ranks differ")
    return sum(c * w for c, w in zip(pi, omega.upper()))


# ---------------------------------------------------------------------------
# Exterior algebra of M


def _merge_sign(s: tuple[int, ...], t: tuple[int, ...]) -> int:
    """Sign of the shuffle sorting s + t (s, t sorted and disjoint)."""
    inversions = 0
    j = 0
    for x in s:
        while j < len(t) and t[j] < x:
            j += 1
        inversions += j
    return -1 if inversions % 2 else 1


@dataclass(frozen=True)
class Polyvector:
    """Element of Lambda^grade M, M of rank r, keyed by sorted index subsets."""

    rank: int
    grade: int
    coeffs: dict = field(default_factory=dict, hash=False, compare=False)

    def __post_init__(self):
        if not 0 <= self.grade <= self.rank:
            raise ValueError(f"grade {self.grade} out of range for rank {self.rank}")
        clean = {tuple(k): int(v) for k, v in self.coeffs.items() if v}
        for k in clean:
            if len(k) != self.grade:
                raise ValueError("coefficient key of wrong grade")
        object.__setattr__(self, "coeffs", clean)

    def __eq__(self, other):
        if not isinstance(other, Polyvector):
            return NotImplemented
        if self.rank != other.rank:
            return False
        if not self.coeffs and not other.coeffs:
            return True
        return self.grade == other.grade and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.rank, self.grade, frozenset(self.coeffs.items())))

    @classmethod
    def one(cls, r: int) -> "Polyvector":
        return cls(r, 0, {(): 1})

    @classmethod
    def zero(cls, r: int, grade: int = 0) -> "Polyvector":
        return cls(r, min(grade, r), {})

    @classmethod
    def covector(cls, m: Sequence[int]) -> "Polyvector":
        return cls(len(m), 1, {(i,): x for i, x in enumerate(m) if x})

    @classmethod
    def of_covectors(cls, ms: Sequence[Sequence[int]], r: int) -> "Polyvector":
        out = cls.one(r)
        for m in ms:
            out = wedge_poly(out, cls.covector(m))
        return out

    def is_zero(self) -> bool:
        return not self.coeffs

    def __neg__(self):
        return Polyvector(self.rank, self.grade, {k: -v for k, v in self.coeffs.items()})

    def __add__(self, other: "Polyvector") -> "Polyvector":
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.grade != other.grade or self.rank != other.rank:
            raise ValueError("cannot add polyvectors of different grades")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return Polyvector(self.rank, self.grade, out)

    def scaled(self, c: int) -> "Polyvector":
        return Polyvector(self.rank, self.grade, {k: c * v for k, v in self.coeffs.items()})

    def top_coefficient(self) -> int:
        """Coefficient against e_1^* ^ ... ^ e_r^* (0 unless grade == rank)."""
        if self.grade != self.rank:
            return 0
        return self.coeffs.get(tuple(range(self.rank)), 0)

    def evaluate(self, vectors: Sequence[Sequence[int]]) -> int:
        """rho(v_1, ..., v_k) as an alternating multilinear form."""
        if len(vectors) != self.grade:
            raise ValueError("need exactly grade many vectors")
        total = 0
        for key, c in self.coeffs.items():
            mat = [[v[i] for i in key] for v in vectors]
            total += c * det(mat)
        return total

    def content(self) -> int:
        return content(self.coeffs.values())


def wedge_poly(p: Polyvector, q: Polyvector) -> Polyvector:
    if p.rank != q.rank:
        raise RankMismatch("polyvector ranks differ")
    k = p.grade + q.grade
    if k > p.rank:
        # Lambda^{>r} M = 0
        return Polyvector.zero(p.rank, p.rank)
    out: dict[tuple[int, ...], int] = {}
    for s, a in p.coeffs.items():
        ss = set(s)
        for t, b in q.coeffs.items():
            if ss.intersection(t):
                continue
            key = tuple(sorted(s + t))
            out[key] = out.get(key, 0) + _merge_sign(s, t) * a * b
    return Polyvector(p.rank, k, out)


def interior_product(n: Sequence[int], rho: Polyvector) -> Polyvector:
    """iota_n rho, of grade one less."""
    if rho.grade == 0:
        raise ValueError("interior product of a grade-0 polyvector")
    if len(n) != rho.rank:
        raise RankMismatch("vector and polyvector ranks differ")
    out: dict[tuple[int, ...], int] = {}
    for s, c in rho.coeffs.items():
        for pos, i in enumerate(s):
            if n[i]:
                key = s[:pos] + s[pos + 1:]
                out[key] = out.get(key, 0) + (-1) ** pos * n[i] * c
    return Polyvector(rho.rank, rho.grade - 1, out)


def volume_form(r: int) -> Polyvector:
    return Polyvector(r, r, {tuple(range(r)): 1})


def two_form_as_polyvector(omega: TwoForm) -> Polyvector:
    return Polyvector(
        omega.rank, 2, {(i, j): c for (i, j), c in zip(pair_indices(omega.rank), omega.upper())}
    )


# ---------------------------------------------------------------------------
# Determinants and linear solves


def det(mat: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (Bareiss fraction-free elimination)."""
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = [list(row) for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def solve(mat: Sequence[Sequence[int]], rhs: Sequence) -> list[Fraction] | None:
    """Unique rational solution of mat x = rhs, or None if mat is singular."""
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(mat, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col] / p
                ri, rc = a[i], a[col]
                for j in range(col, n + 1):
                    ri[j] -= f * rc[j]
    return [a[i][n] / a[i][i] for i in range(n)]


def rank(mat: Sequence[Sequence]) -> int:
    rows = [[Fraction(x) for x in row] for row in mat]
    if not rows:
        return 0
    ncols = len(rows[0])
    rk = 0
    for col in range(ncols):
        piv = next((i for i in range(rk, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        for i in range(rk + 1, len(rows)):
            if rows[i][col] != 0:
                f = rows[i][col] / rows[rk][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rk])]
        rk += 1
    return rk


# ---------------------------------------------------------------------------
# Normal forms and sublattices


def hnf(rows: Sequence[Sequence[int]], ncols: int | None = None) -> list[Vector]:
    """Row Hermite normal form; zero rows dropped.

    Pivots are positive, entries above a pivot lie in [0, pivot).
    """
    a = [list(r) for r in rows]
    if ncols is None:
        ncols = len(a[0]) if a else 0
    p = 0
    for col in range(ncols):
        while True:
            nz = [i for i in range(p, len(a)) if a[i][col] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(a[i][col]))
            a[p], a[best] = a[best], a[p]
            done = True
            for i in range(p + 1, len(a)):
                if a[i][col]:
                    q = a[i][col] // a[p][col]
                    a[i] = [x - q * y for x, y in zip(a[i], a[p])]
                    if a[i][col]:
                        done = False
            if done:
                break
        if p >= len(a) or a[p][col] == 0:
            continue
        if a[p][col] < 0:
            a[p] = [-x for x in a[p]]
        for i in range(p):
            q = a[i][col] // a[p][col]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[p])]
        p += 1
        if p == len(a):
            break
    return [tuple(r) for r in a[:p]]


def snf(mat: Sequence[Sequence[int]]):
    """Smith normal form: returns (U, D, V) with U * A * V == D, all integer lists."""
    from sympy import ZZ
    from sympy.polys.matrices import DomainMatrix
    from sympy.polys.matrices.normalforms import smith_normal_decomp

    rows = [list(map(int, r)) for r in mat]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    dm = DomainMatrix([[ZZ(x) for x in r] for r in rows], (nrows, ncols), ZZ)
    d, u, v = smith_normal_decomp(dm)

    def tolist(m):
        return [[int(x) for x in row] for row in m.to_list()]

    return tolist(u), tolist(d), tolist(v)


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def kernel_rows(mat: Sequence[Sequence[int]], ncols: int) -> list[Vector]:
    """HNF basis of {x in Z^ncols : mat . x = 0}, a saturated lattice."""
    k = len(mat)
    if k == 0:
        return [basis_vector(ncols, i) for i in range(ncols)]
    aug = [
        tuple(mat[i][j] for i in range(k)) + basis_vector(ncols, j)
        for j in range(ncols)
    ]
    h = hnf(aug, k + ncols)
    ker = [row[k:] for row in h if not any(row[:k])]
    return hnf(ker, ncols)


@dataclass(frozen=True)
class Sublattice:
    """Subgroup of Z^ambient generated by integer rows."""

    ambient: int
    generators: tuple[Vector, ...] = ()

    def __post_init__(self):
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        for g in gens:
            if len(g) != self.ambient:
                raise RankMismatch("generator of wrong length")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "_basis", tuple(hnf(gens, self.ambient)) if gens else ())

    @property
    def basis(self) -> tuple[Vector, ...]:
        """Unique HNF basis."""
        return self._basis

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def corank(self) -> int:
        return self.ambient - self.rank

    def reduce(self, v: Sequence[int]) -> Vector:
        """Canonical representative of v modulo the lattice."""
        out = list(v)
        for row in self.basis:
            p = next(i for i, x in enumerate(row) if x)
            q = out[p] // row[p]
            if q:
                out = [x - q * y for x, y in zip(out, row)]
        return tuple(out)

    def __contains__(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def contains_lattice(self, other: "Sublattice") -> bool:
        return all(g in self for g in other.basis)

    def __eq__(self, other):
        if not isinstance(other, Sublattice):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def saturation(self) -> "Sublattice":
        return saturate(self)

    def is_saturated(self) -> bool:
        return saturate(self) == self

    def index_in_saturation(self) -> int:
        """[sat(L) : L], the product of the invariant factors."""
        if not self.basis:
            return 1
        _, d, _ = snf(self.basis)
        out = 1
        for i in range(self.rank):
            out *= abs(d[i][i])
        return out

    def plus(self, *vs: Sequence[int]) -> "Sublattice":
        return Sublattice(self.ambient, self.basis + tuple(tuple(v) for v in vs))

    def __repr__(self):
        return f"Sublattice({self.ambient}, {list(self.basis)})"


def kernel_basis(mat: Sequence[Sequence[int]], ncols: int) -> Sublattice:
    return Sublattice(ncols, tuple(kernel_rows(mat, ncols)))


def orthogonal_dual(lat: Sublattice) -> Sublattice:
    """{m in M : m(L) = 0}."""
    return Sublattice(lat.ambient, tuple(kernel_rows(lat.basis, lat.ambient)))


def saturate(lat: Sublattice) -> Sublattice:
    return orthogonal_dual(orthogonal_dual(lat))


def pluecker(lat: Sublattice, extra: Sequence[int] | None = None) -> Polyvector:
    """Wedge of the HNF basis of the orthogonal dual of L (+ <extra>)."""
    span = lat if extra is None else lat.plus(extra)
    if extra is not None and span.rank != lat.rank + 1:
        raise DegenerateSpan("extra vector lies in the rational span of the lattice")
    dual = orthogonal_dual(span)
    return Polyvector.of_covectors(dual.basis, lat.ambient)
