"""Combinatorial types of rational tropical curves of a given degree.

A type is encoded by its clades: rooting the tree at end 0, every bounded
edge is identified with the set of end labels lying beyond it (the side not
containing 0).  Each vertex is identified with the clade of labels below it;
the vertex adjacent to end 0 carries the full clade {1, ..., n-1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .lattice import Vector, vsum, wedge_vectors

Clade = frozenset


@dataclass(frozen=True)
class Degree:
    """Ordered list of labelled end slopes summing to zero."""

    labels: tuple[str, ...]
    slopes: tuple[Vector, ...]

    def __post_init__(self):
        slopes = tuple(tuple(int(x) for x in s) for s in self.slopes)
        object.__setattr__(self, "slopes", slopes)
        if len(slopes) < 3:
            raise ValueError("a degree needs at least 3 ends")
        if len(self.labels) != len(slopes):
            raise ValueError("one label per slope")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("end labels must be distinct")
        r = len(slopes[0])
        if r < 2 or any(len(s) != r for s in slopes):
            raise ValueError("all slopes must share a rank r >= 2")
        if any(vsum(slopes, r)):
            raise ValueError("slopes do not satisfy the balancing condition")

    @classmethod
    def from_slopes(cls, slopes: Sequence[Sequence[int]], labels=None) -> "Degree":
        if labels is None:
            labels = tuple(str(i + 1) for i in range(len(slopes)))
        return cls(tuple(labels), tuple(tuple(s) for s in slopes))

    @property
    def n(self) -> int:
        return len(self.slopes)

    @property
    def r(self) -> int:
        return len(self.slopes[0])

    def marked_points(self) -> list[int]:
        return [i for i, s in enumerate(self.slopes) if not any(s)]

    def slope_sum(self, labels: Iterable[int]) -> Vector:
        return vsum((self.slopes[i] for i in labels), self.r)

    def index(self, label: str) -> int:
        return self.labels.index(label)



class CombinatorialType:
    """Labelled tree on ends 0..n-1, possibly with higher-valent vertices."""

    def __init__(self, n: int, edges: Sequence[frozenset]):
        self.n = n
        clean = set()
        for e in edges:
            e = frozenset(e)
            if 0 in e:
                e = frozenset(range(n)) - e
            if not 2 <= len(e) <= n - 2:
                raise ValueError(f"bad split {sorted(e)}")
            clean.add(e)
        for a, b in combinations(clean, 2):
            if not (a <= b or b <= a or not (a & b)):
                raise ValueError("incompatible splits")
        self.edges = tuple(sorted(clean, key=lambda s: tuple(sorted(s))))

    # ----- identity

    @cached_property
    def key(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(e)) for e in self.edges)

    def __eq__(self, other):
        return isinstance(other, CombinatorialType) and self.n == other.n and self.key == other.key

    def __hash__(self):
        return hash((self.n, self.key))

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return f"CombinatorialType({self.n}, {self.name()})"

    # ----- structure

    @cached_property
    def vertices(self) -> tuple[frozenset, ...]:
        """Vertex clades; the first one is the vertex adjacent to end 0."""
        full = frozenset(range(1, self.n))
        return (full,) + self.edges

    @property
    def root(self) -> frozenset:
        return self.vertices[0]

    @cached_property
    def _children(self) -> dict:
        """vertex clade -> (child vertex clades, end labels attached)."""
        out = {}
        for v in self.vertices:
            subs = [e for e in self.edges if e < v]
            maximal = [e for e in subs if not any(e < f for f in subs)]
            covered = frozenset().union(*maximal) if maximal else frozenset()
            ends = sorted(v - covered)
            out[v] = (tuple(sorted(maximal, key=lambda s: sorted(s))), tuple(ends))
        return out

    def child_vertices(self, v: frozenset) -> tuple[frozenset, ...]:
        return self._children[v][0]

    def attached_ends(self, v: frozenset) -> tuple[int, ...]:
        """Ends adjacent to v (end 0 is attached to the root vertex)."""
        ends = self._children[v][1]
        return ((0,) + ends) if v == self.root else ends

    def parent(self, v: frozenset) -> frozenset | None:
        if v == self.root:
            return None
        ups = [w for w in self.vertices if v < w]
        return min(ups, key=len)

    def valence(self, v: frozenset) -> int:
        return len(self.child_vertices(v)) + len(self._children[v][1]) + 1

    def end_vertex(self, e: int) -> frozenset:
        """Vertex to which end e is attached."""
        if e == 0:
            return self.root
        return min((v for v in self.vertices if e in v), key=len)

    @property
    def overvalence(self) -> int:
        return sum(self.valence(v) - 3 for v in self.vertices)

    def is_trivalent(self) -> bool:
        return len(self.edges) == self.n - 3

    def branches(self, v: frozenset) -> list[frozenset]:
        """Leaf sets of the branches at v; the branch containing end 0 first."""
        out = [frozenset(range(self.n)) - v]
        out += list(self.child_vertices(v))
        out += [frozenset([e]) for e in self._children[v][1]]
        return [out[0]] + sorted(out[1:], key=lambda s: min(s))

    def dimension(self, r: int) -> int:
        return len(self.edges) + r

    # ----- operations

    def contract(self, edge: frozenset) -> "CombinatorialType":
        return CombinatorialType(self.n, [e for e in self.edges if e != edge])

    def name(self, labels: Sequence[str] | None = None) -> str:
        """Nested-partition name such as 12//3//45 for trivalent caterpillars.

        Vertices are listed along the tree; each vertex shows its attached
        ends, separated by '//'.  Non-caterpillar trees fall back to the
        clade list.
        """
        labels = labels or [str(i + 1) for i in range(self.n)]
        chain = self._caterpillar()
        if chain is None:
            return "{" + ",".join("".join(labels[i] for i in sorted(e)) for e in self.edges) + "}"
        return "//".join("".join(labels[i] for i in ends) for ends in chain)

    def _caterpillar(self):
        """Vertex end-lists along a path if the bounded edges form a path."""
        adj = {v: set() for v in self.vertices}
        for v in self.vertices:
            p = self.parent(v)
            if p is not None:
                adj[v].add(p)
                adj[p].add(v)
        if any(len(a) > 2 for a in adj.values()):
            return None
        ends = {v: sorted(self.attached_ends(v)) for v in self.vertices}
        leaves = [v for v in self.vertices if len(adj[v]) <= 1]
        start = min(leaves, key=lambda v: min(ends[v]))
        path, prev, cur = [], None, start
        while cur is not None:
            path.append(ends[cur])
            nxt = [w for w in adj[cur] if w != prev]
            prev, cur = cur, (nxt[0] if nxt else None)
        return path

    # ----- geometry for a degree

    def edge_slope(self, degree: Degree, edge: frozenset) -> Vector:
        """Slope of a bounded edge oriented away from end 0 (towards its clade)."""
        return degree.slope_sum(edge)

    def outgoing_slopes(self, degree: Degree, v: frozenset) -> list[Vector]:
        return [degree.slope_sum(b) for b in self.branches(v)]

    def vertex_bivector(self, degree: Degree, v: frozenset) -> Vector:
        """a ^ b for two outgoing slopes at a trivalent vertex (sign unresolved)."""
        slopes = self.outgoing_slopes(degree, v)
        if len(slopes) != 3:
            raise ValueError("vertex bivector needs a trivalent vertex")
        return wedge_vectors(slopes[1], slopes[2])

    def path_edges(self, start: frozenset, end: int) -> list[tuple[frozenset, int]]:
        """Bounded edges between vertex `start` and end `end`, with orientation.

        Orientation +1 means the path crosses the edge towards its clade.
        """
        out = []
        for e in self.edges:
            beyond_end = end in e
            beyond_start = start <= e
            if beyond_end != beyond_start:
                out.append((e, 1 if beyond_end else -1))
        return out


# ---------------------------------------------------------------------------
# Enumeration


def _insert_leaf(n_new: int, splits: list[frozenset], target: frozenset | int) -> list[frozenset]:
    """Attach end n_new in the middle of an edge of a tree on ends 0..n_new-1.

    target is a clade (bounded edge) or an end label (its leaf edge).
    """
    k = n_new
    out = []
    for s in splits:
        # the new end joins every clade lying strictly above the target edge
        if isinstance(target, int):
            inside = target in s
        else:
            inside = target < s
        out.append(s | {k} if inside else s)
    if isinstance(target, int):
        if target != 0:
            out.append(frozenset([target, k]))
        else:
            # new edge separates {0, k} from the rest; clade side is the rest
            out.append(frozenset(range(1, k)))
    else:
        out.append(target | {k})
    return out


def enumerate_trivalent(n: int) -> list[CombinatorialType]:
    """All (2n-5)!! trivalent labelled trees on n ends, sorted by key."""
    if n < 3:
        raise ValueError("need at least 3 ends")
    trees: list[list[frozenset]] = [[]]
    for k in range(3, n):
        nxt = []
        for splits in trees:
            targets: list = list(range(k)) + list(splits)
            for t in targets:
                nxt.append(_insert_leaf(k, splits, t))
        trees = nxt
    types = {CombinatorialType(n, [s for s in t if 2 <= len(s) <= n - 2]) for t in trees}
    return sorted(types)


@dataclass(frozen=True)
class Wall:
    """Type with exactly one quadrivalent vertex."""

    ctype: CombinatorialType
    vertex: frozenset

    @cached_property
    def branches(self) -> list[frozenset]:
        return self.ctype.branches(self.vertex)

    def resolutions(self) -> list[tuple[str, CombinatorialType, frozenset]]:
        """The three smoothings 12//34, 13//24, 14//23.

        Returns (name, type, new edge clade).  Branch 1 is the one holding end 0.
        """
        b = self.branches
        out = []
        for j, (k, l) in ((1, (2, 3)), (2, (1, 3)), (3, (1, 2))):
            new = b[k] | b[l]
            name = f"1{j + 1}//{k + 1}{l + 1}"
            out.append((name, CombinatorialType(self.ctype.n, list(self.ctype.edges) + [new]), new))
        return out


def enumerate_walls(n: int) -> list[Wall]:
    if n < 4:
        raise ValueError("walls need at least 4 ends")
    seen = {}
    for t in enumerate_trivalent(n):
        for e in t.edges:
            w = t.contract(e)
            if w not in seen:
                quad = next(v for v in w.vertices if w.valence(v) == 4)
                seen[w] = Wall(w, quad)
    return [seen[k] for k in sorted(seen)]


def walls_of(t: CombinatorialType) -> list[Wall]:
    out = []
    for e in t.edges:
        w = t.contract(e)
        quad = next(v for v in w.vertices if w.valence(v) == 4)
        out.append(Wall(w, quad))
    return out


@dataclass(frozen=True)
class VertexType:
    blocks: tuple[frozenset, frozenset, frozenset]
    slopes: tuple[Vector, Vector, Vector]
    bivector: Vector


def vertex_types(degree: Degree) -> list[VertexType]:
    """All partitions of the ends into three nonempty blocks."""
    n = degree.n
    out = []
    rest_all = frozenset(range(n))
    # block containing end 0 first, then the block containing the smallest remaining label
    for mask in range(1 << (n - 1)):
        a = frozenset([0] + [i + 1 for i in range(n - 1) if mask >> i & 1])
        rest = sorted(rest_all - a)
        if len(rest) < 2:
            continue
        first = rest[0]
        others = rest[1:]
        for mask2 in range(1 << len(others)):
            b = frozenset([first] + [x for i, x in enumerate(others) if mask2 >> i & 1])
            c = rest_all - a - b
            if not c:
                continue
            sa, sb, sc = (degree.slope_sum(x) for x in (a, b, c))
            out.append(VertexType((a, b, c), (sa, sb, sc), wedge_vectors(sa, sb)))
    return out
