"""YAML problem files.

Example::

    rank: 4
    degree:
      - [1, 0, 0, 0]
      - {label: p, slope: [0, 0, 0, 0]}   # a marked point
      - ...
    kind: general            # or omega
    omega: [[0, 1], [-1, 0]] # full antisymmetric matrix
    e0: "1"                  # label of the end carrying the line constraint
    delta: [0, 1]            # optional
    constraints:             # general problems: covectors cutting out L_e
      "1": [[0, 1, 0, 0]]
    spans:                   # alternative: vectors spanning L_e
      "2": [[0, 0, 1, 0]]
    phi:                     # linear forms at marked points
      p: [1, 2, 0, 0]
    seed: 0
    trials: 20
"""

from __future__ import annotations

from dataclasses import dataclass, field

import yaml

from .evaluation import GeneralProblem, OmegaProblem, ProblemError, default_delta
from .lattice import TwoForm
from .moduli import Degree

KNOWN_KEYS = {
    "rank", "degree", "kind", "omega", "omega_fine", "e0", "delta",
    "constraints", "spans", "phi", "seed", "trials",
}


class ProblemFileError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "<problem>"):
        self.line = line
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


@dataclass
class ParsedProblem:
    degree: Degree
    kind: str
    omega: TwoForm | None
    e0: int
    delta: tuple[int, ...] | None
    problem: object
    omega_fine: TwoForm | None = None
    seed: int = 0
    trials: int = 20
    lines: dict = field(default_factory=dict)


class _Reader:
    def __init__(self, source: str):
        self.source = source

    def fail(self, node, msg):
        line = node.start_mark.line + 1 if node is not None else None
        raise ProblemFileError(msg, line, self.source)

    def mapping(self, node, what):
        if not isinstance(node, yaml.MappingNode):
            self.fail(node, f"{what} must be a mapping")
        out = {}
        for k, v in node.value:
            if not isinstance(k, yaml.ScalarNode):
                self.fail(k, f"keys of {what} must be scalars")
            out[str(k.value)] = (k, v)
        return out

    def seq(self, node, what):
        if not isinstance(node, yaml.SequenceNode):
            self.fail(node, f"{what} must be a list")
        return node.value

    def integer(self, node, what):
        if not isinstance(node, yaml.ScalarNode):
            self.fail(node, f"{what} must be an integer")
        try:
            return int(node.value)
        except ValueError:
            self.fail(node, f"{what} must be an integer, got {node.value!r}")

    def vector(self, node, what, length=None):
        out = [self.integer(x, f"entry of {what}") for x in self.seq(node, what)]
        if length is not None and len(out) != length:
            self.fail(node, f"{what} has {len(out)} entries, expected {length}")
        return tuple(out)

    def matrix(self, node, what, r):
        rows = self.seq(node, what)
        if len(rows) != r:
            self.fail(node, f"{what} must have {r} rows")
        return [self.vector(row, f"row of {what}", r) for row in rows]


def _two_form(reader: _Reader, node, r: int, what: str) -> TwoForm:
    mat = reader.matrix(node, what, r)
    try:
        return TwoForm(tuple(map(tuple, mat)))
    except ValueError as exc:
        reader.fail(node, str(exc))


def parse_problem(text: str, source: str = "<problem>") -> ParsedProblem:
    reader = _Reader(source)
    try:
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ProblemFileError(f"invalid YAML: {getattr(exc, 'problem', exc)}", mark.line + 1 if mark else None, source)
    if root is None:
        raise ProblemFileError("empty problem file", None, source)
    top = reader.mapping(root, "problem file")
    for key, (knode, _) in top.items():
        if key not in KNOWN_KEYS:
            reader.fail(knode, f"unknown key {key!r}")
    for key in ("rank", "degree", "kind"):
        if key not in top:
            reader.fail(root, f"missing key {key!r}")
    r = reader.integer(top["rank"][1], "rank")
    if r < 2:
        reader.fail(top["rank"][1], "rank must be at least 2")

    labels, slopes = [], []
    for i, entry in enumerate(reader.seq(top["degree"][1], "degree")):
        if isinstance(entry, yaml.MappingNode):
            m = reader.mapping(entry, "degree entry")
            if "slope" not in m:
                reader.fail(entry, "degree entry needs a slope")
            slopes.append(reader.vector(m["slope"][1], "slope", r))
            labels.append(str(m["label"][1].value) if "label" in m else str(i + 1))
        else:
            slopes.append(reader.vector(entry, "slope", r))
            labels.append(str(i + 1))
    try:
        degree = Degree(tuple(labels), tuple(slopes))
    except ValueError as exc:
        reader.fail(top["degree"][1], str(exc))

    def end_index(node):
        label = str(node.value)
        if label not in degree.labels:
            reader.fail(node, f"unknown end label {label!r}")
        return degree.index(label)

    kind_node = top["kind"][1]
    kind = str(kind_node.value)
    if kind not in ("omega", "general"):
        reader.fail(kind_node, "kind must be 'omega' or 'general'")

    omega = _two_form(reader, top["omega"][1], r, "omega") if "omega" in top else None
    omega_fine = _two_form(reader, top["omega_fine"][1], r, "omega_fine") if "omega_fine" in top else None
    if omega is None:
        reader.fail(root, "missing key 'omega'")
    e0 = end_index(top["e0"][1]) if "e0" in top else 0
    delta = reader.vector(top["delta"][1], "delta", r) if "delta" in top else None

    phis = {}
    if "phi" in top:
        for label, (knode, vnode) in reader.mapping(top["phi"][1], "phi").items():
            phis[end_index(knode)] = reader.vector(vnode, "phi", r)
    for i in degree.marked_points():
        if i not in phis and kind == "omega":
            reader.fail(top["degree"][1], f"marked point {degree.labels[i]} needs a linear form under 'phi'")

    seed = reader.integer(top["seed"][1], "seed") if "seed" in top else 0
    trials = reader.integer(top["trials"][1], "trials") if "trials" in top else 20

    try:
        if kind == "omega":
            if "constraints" in top or "spans" in top:
                reader.fail(top.get("constraints", top.get("spans"))[0], "omega problems take no constraint blocks")
            d = delta if delta is not None else default_delta(degree, omega, e0)
            problem = OmegaProblem(degree, omega, e0, d, phis)
        else:
            kernels, spans = {}, {}
            if "constraints" in top:
                for label, (knode, vnode) in reader.mapping(top["constraints"][1], "constraints").items():
                    kernels[end_index(knode)] = [reader.vector(v, "covector", r) for v in reader.seq(vnode, "constraint block")]
            if "spans" in top:
                for label, (knode, vnode) in reader.mapping(top["spans"][1], "spans").items():
                    idx = end_index(knode)
                    if idx in kernels:
                        reader.fail(knode, f"end {label} has both constraints and spans")
                    spans[idx] = [reader.vector(v, "vector", r) for v in reader.seq(vnode, "span block")]
            problem = _general(degree, kernels, spans, phis)
    except ProblemError as exc:
        raise ProblemFileError(str(exc), None, source) from exc

    return ParsedProblem(degree, kind, omega, e0, delta, problem, omega_fine, seed, trials)


def _general(degree: Degree, kernels, spans, phis) -> GeneralProblem:
    """Constraint blocks by covectors, by spanning vectors, or absent (no constraint)."""
    from .evaluation import orthogonal_dual
    from .lattice import Sublattice, kernel_basis

    rows = []
    r = degree.r
    for e in range(degree.n):
        n = degree.slopes[e]
        if e in spans:
            lat = Sublattice(r, tuple(spans[e]))
        elif e in kernels:
            lat = kernel_basis(kernels[e], r)
        else:
            rows.append(())
            continue
        if any(n):
            lat = lat.plus(n)
        rows.append(tuple(orthogonal_dual(lat).basis))
    return GeneralProblem(degree, tuple(rows), dict(phis))


def load_problem(path: str) -> ParsedProblem:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read(), path)
