"""Command line interface: tropref {enumerate,invariant,check,regression}."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .evaluation import GeneralProblem, OmegaProblem, ProblemError, codomain_basis_general
from .groupring import canonical_print, machine_terms, project
from .moduli import enumerate_trivalent, enumerate_walls
from .multiplicity import (
    SignUndefined,
    complex_mult_det,
    complex_mult_sink,
    omega_leaves,
    pluecker_leaves,
    refined_mult,
)
from .problemfile import ProblemFileError, load_problem
from .solver import (
    HypothesisViolation,
    InvarianceViolation,
    NonGeneric,
    check_continuity,
    check_wall_identities,
    invariant_general,
    invariant_omega,
    omega_group,
    q1_limit_check,
)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_NONGENERIC = 2
EXIT_VIOLATION = 3
EXIT_HYPOTHESIS = 4


class CheckFailed(RuntimeError):
    pass


def _emit(args, text_lines, data):
    if args.format == "machine":
        print(json.dumps(data, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _poly_data(f):
    return {"text": canonical_print(f), "terms": machine_terms(f)}


# ---------------------------------------------------------------------------


def cmd_enumerate(args) -> int:
    prob = load_problem(args.problem)
    d, problem = prob.degree, prob.problem
    types = enumerate_trivalent(d.n)
    walls = enumerate_walls(d.n) if d.n >= 4 else []
    group = omega_group(d, prob.omega)
    lines = [f"types: {len(types)}", f"walls: {len(walls)}"]
    rows = []
    for t in types:
        m = complex_mult_det(t, problem)
        try:
            b = canonical_print(refined_mult(t, d, prob.omega, group))
        except SignUndefined:
            b = "undefined"
        lines.append(f"{t.name(d.labels)}\tm={m}\tB={b}")
        rows.append({"type": t.name(d.labels), "key": [list(e) for e in t.key], "complex": m, "refined": b})
    _emit(args, lines, {"types": rows, "walls": [w.ctype.name(d.labels) for w in walls]})
    return EXIT_OK


def _invariant(prob, args):
    trials = args.trials if args.trials is not None else prob.trials
    seed = args.seed if args.seed is not None else prob.seed
    if prob.kind == "omega":
        p = prob.problem
        return invariant_omega(
            prob.degree, prob.omega, prob.e0, p.delta, trials=trials, seed=seed,
            phis=p.phis, jobs=args.jobs,
        )
    return invariant_general(
        prob.problem, prob.omega, prob.e0, prob.delta, trials=trials, seed=seed, jobs=args.jobs
    )


def cmd_invariant(args) -> int:
    prob = load_problem(args.problem)
    rep = _invariant(prob, args)
    d = prob.degree
    counts = [len(t.solutions) for t in rep.trials]
    lines = [
        f"invariant: {canonical_print(rep.polynomial)}",
        f"K: {list(map(list, rep.group.K.basis))}",
        f"complex count: {rep.complex_count}",
        f"trials: {len(rep.trials)} (all agree), solutions per trial: {min(counts)}..{max(counts)}",
    ]
    for k, v in rep.metadata.items():
        if k not in ("K",):
            lines.append(f"{k}: {v}")
    data = {
        "invariant": _poly_data(rep.polynomial),
        "K": [list(b) for b in rep.group.K.basis],
        "complex_count": rep.complex_count,
        "metadata": rep.metadata,
        "trials": [
            {
                "seed": t.seed,
                "delta": list(t.delta) if t.delta else None,
                "targets": t.targets,
                "solutions": [s.ctype.name(d.labels) for s in t.solutions],
            }
            for t in rep.trials
        ],
    }
    if rep.signs:
        data["signs"] = [{"key": [list(e) for e in k], "sign": s} for k, s in sorted(rep.signs.items())]
    _emit(args, lines, data)
    return EXIT_OK


def _check_walls(prob):
    rows = None
    if isinstance(prob.problem, GeneralProblem):
        rows = codomain_basis_general(prob.problem)
    res = check_wall_identities(prob.degree, prob.omega, rows=rows, e0=prob.e0, delta=prob.delta)
    out = []
    for w in res:
        ok = w.det_sum_ok and w.refined_ok and w.displayed_ok
        out.append((w.wall, ok, f"dets={list(w.determinants)} sides={list(w.side_signs)}"))
    return out


def _check_sink(prob):
    d, p = prob.degree, prob.problem
    leaves = omega_leaves(p) if isinstance(p, OmegaProblem) else pluecker_leaves(p)
    out = []
    for t in enumerate_trivalent(d.n):
        det = complex_mult_det(t, p)
        sinks = [complex_mult_sink(t, d, leaves, v) for v in t.vertices]
        out.append((t.name(d.labels), all(s == det for s in sinks), f"det={det} sinks={sinks}"))
    return out


def _check_continuity(prob):
    if prob.omega_fine is None:
        raise ProblemFileError("continuity check needs 'omega_fine' in the problem file")
    ok = check_continuity(prob.degree, prob.omega, prob.omega_fine, prob.e0)
    return [("projection", ok, "")]


def _check_q1(prob):
    if prob.kind != "omega":
        raise ProblemFileError("the q -> 1 check applies to omega problems")
    lc = q1_limit_check(prob.degree, prob.omega, prob.e0)
    return [("q->1", lc.ok, f"limit={lc.refined_limit} scale={lc.scale} complex={lc.complex_count}")]


CHECKS = {"walls": _check_walls, "sink": _check_sink, "continuity": _check_continuity, "q1": _check_q1}


def cmd_check(args) -> int:
    prob = load_problem(args.problem)
    results = CHECKS[args.which](prob)
    lines = [f"{'PASS' if ok else 'FAIL'}\t{name}\t{info}".rstrip() for name, ok, info in results]
    failed = sum(not ok for _, ok, _ in results)
    lines.append(f"{args.which}: {len(results) - failed}/{len(results)} passed")
    _emit(args, lines, {"check": args.which, "results": [{"name": n, "ok": ok, "info": i} for n, ok, i in results]})
    if failed:
        raise CheckFailed(f"{failed} {args.which} checks failed")
    return EXIT_OK


def regression_table(seed: int = 0, trials: int = 20):
    """(name, ok, detail) rows for the embedded reference problems."""
    from . import fixtures as fx

    d = fx.LINES_R4
    rows = []
    cache = {}

    def omega_inv(name, e0):
        if (name, e0) not in cache:
            cache[(name, e0)] = invariant_omega(d, fx.form(name), e0, trials=trials, seed=seed)
        return cache[(name, e0)]

    rep = omega_inv("omega1", 0)
    rows.append(("omega1 e1", rep.polynomial == fx.expected(("omega1", "1"), rep.group), f"{len(rep.polynomial.terms)} terms"))
    for e0, key in ((0, "1"), (2, "1"), (1, "2")):
        rep = omega_inv("omega2", e0)
        rows.append((f"omega2 e{e0 + 1}", rep.polynomial == fx.expected(("omega2", key), rep.group), f"{len(rep.polynomial.terms)} terms"))
    rep0 = omega_inv("omega0", 0)
    rows.append(("omega0 e1", rep0.polynomial == fx.expected(("omega0", "1"), rep0.group), f"K={list(rep0.group.K.basis)}"))
    for name in ("omega+", "omega-"):
        rep = omega_inv(name, 0)
        ok = rep.polynomial == fx.expected((name, "1"), rep.group)
        ok = ok and project(rep.polynomial, rep0.group) == rep0.polynomial
        rows.append((f"{name} e1 and projection", ok, ""))
    gp = GeneralProblem.from_kernels(d, fx.GENERAL_KERNELS)
    rep = invariant_general(gp, fx.form("omega3"), trials=trials, seed=seed)
    exp = fx.expected(("omega3", "general"), rep.group)
    rows.append(("general constraints omega3", rep.polynomial in (exp, -exp), "up to overall sign"))
    tp = GeneralProblem.from_kernels(d, fx.TWO_POINT_KERNELS)
    rep = invariant_general(tp, fx.form("omega4"), trials=trials, seed=seed)
    ok = rep.polynomial == fx.two_point_expected(rep.group) and all(len(t.solutions) == 1 for t in rep.trials)
    rows.append(("two points omega4", ok, f"K={list(rep.group.K.basis)}"))
    return rows


def cmd_regression(args) -> int:
    trials = args.trials if args.trials is not None else 20
    seed = args.seed if args.seed is not None else 0
    rows = regression_table(seed, trials)
    lines = [f"{'PASS' if ok else 'FAIL'}\t{name}\t{info}".rstrip() for name, ok, info in rows]
    _emit(args, lines, {"results": [{"name": n, "ok": ok, "info": i} for n, ok, i in rows]})
    if not all(ok for _, ok, _ in rows):
        raise CheckFailed("regression mismatch")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="base seed for random instances")
    common.add_argument("--trials", type=int, default=None, help="number of random instances (default 20)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for trials")
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="tropref", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("enumerate", parents=[common], help="list combinatorial types and walls")
    s.add_argument("problem")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("invariant", parents=[common], help="compute the refined invariant")
    s.add_argument("problem")
    s.set_defaults(func=cmd_invariant)

    s = sub.add_parser("check", parents=[common], help="run a verification")
    s.add_argument("which", choices=sorted(CHECKS))
    s.add_argument("problem")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("regression", parents=[common], help="reproduce the reference examples for lines in R^4")
    s.set_defaults(func=cmd_regression)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ProblemFileError, ProblemError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NonGeneric as exc:
        print(f"non-generic: {exc}", file=sys.stderr)
        return EXIT_NONGENERIC
    except (InvarianceViolation, CheckFailed) as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (HypothesisViolation, SignUndefined) as exc:
        print(f"hypothesis: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS


if __name__ == "__main__":
    sys.exit(main())
