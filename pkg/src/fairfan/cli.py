"""``fairfan gen|run``: instance generation and verification runs.

Exit codes: 0 every guarantee certified, 1 a guarantee failed, 2 bad
parameters or a request outside the constructive scope.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from . import adversarial, arrangement, fan, io, pipelines
from .geometry import check_partition
from .measures import MeasureError, coverage_counts, random_family

OK, VIOLATED, USAGE = 0, 1, 2


class ParameterError(ValueError):
    pass


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise ParameterError(f"missing {' '.join(missing)}")


def _write(path, text):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _family(args, d=None, m=None):
    """Family from --in, or a seeded random one."""
    if args.input:
        return io.load_family(args.input)
    d = d if d is not None else args.d
    if d is None:
        raise ParameterError("give --in or --d")
    if m is None:
        m = args.m
    if m is None:
        raise ParameterError("give --in or --m")
    return random_family(random.Random(args.seed), d, m)


def _emit(args, report: dict, ok: bool) -> int:
    report["ok"] = ok
    text = io.dumps(report)
    if args.out:
        _write(args.out, text)
    sys.stdout.write(text)
    return OK if ok else VIOLATED


# ---------------------------------------------------------------------------
# gen


def cmd_gen(args) -> int:
    if args.kind == "random":
        _need(args, "d", "n", "c")
        d, n, c = args.d, args.n, args.c
        if d < 1 or n < 1 or c < 1:
            raise ParameterError("need d, n, c >= 1")
        m = args.m if args.m is not None else n * max(c - d, 0) + d
        if m < c:
            raise ParameterError(f"coverage c={c} needs at least c measures (m >= c), got m={m}")
        family = random_family(random.Random(args.seed), d, m)
    else:
        _need(args, "d", "n", "c")
        family = adversarial.gen_adversarial(args.d, args.n, args.c)
    if args.svg:
        from .svg import render

        _write(args.svg, render(family, title=f"{args.kind} family"))
    text = io.dumps(io.family_to_json(family))
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return OK


# ---------------------------------------------------------------------------
# run


def run_fan(args) -> int:
    _need(args, "n", "c")
    d = args.d if args.d is not None else 2
    m = args.m if args.m is not None else args.n * (args.c - d) + d
    family = _family(args, d, m)
    fan.check_hypothesis(family.dimension, args.n, args.c, family.m)
    fp = fan.build_fan(family, args.n, args.c)
    cov = coverage_counts(family, fp.partition, 0)
    problems = check_partition(fp.partition, [a for a in fp.anchors])
    if not fp.is_valid():
        problems.append("rays do not form a counter-clockwise fan")
    problems += [f"region {i}: coverage {k} < {args.c}" for i, k in enumerate(cov) if k < args.c]
    report = {
        "command": "fan",
        "d": family.dimension,
        "n": args.n,
        "c": args.c,
        "m": family.m,
        "coverage": cov,
        "anchor_counts": fp.anchor_counts(),
        "partition": io.fan_to_json(fp),
        "problems": problems,
    }
    if args.svg:
        from .svg import render

        _write(args.svg, render(family, fp.partition, fp, title=f"{args.n}-fan, c={args.c}"))
    return _emit(args, report, not problems)


def run_t5(args) -> int:
    _need(args, "n", "c")
    d = 2
    m = args.n * (args.c - d) + d
    family = _family(args, d, m)
    mode = args.mode or "nu"
    proof = {"nu": pipelines.NU_MEASURE, "point": pipelines.POINT_MEASURE}.get(mode)
    if proof is None:
        raise ParameterError("--mode must be nu or point for t5")
    part, rep = pipelines.theorem5_pipeline(family, args.n, args.c, proof)
    report = {"command": "t5", "report": rep.to_json(), "partition": io.cut_tree_to_json(part)}
    if args.svg:
        from .svg import render

        _write(args.svg, render(family, part, title=f"t5 n={args.n} c={args.c}"))
    return _emit(args, report, rep.certified)


def _fraction_run(args, plan, family, target, name, extra):
    part, rep = pipelines.fraction_pipeline(family, args.n, args.c, plan, target)
    report = {"command": name, **extra, "report": rep.to_json(), "partition": io.cut_tree_to_json(part)}
    if args.svg:
        from .svg import render

        _write(args.svg, render(family, part, title=f"{name} n={args.n} c={args.c}"))
    return _emit(args, report, rep.ok)


def run_t7(args) -> int:
    _need(args, "n", "c")
    d = args.d if args.d is not None else 2
    m = args.n * (args.c - d) + d
    eps, bound = pipelines.epsilon_bound(args.n, args.c, d)
    plan = pipelines.plan_epsilon_groups(m, args.n, args.c, d)
    family = _family(args, d, m)
    extra = {"epsilon": io.q(eps), "lower_bound": io.q(bound)}
    return _fraction_run(args, plan, family, "epsilon", "t7", extra)


def run_t8(args) -> int:
    _need(args, "n", "c", "alpha")
    d = args.d if args.d is not None else 2
    alpha = Fraction(args.alpha)
    plan, required = pipelines.plan_alpha_groups(args.n, args.c, d, alpha)
    family = _family(args, d, required)
    extra = {"alpha": io.q(alpha), "required_m": required}
    return _fraction_run(args, plan, family, "alpha", "t8", extra)


def run_optimal(args) -> int:
    _need(args, "d", "n", "c")
    family = io.load_family(args.input) if args.input else adversarial.gen_adversarial(args.d, args.n, args.c)
    count = args.count if args.count is not None else 200
    cands = list(adversarial.candidate_stream(family, args.n, count, args.seed))
    rep = adversarial.verify_adversarial(family, cands, args.n, args.c)
    if args.svg and family.dimension == 2 and cands:
        from .svg import render

        _write(args.svg, render(family, cands[0], title="adversarial family"))
    return _emit(args, {"command": "optimal", "report": rep.to_json()}, rep.ok)


def run_poset(args) -> int:
    _need(args, "m", "n", "c")
    variant = {"A": arrangement.A, "A_tilde": arrangement.A_TILDE, None: arrangement.A}.get(args.mode)
    if variant is None:
        raise ParameterError("--mode must be A or A_tilde for poset")
    rep = arrangement.compare_formulas(args.m, args.n, args.c, variant)
    report = {"command": "poset", "report": rep.to_json()}
    try:
        poset = arrangement.build_poset(args.m, args.n, args.c, variant)
    except arrangement.PosetError as exc:
        report["explicit"] = {"skipped": str(exc)}
    else:
        fib = poset.fiber()
        report["explicit"] = {
            "elements": len(poset.elements),
            "hasse_edges": len(poset.hasse_edges),
            "dimension": arrangement.order_complex_dim(poset),
            "fiber_size": len(fib.elements),
            "fiber_dimension": arrangement.order_complex_dim(fib),
        }
        if args.dot:
            top = frozenset(range(args.n))
            hl = [i for i, e in enumerate(poset.elements) if e.nonzero_columns() == top]
            _write(args.dot, poset.to_dot(hl))
    if (args.m, args.n, args.c, variant) == (4, 2, 3, arrangement.A):
        report["fiber_check"] = arrangement.small_fiber_report()
    return _emit(args, report, rep.ok)


RUNNERS = {
    "fan": run_fan,
    "t5": run_t5,
    "t7": run_t7,
    "t8": run_t8,
    "optimal": run_optimal,
    "poset": run_poset,
}


def cmd_run(args) -> int:
    return RUNNERS[args.task](args)


# ---------------------------------------------------------------------------


def _common(p):
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--c", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--alpha", type=str, help="rational, e.g. 1/7")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--in", dest="input")
    p.add_argument("--out")
    p.add_argument("--svg")
    p.add_argument("--mode")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fairfan", description="Fair convex partitions with exact certificates.")
    sub = parser.add_subparsers(dest="command", required=True)
    gen = sub.add_parser("gen", help="write a measure family as JSON")
    gen.add_argument("kind", choices=["random", "adversarial"])
    _common(gen)
    run = sub.add_parser("run", help="build and verify a partition")
    run.add_argument("task", choices=sorted(RUNNERS))
    _common(run)
    run.add_argument("--count", type=int, help="candidates for the optimal run")
    run.add_argument("--dot", help="DOT file for the poset Hasse diagram")
    return parser


SCOPE_ERRORS = (
    ParameterError,
    MeasureError,
    fan.FanError,
    pipelines.PipelineError,
    adversarial.AdversarialError,
    arrangement.PosetError,
    ValueError,
    ZeroDivisionError,
    OSError,
)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return cmd_gen(args) if args.command == "gen" else cmd_run(args)
    except SCOPE_ERRORS as exc:
        print(f"fairfan: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
