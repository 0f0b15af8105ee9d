"""Command-line entry point.

Subcommands: estimate, recognize, oracle, bench, gen-grid.  Exit codes:
0 success, 1 input error, 2 resource cap exceeded.  All randomness flows
from --seed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .bench import (
    DEFAULT_LAMBDAS,
    build_problem,
    estimate_tables,
    parse_hypothesis_line,
    run_benchmark,
)
from .errors import GoalRecError, SearchCapExceededError
from .gridgen import random_grid, write_instance
from .probability import (
    DEFAULT_N_SAMPLES,
    DEFAULT_STATE_CAP,
    EMPIRICAL_UNION,
    NOISY_OR,
    estimate,
    exact_oracle,
)
from .recognition import ObservationEvent, recognize_online

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_CAP_EXCEEDED = 2


def _read(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise GoalRecError(f"no such file: {path}")
    return p.read_text()


def _load_hypotheses(path: str):
    return tuple(
        parse_hypothesis_line(line)
        for line in _read(path).splitlines()
        if line.strip()
    )


def _add_problem_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--domain", required=True, help="domain.pddl path")
    sub.add_argument("--template", required=True, help="problem template path")
    sub.add_argument("--hyps", required=True, help="hyps.dat path")


def _write_tables(problem, tables, out_dir: str) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for i, table in enumerate(tables):
        path = out / f"goal_{i}.csv"
        path.write_text(table.to_csv(problem))
        written.append(path)
    return written


def cmd_estimate(args) -> int:
    hypotheses = _load_hypotheses(args.hyps)
    problem = build_problem(_read(args.domain), _read(args.template), hypotheses)
    tables = [
        estimate(problem, i, args.n_samples, args.seed, args.aggregation)
        for i in range(len(problem.goals))
    ]
    for path in _write_tables(problem, tables, args.output):
        print(path)
    return EXIT_OK


def cmd_oracle(args) -> int:
    hypotheses = _load_hypotheses(args.hyps)
    problem = build_problem(_read(args.domain), _read(args.template), hypotheses)
    tables = [
        exact_oracle(problem, i, args.max_states) for i in range(len(problem.goals))
    ]
    for path in _write_tables(problem, tables, args.output):
        print(path)
    return EXIT_OK


def cmd_recognize(args) -> int:
    hypotheses = _load_hypotheses(args.hyps)
    problem = build_problem(_read(args.domain), _read(args.template), hypotheses)
    obs_names = [line.strip() for line in _read(args.obs).splitlines() if line.strip()]
    events = []
    for name in obs_names:
        (lit,) = parse_hypothesis_line(name)
        events.append(ObservationEvent.action(problem.action_id(lit.canonical())))

    tables = estimate_tables(
        problem, args.n_samples, args.seed, args.aggregation, args.threads
    )
    if args.at_lambda is not None:
        cut = int(np.floor(len(events) * args.at_lambda))
        events = events[:cut]
    trace = recognize_online(problem, tables, events)
    steps = trace.steps
    if not steps:
        # No evidence: every goal ties at heuristic 0.
        from .recognition import TraceStep

        steps = [TraceStep(0, [0.0] * len(problem.goals), list(range(len(problem.goals))), 0)]
        trace = type(trace)(steps)
    if args.format == "text":
        for step in steps:
            scores = ", ".join(f"{h:.4f}" for h in step.heuristic)
            print(f"t={step.t} recognized={step.recognized} h=[{scores}]")
    else:
        print(trace.to_json(include_timings=False))
    return EXIT_OK


def cmd_bench(args) -> int:
    report = run_benchmark(
        args.dataset,
        lambdas=args.lambdas,
        n_samples=args.n_samples,
        seed=args.seed,
        repeats=args.repeats,
        aggregation=args.aggregation,
        threads=args.threads,
    )
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report.to_json())
    (out / "precision.csv").write_text(report.precision_csv())
    print(out / "report.json")
    print(out / "precision.csv")
    if report.failures:
        for name, error in report.failures:
            print(f"failed instance {name}: {error}", file=sys.stderr)
    return EXIT_OK


def cmd_gen_grid(args) -> int:
    rng = np.random.default_rng(args.seed)
    spec = random_grid(
        rng,
        width=args.width,
        height=args.height,
        n_goals=args.goals,
        block_prob=args.block_prob,
    )
    path = write_instance(args.output, spec)
    print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="goalrec",
        description="Goal recognition from fact observation probabilities",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, aggregation=True):
        p.add_argument("--n-samples", type=int, default=DEFAULT_N_SAMPLES)
        p.add_argument("--seed", type=int, default=0)
        if aggregation:
            p.add_argument(
                "--aggregation",
                choices=[EMPIRICAL_UNION, NOISY_OR],
                default=EMPIRICAL_UNION,
            )
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("estimate", help="write per-goal probability CSV files")
    _add_problem_flags(p)
    common(p)
    p.add_argument("--output", default=".")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("oracle", help="exact per-goal probability CSV files")
    _add_problem_flags(p)
    p.add_argument("--max-states", type=int, default=DEFAULT_STATE_CAP)
    p.add_argument("--output", default=".")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("recognize", help="online recognition trace on stdout")
    _add_problem_flags(p)
    p.add_argument("--obs", required=True, help="obs.dat path")
    p.add_argument("--real", help="real_hyp.dat path (unused, accepted for symmetry)")
    p.add_argument("--at-lambda", type=float, default=None)
    common(p)
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("bench", help="run the benchmark harness over a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--lambdas", type=float, nargs="+", default=list(DEFAULT_LAMBDAS))
    p.add_argument("--repeats", type=int, default=1)
    common(p)
    p.add_argument("--output", default=".")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen-grid", help="generate a random grid instance")
    p.add_argument("--width", type=int, default=7)
    p.add_argument("--height", type=int, default=7)
    p.add_argument("--goals", type=int, default=3)
    p.add_argument("--block-prob", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_gen_grid)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SearchCapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP_EXCEEDED
    except GoalRecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
