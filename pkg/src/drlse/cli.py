"""Command-line interface.

Subcommands:

* ``drlse run --config FILE [--seed-range a..b] [--out DIR]`` runs one
  experiment per seed, writing a per-seed CSV, the aggregate curve CSV,
  and an F-score figure into the output directory.
* ``drlse truth --config FILE`` prints the ground-truth design set.
* ``drlse timing --config FILE [--out DIR]`` runs the computation-path
  timing ablation and writes its CSV and figure.
* ``drlse list-problems`` lists the built-in problems.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import report
from .config_io import ConfigError, load_config
from .harness import ground_truth_H, monte_carlo, run, timing_ablation
from .problems import DEFAULT_RANGES, PROBLEM_NAMES


def _parse_seed_range(text: str) -> tuple[int, ...]:
    try:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a..b with integers, got {text!r}"
        ) from None
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty seed range {text!r}")
    return tuple(range(lo, hi + 1))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drlse",
        description="Active learning for distributionally robust level-set estimation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment over one or more seeds")
    p_run.add_argument("--config", required=True, type=Path)
    p_run.add_argument("--seed-range", type=_parse_seed_range, default=(0,))
    p_run.add_argument("--out", type=Path, default=Path("out"))

    p_truth = sub.add_parser("truth", help="print the ground-truth design set")
    p_truth.add_argument("--config", required=True, type=Path)

    p_timing = sub.add_parser("timing", help="time the scoring computation paths")
    p_timing.add_argument("--config", required=True, type=Path)
    p_timing.add_argument("--out", type=Path, default=Path("out"))

    sub.add_parser("list-problems", help="list built-in problems")
    return parser


def _cmd_run(args) -> int:
    config = load_config(args.config)
    config = dataclasses.replace(config, seeds=tuple(args.seed_range))
    args.out.mkdir(parents=True, exist_ok=True)
    records, curve = monte_carlo(config)
    for record in records:
        path = report.write_run_csv(record, args.out / f"run_seed{record.seed}.csv")
        last = record.rows[-1].f_score if record.rows else record.initial_f
        print(f"seed {record.seed}: {len(record.rows)} iterations, final F-score "
              f"{last:.4f} -> {path}")
    agg_path = report.write_aggregate_csv(curve, args.out / "aggregate.csv")
    fig_path = report.render_fscore_figure(
        curve,
        args.out / "fscore.png",
        title=f"{config.problem.name} / {config.acquisition.kind.value}",
    )
    print(f"aggregate -> {agg_path}")
    print(f"figure    -> {fig_path}")
    return 0


def _cmd_truth(args) -> int:
    config = load_config(args.config)
    truth = ground_truth_H(
        config.problem,
        config.ambiguity,
        config.accuracy.threshold,
        config.accuracy.alpha,
    )
    print(f"problem: {config.problem.name}")
    print(f"design points above alpha: {truth.size} of {config.problem.n_design}")
    print(",".join(str(i) for i in truth.tolist()))
    return 0


def _cmd_timing(args) -> int:
    config = load_config(args.config)
    args.out.mkdir(parents=True, exist_ok=True)
    timing = timing_ablation(config)
    csv_path = report.write_timing_csv(timing, args.out / "timing.csv")
    fig_path = report.render_timing_figure(
        timing, args.out / "timing.png", title=f"{config.problem.name} scoring paths"
    )
    for label in timing.labels:
        mean, sd = timing.mean_sd(label)
        print(f"{label:>14}: {mean:.4f} +- {sd:.4f} s/iteration")
    print(f"csv    -> {csv_path}")
    print(f"figure -> {fig_path}")
    return 0


def _cmd_list_problems() -> int:
    for name in PROBLEM_NAMES:
        (l1, u1), (l2, u2) = DEFAULT_RANGES[name]
        print(f"{name:>16}: x in [{l1}, {u1}], w in [{l2}, {u2}]")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "truth":
            return _cmd_truth(args)
        if args.command == "timing":
            return _cmd_timing(args)
        return _cmd_list_problems()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
