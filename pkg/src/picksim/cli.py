"""Command-line entry point.

Subcommands:

``simulate``
    Run one scenario (policy x allocation x picking mode) over N weekly
    terminating runs and print the weekly metrics; optionally write
    ``results.csv`` and per-week event traces.
``compare``
    Run the homogeneous and the demand-proportional allocation of the
    same dataset back to back, print both summaries plus the paired
    t-test, and write ``results.csv`` / ``summary.csv`` / ``paired.csv``.
``gen-data``
    Emit a deterministic synthetic dataset (layout, items, inventory,
    orders, inbound) of a requested scale.
``stats``
    Aggregate one or two weekly-metric CSV files (``week,metric``)
    without running any simulation.

Exit codes: 0 success, 1 simulation failure (starvation, horizon
overrun, scheduling bug), 2 malformed command line or unreadable input,
3 invalid configuration or input data.

The master seed is resolved in order: ``--seed`` flag, explicit
``replenish.seed`` in the config file, ``PICKSIM_SEED`` environment
variable, then the built-in default 12345.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from .allocation import AllocationRule
from .config import SimConfig, config_from_dict
from .datagen import generate_data
from .errors import (
    InputDataError,
    ParseError,
    PicksimError,
    SimulationAbort,
    ValidationError,
)
from .experiment import (
    Comparison,
    DataPaths,
    RunResult,
    ScenarioSpec,
    compare_scenarios,
    run_scenario,
    summarize_results,
    summary_rows,
    write_paired_csv,
    write_results_csv,
    write_summary_csv,
)
from .picking import PickingMode
from .stats import paired_test, summarize
from .storage import PolicyKind

DEFAULT_SEED = 12345
WEEKLY_HEADER = ["week", "metric"]


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage errors on one line and exits 2."""

    def error(self, message: str):  # noqa: D102 - argparse hook
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _build_parser() -> _Parser:
    parser = _Parser(prog="picksim", description="warehouse picking simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", help="run one scenario")
    _common_run_args(sim)
    sim.add_argument("--allocation", choices=[r.value for r in AllocationRule],
                     default=AllocationRule.HOMOGENEOUS.value,
                     help="slot-allocation rule (default homogeneous)")
    sim.add_argument("--name", default=None, help="scenario label in outputs")
    sim.add_argument("--trace", action="store_true",
                     help="write per-week event traces into --out")

    cmp_ = sub.add_parser("compare",
                          help="homogeneous vs demand-proportional allocation")
    _common_run_args(cmp_)

    gen = sub.add_parser("gen-data", help="generate a synthetic dataset")
    gen.add_argument("--out", required=True, help="output directory")
    gen.add_argument("--seed", type=int, default=DEFAULT_SEED)
    gen.add_argument("--items", type=int, default=10)
    gen.add_argument("--slots", type=int, default=48)
    gen.add_argument("--lines", type=int, default=120)
    gen.add_argument("--weeks", type=int, default=4)

    st = sub.add_parser("stats", help="summarize weekly metric files")
    st.add_argument("--weekly", nargs="+", required=True, metavar="FILE",
                    help="one or two CSV files with header week,metric")
    st.add_argument("--out", default=None, help="directory for summary/paired CSVs")
    return parser


def _common_run_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", required=True,
                   help="dataset directory (layout/items/initial_inventory/orders)")
    p.add_argument("--config", default=None, help="JSON config file")
    p.add_argument("--policy", choices=[k.value for k in PolicyKind],
                   default=PolicyKind.FIXED.value,
                   help="storage policy (default fixed)")
    p.add_argument("--picking", choices=[m.value for m in PickingMode],
                   default=PickingMode.AREA.value,
                   help="picking mode (default area)")
    p.add_argument("--weeks", type=int, default=4)
    p.add_argument("--seed", type=int, default=None, help="master seed")
    p.add_argument("--out", default=None, help="directory for result CSVs")
    p.add_argument("--audit", action="store_true",
                   help="verify stock conservation after every event")


def _load_config(path: str | None) -> tuple[SimConfig, bool]:
    """Config plus whether the file pinned replenish.seed explicitly."""
    if path is None:
        return SimConfig(), False
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError(f"config {path} must hold a JSON object")
    cfg = config_from_dict(raw)
    cfg.validate()
    explicit = isinstance(raw.get("replenish"), dict) and "seed" in raw["replenish"]
    return cfg, explicit


def _resolve_seed(flag: int | None, cfg: SimConfig, cfg_explicit: bool) -> int:
    if flag is not None:
        return flag
    if cfg_explicit:
        return cfg.replenish.seed
    env = os.environ.get("PICKSIM_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ParseError(f"PICKSIM_SEED must be an integer, got {env!r}") from exc
    return DEFAULT_SEED


def _print_result(res: RunResult) -> None:
    print(f"scenario {res.scenario} (metric unit: {res.unit})")
    for wk in res.weeks:
        print(f"  week {wk.week}: {wk.metric:.2f}")
    print(f"  total: {res.total:.2f}")


def _print_summaries(summaries, paired=None) -> None:
    for row in summary_rows(summaries):
        name, mean, lo, hi, total, gap_pct = row
        print(f"{name}: mean={mean} ci95=[{lo}, {hi}] total={total} gap={gap_pct}%")
    if paired is not None:
        print(f"paired t-test: statistic={paired.statistic:.4f} "
              f"df={paired.df} p={paired.p_value:.4f}")


def _cmd_simulate(args) -> int:
    cfg, explicit = _load_config(args.config)
    seed = _resolve_seed(args.seed, cfg, explicit)
    name = args.name or f"{args.policy}-{args.allocation}-{args.picking}"
    spec = ScenarioSpec(
        name=name,
        policy=PolicyKind(args.policy),
        allocation=AllocationRule(args.allocation),
        picking=PickingMode(args.picking),
        weeks=args.weeks,
        seed=seed,
        config=cfg,
        data=DataPaths.from_dir(args.data),
    )
    trace_dir = args.out if (args.trace and args.out) else None
    if args.trace and not args.out:
        raise ParseError("--trace requires --out to know where to write traces")
    result = run_scenario(spec, audit=args.audit, trace_dir=trace_dir)
    _print_result(result)
    if len(result.weeks) >= 2:
        _print_summaries(summarize_results([result]))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_results_csv([result], str(out / "results.csv"))
        if len(result.weeks) >= 2:
            write_summary_csv(summarize_results([result]), str(out / "summary.csv"))
    return 0


def _cmd_compare(args) -> int:
    cfg, explicit = _load_config(args.config)
    seed = _resolve_seed(args.seed, cfg, explicit)
    common = dict(
        policy=PolicyKind(args.policy),
        picking=PickingMode(args.picking),
        weeks=args.weeks,
        seed=seed,
        config=cfg,
        data=DataPaths.from_dir(args.data),
    )
    base = ScenarioSpec(name="S1-homogeneous",
                        allocation=AllocationRule.HOMOGENEOUS, **common)
    other = ScenarioSpec(name="S2-demand",
                         allocation=AllocationRule.DEMAND_BASED, **common)
    cmp_result: Comparison = compare_scenarios(base, other, audit=args.audit)
    print(f"metric unit: {cfg.metric_unit}")
    for res in cmp_result.results:
        _print_result(res)
    _print_summaries(cmp_result.summaries, cmp_result.paired)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_results_csv(cmp_result.results, str(out / "results.csv"))
        write_summary_csv(cmp_result.summaries, str(out / "summary.csv"))
        if cmp_result.paired is not None:
            write_paired_csv(cmp_result.paired, str(out / "paired.csv"))
    return 0


def _cmd_gen_data(args) -> int:
    paths = generate_data(args.out, args.seed, args.items, args.slots,
                          args.lines, args.weeks)
    for role in ("layout", "items", "inventory", "orders", "inbound"):
        print(f"{role}: {paths[role]}")
    return 0


def _read_weekly(path: str) -> tuple[str, list[float]]:
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != WEEKLY_HEADER:
                raise ParseError(
                    f"{path}: expected header {','.join(WEEKLY_HEADER)}, "
                    f"got {','.join(header) if header else 'empty file'}"
                )
            values = []
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != 2:
                    raise ParseError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
                try:
                    values.append(float(row[1]))
                except ValueError as exc:
                    raise ParseError(f"{path}:{lineno}: metric {row[1]!r} is not a number") from exc
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return Path(path).stem, values


def _cmd_stats(args) -> int:
    if len(args.weekly) not in (1, 2):
        raise ParseError("--weekly takes one or two files")
    series = [_read_weekly(p) for p in args.weekly]
    for name, values in series:
        if len(values) < 2:
            raise InputDataError(f"{name}: need at least two weekly values, got {len(values)}")
    summaries = []
    baseline_total = sum(series[0][1])
    from .experiment import ScenarioSummary
    from .stats import gap

    for name, values in series:
        summaries.append(ScenarioSummary(name, summarize(values), sum(values),
                                         gap(baseline_total, sum(values))))
    paired = None
    if len(series) == 2:
        paired = paired_test(series[0][1], series[1][1])
    _print_summaries(summaries, paired)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_summary_csv(summaries, str(out / "summary.csv"))
        if paired is not None:
            write_paired_csv(paired, str(out / "paired.csv"))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "compare":
            return _cmd_compare(args)
        if args.command == "gen-data":
            return _cmd_gen_data(args)
        if args.command == "stats":
            return _cmd_stats(args)
        raise ParseError(f"unknown command {args.command!r}")
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, InputDataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except SimulationAbort as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PicksimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
