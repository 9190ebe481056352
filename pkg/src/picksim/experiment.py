"""Scenario runner: weekly terminating runs and their aggregation.

A scenario fixes the storage policy, the slot-allocation rule, the
picking mode, the week count and the master seed.  Every week is an
independent terminating run: the warehouse is rebuilt from the same
initial inventory (placed under the active policy so containment rules
hold from the start), the week's orders are planned, and the event
engine runs until every order is complete.  The weekly metric is the
total picking time, i.e. the completion time of the last order; orders
chain back to back from time zero, so this equals the sum of per-order
durations including any replenishment waits.

Per-week randomness derives from (master seed, scenario name, week), so
runs are reproducible bit for bit and independent of execution order.
"""

from __future__ import annotations

import csv
import hashlib
import logging
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from .allocation import (
    AllocationRule,
    SlotMap,
    allocate_slots,
    assign_physical_slots,
)
from .config import SimConfig
from .errors import InfeasibleRunError, InputDataError
from .events import Engine, PartialPick, Replenish, StartPickOrder, write_trace_csv
from .picking import (
    Order,
    PickingMode,
    PickingSession,
    load_orders,
    prepare_orders,
)
from .replenishment import Replenisher, ReplenishmentSampler
from .stats import PairedTest, StatsSummary, gap, paired_test, summarize
from .storage import PolicyKind, StoragePolicy, place_initial
from .warehouse import (
    ENTRANCE_ID,
    Location,
    ProcessTotals,
    Warehouse,
    load_inventory,
    load_items,
    load_layout,
)

log = logging.getLogger("picksim.experiment")


@dataclass(frozen=True)
class DataPaths:
    layout: str
    items: str
    inventory: str
    orders: str

    @classmethod
    def from_dir(cls, directory: str) -> "DataPaths":
        d = Path(directory)
        return cls(
            layout=str(d / "layout.csv"),
            items=str(d / "items.csv"),
            inventory=str(d / "initial_inventory.csv"),
            orders=str(d / "orders.csv"),
        )


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    policy: PolicyKind
    allocation: AllocationRule
    picking: PickingMode
    weeks: int
    seed: int
    config: SimConfig
    data: DataPaths


@dataclass
class WeekOutcome:
    week: int
    metric: float
    totals: ProcessTotals
    completions: list[float] = field(default_factory=list)


@dataclass
class RunResult:
    scenario: str
    unit: str
    weeks: list[WeekOutcome]

    @property
    def weekly_metrics(self) -> list[float]:
        return [w.metric for w in self.weeks]

    @property
    def total(self) -> float:
        return sum(w.metric for w in self.weeks)


def derive_seed(master: int, scenario: str, week: int) -> int:
    """Stable per-run seed from (master seed, scenario name, week)."""
    digest = hashlib.sha256(f"{master}|{scenario}|{week}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def week_index(order: Order, start: date) -> int:
    return (order.order_datetime.date() - start).days // 7


def split_weeks(orders: list[Order], weeks: int) -> list[list[Order]]:
    """Partition orders into week buckets by calendar weeks from the
    earliest order date, keeping file order within each bucket."""
    if not orders:
        return [[] for _ in range(weeks)]
    start = min(o.order_datetime for o in orders).date()
    buckets: list[list[Order]] = [[] for _ in range(weeks)]
    for order in orders:
        w = week_index(order, start)
        if 0 <= w < weeks:
            buckets[w].append(order)
    return buckets


def demand_per_week(orders: list[Order], weeks: int) -> dict[str, float]:
    """Average picks (order lines) per product per week over the horizon."""
    counts: dict[str, int] = {}
    for order in orders:
        for line in order.lines:
            counts[line.item] = counts.get(line.item, 0) + 1
    return {code: n / weeks for code, n in counts.items()}


def build_slot_map(spec: ScenarioSpec, layout: list[Location], avg_picks: dict[str, float],
                   item_codes: list[str]) -> SlotMap:
    """Allocate the whole storage pool and pin it to concrete slots."""
    demand = {code: avg_picks.get(code, 0.0) for code in item_codes}
    slots = [loc for loc in layout if not loc.is_anchor]
    counts = allocate_slots(demand, len(slots), spec.allocation)
    entrance = next((loc for loc in layout if loc.id == ENTRANCE_ID), None)
    if entrance is None:
        entrance = Location(ENTRANCE_ID, 0.0, 0.0, 0.0, "anchor", -3)
    return assign_physical_slots(counts, slots, demand, entrance, spec.config.stacker())


def run_scenario(spec: ScenarioSpec, audit: bool = False,
                 trace_dir: str | None = None) -> RunResult:
    """Run every week of a scenario; raises on starvation or horizon overrun.

    With ``trace_dir`` set, the executed event log of week N is written to
    ``<trace_dir>/trace_<scenario>_week<N>.csv``.
    """
    cfg = spec.config
    layout = load_layout(spec.data.layout)
    items = load_items(spec.data.items)
    initial = load_inventory(spec.data.inventory)
    item_index = {i.code: i for i in items}
    all_orders = load_orders(spec.data.orders, item_index)
    avg_picks = demand_per_week(all_orders, spec.weeks)
    slot_map = build_slot_map(spec, layout, avg_picks, [i.code for i in items])
    buckets = split_weeks(all_orders, spec.weeks)

    outcomes: list[WeekOutcome] = []
    for week_no, week_orders in enumerate(buckets, start=1):
        trace_path = None
        if trace_dir is not None:
            Path(trace_dir).mkdir(parents=True, exist_ok=True)
            trace_path = str(Path(trace_dir) /
                             f"trace_{spec.name}_week{week_no}.csv")
        outcomes.append(
            _run_week(spec, cfg, layout, items, initial, slot_map, avg_picks,
                      week_orders, week_no, audit, trace_path)
        )
    return RunResult(spec.name, cfg.metric_unit, outcomes)


def _run_week(spec: ScenarioSpec, cfg: SimConfig, layout: list[Location], items,
              initial, slot_map: SlotMap, avg_picks: dict[str, float],
              week_orders: list[Order], week_no: int, audit: bool,
              trace_path: str | None = None) -> WeekOutcome:
    metrics = ProcessTotals()
    if not week_orders:
        return WeekOutcome(week_no, 0.0, metrics)

    warehouse = Warehouse(layout, items, audit=audit)
    policy = StoragePolicy(
        spec.policy, warehouse, cfg.stacker(), slot_map=slot_map,
        base_time_s=cfg.BTpa, per_pallet_s=cfg.PPpa,
    )
    place_initial(policy, initial, avg_picks)
    start_date = min(o.order_datetime for o in week_orders).date()

    plan = prepare_orders(week_orders, spec.picking, warehouse, policy)
    session = PickingSession(warehouse, policy, cfg, plan, metrics)
    sampler = ReplenishmentSampler.from_config(
        cfg, derive_seed(spec.seed, spec.name, week_no))
    replenisher = Replenisher(policy, cfg, sampler, session, metrics, start_date)

    engine = Engine()
    if audit:
        engine.register(StartPickOrder, _audited(session.handle_spo, warehouse))
        engine.register(PartialPick, _audited(session.handle_pp, warehouse))
        engine.register(Replenish, _audited(replenisher.handle_rp, warehouse))
    else:
        engine.register(StartPickOrder, session.handle_spo)
        engine.register(PartialPick, session.handle_pp)
        engine.register(Replenish, replenisher.handle_rp)
    engine.schedule(0.0, StartPickOrder(0))
    engine.schedule(sampler.draw(), Replenish())
    engine.run(horizon=cfg.horizon_s)
    if trace_path is not None:
        write_trace_csv(engine.trace, trace_path)

    if not session.all_complete:
        done = sum(1 for c in session.completions if c is not None)
        raise InfeasibleRunError(
            f"scenario {spec.name} week {week_no}: only {done}/{len(plan)} orders "
            f"finished within the {cfg.horizon_s} s horizon"
        )
    metric_s = session.completions[-1]
    metric = metric_s * cfg.metric_factor()
    return WeekOutcome(week_no, metric, metrics,
                       completions=[float(c) for c in session.completions])


def _audited(handler, warehouse: Warehouse):
    def wrapped(sim, event):
        out = handler(sim, event)
        warehouse.verify_conservation()
        return out

    return wrapped


# -- comparison ----------------------------------------------------------


@dataclass
class ScenarioSummary:
    scenario: str
    stats: StatsSummary
    total: float
    gap_pct: float


@dataclass
class Comparison:
    results: list[RunResult]
    summaries: list[ScenarioSummary]
    paired: PairedTest | None


def summarize_results(results: list[RunResult]) -> list[ScenarioSummary]:
    """Per-scenario mean/CI/total plus gap against the first scenario."""
    if not results:
        raise InputDataError("nothing to summarize")
    baseline = results[0].total
    out = []
    for res in results:
        out.append(ScenarioSummary(res.scenario, summarize(res.weekly_metrics),
                                   res.total, gap(baseline, res.total)))
    return out


def compare_scenarios(base: ScenarioSpec, other: ScenarioSpec,
                      audit: bool = False) -> Comparison:
    res_a = run_scenario(base, audit=audit)
    res_b = run_scenario(other, audit=audit)
    summaries = summarize_results([res_a, res_b])
    paired = paired_test(res_a.weekly_metrics, res_b.weekly_metrics)
    return Comparison([res_a, res_b], summaries, paired)


# -- serialization -------------------------------------------------------

RESULTS_HEADER = ["scenario", "week", "metric", "pick_full_s", "pick_partial_s",
                  "put_full_s", "put_partial_s", "move_s", "sort_full_s",
                  "sort_partial_s", "waiting_s", "turns"]
SUMMARY_HEADER = ["scenario", "mean", "ci_low", "ci_high", "total", "gap_pct"]
PAIRED_HEADER = ["statistic", "df", "p_value"]


def write_results_csv(results: list[RunResult], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULTS_HEADER)
        for res in results:
            for wk in res.weeks:
                t = wk.totals
                writer.writerow([
                    res.scenario, wk.week, repr(wk.metric),
                    repr(t.pick_full_s), repr(t.pick_partial_s),
                    repr(t.put_full_s), repr(t.put_partial_s), repr(t.move_s),
                    repr(t.sort_full_s), repr(t.sort_partial_s),
                    repr(t.waiting_s), t.turns,
                ])


def summary_rows(summaries: list[ScenarioSummary]) -> list[list[str]]:
    rows = []
    for s in summaries:
        rows.append([
            s.scenario, f"{s.stats.mean:.2f}", f"{s.stats.ci_low:.2f}",
            f"{s.stats.ci_high:.2f}", f"{s.total:.2f}", f"{s.gap_pct:.2f}",
        ])
    return rows


def write_summary_csv(summaries: list[ScenarioSummary], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_HEADER)
        writer.writerows(summary_rows(summaries))


def write_paired_csv(paired: PairedTest, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PAIRED_HEADER)
        writer.writerow([f"{paired.statistic:.4f}", paired.df, f"{paired.p_value:.4f}"])
