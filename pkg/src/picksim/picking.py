"""Order picking: plan construction, handling arithmetic, pick/resume handlers.

Plan construction groups a horizon's orders by delivery truck (groups in
first-appearance order) and reverses each truck's orders so the last
delivery stop is picked first (trucks unload back to front).  Within an
order, lines are visited in ascending route position of the slot each
line will draw from (the oldest pallet's slot, or the item's designated
slot while it is out of stock).  Zone picking additionally groups a
route into per-zone sublists; sublists are worked one after another by
the zone staff, and consolidating them afterwards costs nothing.

Execution is strictly sequential: one order is in flight at a time and
the next order starts the moment the previous one is done.  An order
with enough stock for every line is picked in one visit; its completion
is start + walking + handling.  Otherwise the picker works the route up
to the first short line, a resume event is scheduled for the estimated
arrival there (walking so far plus handling of the lines already done),
and the picker waits at that slot: whatever is on hand is taken, and
the rest arrives via replenishment, re-checked immediately after each
restocking visit.

Time accounting convention (kept identical in the brute-force test
oracle, so do not reorder): every milestone timestamp is built as
``now``, plus each walking leg in route order, plus each per-sublist
handling total in route order.  Handling for a quantity is charged
exactly once, when that quantity is physically taken.
"""

from __future__ import annotations

import csv
import enum
import logging
from dataclasses import dataclass, field
from datetime import datetime

from .config import SimConfig, WALK_CONSTANT
from .errors import InputDataError, ParseError, StarvationError
from .events import Engine, Event, PartialPick, Replenish, StartPickOrder
from .storage import StoragePolicy
from .warehouse import (
    ENTRANCE_ID,
    SPECIAL_AREA_ID,
    Equipment,
    Item,
    Location,
    PalletTouch,
    ProcessTotals,
    Warehouse,
    aisle_turns,
    travel_time,
)

log = logging.getLogger("picksim.picking")


class PickingMode(enum.Enum):
    AREA = "area"
    ZONING = "zoning"


@dataclass
class OrderLine:
    item: str
    qty: int
    weight_kg: float
    remaining: int = field(init=False)

    def __post_init__(self) -> None:
        if self.qty < 1:
            raise InputDataError(f"order line of {self.item}: qty must be >= 1")
        self.remaining = self.qty

    @property
    def status(self) -> str:
        if self.remaining == 0:
            return "picked"
        if self.remaining < self.qty:
            return "partial"
        return "pending"


@dataclass
class Order:
    order_no: str
    order_datetime: datetime
    truck_id: str
    lines: list[OrderLine]

    @property
    def complete(self) -> bool:
        return all(line.remaining == 0 for line in self.lines)


@dataclass(frozen=True)
class RouteStop:
    line_index: int
    location: Location


@dataclass
class PlanEntry:
    """One order with its resolved visiting route, split into sublists."""

    order: Order
    route: list[RouteStop]
    segments: list[tuple[int, int]]
    seg_of: list[int]


PickPlan = list[PlanEntry]


def prepare_orders(orders: list[Order], mode: PickingMode, warehouse: Warehouse,
                   policy: StoragePolicy) -> PickPlan:
    """Build the pick plan for a horizon's orders against current stock."""
    groups: dict[str, list[Order]] = {}
    group_seq: list[str] = []
    for order in orders:
        key = order.truck_id
        if not key:
            key = f"#solo:{order.order_no}"
            log.warning("order %s has no truck id; treating it as its own group", order.order_no)
        if key not in groups:
            groups[key] = []
            group_seq.append(key)
        groups[key].append(order)

    plan: PickPlan = []
    for key in group_seq:
        for order in reversed(groups[key]):
            plan.append(_plan_entry(order, mode, warehouse, policy))
    return plan


def _plan_entry(order: Order, mode: PickingMode, warehouse: Warehouse,
                policy: StoragePolicy) -> PlanEntry:
    stops: list[RouteStop] = []
    for idx, line in enumerate(order.lines):
        record = warehouse.fifo_lot(line.item)
        if record is not None:
            loc = warehouse.location(record.location)
        else:
            loc = policy.primary_location(line.item)
        stops.append(RouteStop(idx, loc))
    if mode is PickingMode.AREA:
        stops.sort(key=lambda st: (st.location.seq_no, st.line_index))
        segments = [(0, len(stops))]
        seg_of = [0] * len(stops)
    else:
        stops.sort(key=lambda st: (st.location.zone, st.location.seq_no, st.line_index))
        segments = []
        seg_of = []
        for i, st in enumerate(stops):
            if not segments or st.location.zone != stops[i - 1].location.zone:
                segments.append((i, i + 1))
            else:
                segments[-1] = (segments[-1][0], i + 1)
            seg_of.append(len(segments) - 1)
    return PlanEntry(order, stops, segments, seg_of)


def handling_time(entries: list[tuple[int, int]], cfg: SimConfig) -> float:
    """Handling seconds for one picking visit.

    ``entries`` holds ``(pallets_touched, loose_pieces)`` per line taken
    during the visit; loose pieces are the ones not taken as a whole
    pallet and are handled in master cartons.  An empty visit costs
    nothing, otherwise one base time plus the per-pallet and per-carton
    terms.
    """
    if not entries:
        return 0.0
    pallets = sum(e[0] for e in entries)
    masters = sum(-(-e[1] // cfg.pieces_per_master) for e in entries)
    return cfg.BTpu + cfg.PPpu * pallets + cfg.PMpu * masters


def _entry_of(touches: list[PalletTouch]) -> tuple[int, int]:
    loose = sum(t.taken for t in touches if not t.drained)
    return (len(touches), loose)


class PickingSession:
    """Mutable state of one weekly run's picking side.

    Owns the plan, the per-order completion times, and the position of
    the (single) picker inside the active order's route.
    """

    def __init__(self, warehouse: Warehouse, policy: StoragePolicy, cfg: SimConfig,
                 plan: PickPlan, metrics: ProcessTotals):
        self.warehouse = warehouse
        self.policy = policy
        self.cfg = cfg
        self.plan = plan
        self.metrics = metrics
        self.walk_eq: Equipment = cfg.walking_equipment()
        self.entrance = warehouse.location(ENTRANCE_ID)
        self.dropoff = warehouse.location(SPECIAL_AREA_ID)
        self.completions: list[float | None] = [None] * len(plan)
        self._active: int | None = None
        self._pos = 0
        self._at_stop: int | None = None
        self._charged: set[int] = set()

    @property
    def all_complete(self) -> bool:
        return all(c is not None for c in self.completions)

    # -- event handlers ----------------------------------------------------

    def handle_spo(self, sim: Engine, event: Event) -> list[tuple[float, object]]:
        i = event.kind.order
        if not 0 <= i < len(self.plan):
            raise InputDataError(f"pick-start event for unknown order index {i}")
        entry = self.plan[i]
        if entry.order.complete:
            log.warning("order %s already complete at its start event; ignoring",
                        entry.order.order_no)
            return []
        self._active = i
        self._pos = 0
        self._at_stop = None
        self._charged = set()
        return self._advance(sim, event.time)

    def handle_pp(self, sim: Engine, event: Event) -> list[tuple[float, object]]:
        kind = event.kind
        i = kind.order
        assert self._active == i, "resume event for an order that is not in flight"
        entry = self.plan[i]
        stop = entry.route[self._pos]
        assert stop.line_index == kind.line and stop.location.id == kind.location, (
            "resume event does not match the picker's position"
        )
        line = entry.order.lines[kind.line]
        assert line.remaining > 0, "resume event for a line that is already picked"
        avail = self.warehouse.total_on_hand(line.item)
        if avail >= line.remaining:
            return self._advance(sim, event.time)
        if avail > 0:
            touches = self.warehouse.pick(line.item, avail)
            line.remaining -= avail
            self._record_call([touches])
            self._drain_freed(touches, event.time)
        t_rp = sim.next_time_of(Replenish)
        if t_rp is None:
            raise StarvationError(
                f"order {entry.order.order_no} line {kind.line} ({line.item}) is short "
                f"{line.remaining} pieces and no replenishment is scheduled"
            )
        self.metrics.waiting_s += t_rp - event.time
        return [(t_rp, kind)]

    # -- core traversal ----------------------------------------------------

    def _advance(self, sim: Engine, now: float) -> list[tuple[float, object]]:
        """Work the active order forward from the picker's position.

        Picks every line up to (not including) the first short one,
        accumulates walking legs and per-sublist handling, and returns
        either the next order's start event (order done) or the resume
        event at the short line's slot.
        """
        i = self._active
        assert i is not None
        entry = self.plan[i]
        route = entry.route
        pos = self._pos
        m = self._first_short(entry, pos)
        target = m if m is not None else len(route)

        # one picking visit ("call") per sublist touched, in route order
        calls: list[tuple[list[PalletTouch], list[tuple[int, int]]]] = []
        current_seg = -1
        for p in range(pos, target):
            stop = route[p]
            line = entry.order.lines[stop.line_index]
            if line.remaining == 0:
                continue
            touches = self.warehouse.pick(line.item, line.remaining)
            line.remaining = 0
            if entry.seg_of[p] != current_seg:
                calls.append(([], []))
                current_seg = entry.seg_of[p]
            calls[-1][0].extend(touches)
            calls[-1][1].append(_entry_of(touches))
        legs = self._walk_legs(entry, pos, target, complete=(m is None))

        t = now
        for leg in legs:
            t += leg
        for _, entries in calls:
            t += handling_time(entries, self.cfg)

        for leg in legs:
            self.metrics.move_s += leg
        for touches, _ in calls:
            self._record_call([touches])
        for touches, _ in calls:
            self._drain_freed(touches, now)

        if m is None:
            self.completions[i] = t
            self._active = None
            if i + 1 < len(self.plan):
                return [(t, StartPickOrder(i + 1))]
            return []
        self._pos = m
        self._at_stop = m
        stop = route[m]
        return [(t, PartialPick(i, stop.line_index, stop.location.id))]

    def _first_short(self, entry: PlanEntry, pos: int) -> int | None:
        """First route position whose cumulative item demand exceeds stock."""
        needs: dict[str, int] = {}
        for p in range(pos, len(entry.route)):
            line = entry.order.lines[entry.route[p].line_index]
            if line.remaining == 0:
                continue
            need = needs.get(line.item, 0) + line.remaining
            needs[line.item] = need
            if need > self.warehouse.total_on_hand(line.item):
                return p
        return None

    def _walk_legs(self, entry: PlanEntry, pos: int, target: int, complete: bool) -> list[float]:
        """Walking legs for this traversal, in route order.

        Constant mode charges the per-sublist walking constant the first
        time each sublist is entered.  Distance mode walks the concrete
        path: each sublist starts from the entrance and ends at the
        drop-off point, and a traversal that stalls at a short line ends
        at that line's slot instead.
        """
        route = entry.route
        visit = list(range(pos, target))
        if not complete:
            visit.append(target)
        if self.cfg.walking.mode == WALK_CONSTANT:
            legs = []
            for p in visit:
                seg = entry.seg_of[p]
                if seg not in self._charged:
                    self._charged.add(seg)
                    legs.append(self.cfg.walking.constant_s)
            return legs

        legs = []
        if self._at_stop is None:
            cur_point, cur_seg = self.entrance, -1
        else:
            cur_point, cur_seg = route[self._at_stop].location, entry.seg_of[self._at_stop]
        for p in visit:
            if p == self._at_stop:
                continue
            seg = entry.seg_of[p]
            if cur_seg != -1 and seg != cur_seg:
                legs.append(self._leg(cur_point, self.dropoff))
                cur_point, cur_seg = self.entrance, -1
            legs.append(self._leg(cur_point, route[p].location))
            cur_point, cur_seg = route[p].location, seg
        if complete and visit:
            legs.append(self._leg(cur_point, self.dropoff))
        return legs

    def _leg(self, a: Location, b: Location) -> float:
        turns = aisle_turns(a, b)
        self.metrics.turns += turns
        return travel_time(a, b, self.walk_eq, turns)

    # -- bookkeeping -------------------------------------------------------

    def _record_call(self, calls: list[list[PalletTouch]]) -> None:
        """Accumulate handling labor per picking visit.

        A touch that drains its pallet counts as a full-pallet pick, any
        other as a partial pick with its pieces handled in master
        cartons; the per-visit base time follows the first touch's class.
        """
        cfg = self.cfg
        for touches in calls:
            if not touches:
                continue
            if touches[0].drained:
                self.metrics.pick_full_s += cfg.BTpu
            else:
                self.metrics.pick_partial_s += cfg.BTpu
            loose = 0
            for t in touches:
                if t.drained:
                    self.metrics.pick_full_s += cfg.PPpu
                else:
                    self.metrics.pick_partial_s += cfg.PPpu
                    loose += t.taken
            masters = -(-loose // cfg.pieces_per_master)
            self.metrics.pick_partial_s += cfg.PMpu * masters

    def _drain_freed(self, touches: list[PalletTouch], now: float) -> None:
        if not any(t.drained for t in touches):
            return
        if not self.policy.waiting:
            return
        for entry, assignment in self.policy.on_slot_freed(now):
            self.metrics.put_full_s += assignment.handle_s
            self.metrics.move_s += assignment.travel_s
            self.metrics.turns += assignment.turns
            self.metrics.waiting_s += now - entry.enqueued_at


# -- orders file ---------------------------------------------------------

ORDERS_HEADER = ["order_datetime", "order_no", "truck_id", "item_code", "qty", "weight_kg"]


def load_orders(path: str, items: dict[str, Item]) -> list[Order]:
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    orders: dict[str, Order] = {}
    with fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ORDERS_HEADER:
            raise ParseError(f"{path}: expected header {','.join(ORDERS_HEADER)}")
        for i, row in enumerate(reader, start=2):
            try:
                when = datetime.fromisoformat(row["order_datetime"])
                line = OrderLine(row["item_code"], int(row["qty"]), float(row["weight_kg"]))
            except (TypeError, ValueError) as exc:
                raise ParseError(f"{path}:{i}: {exc}") from exc
            if line.item not in items:
                raise InputDataError(f"{path}:{i}: unknown item {line.item}")
            no = row["order_no"]
            if no not in orders:
                orders[no] = Order(no, when, row["truck_id"], [])
            orders[no].lines.append(line)
    return list(orders.values())


def save_orders(orders: list[Order], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ORDERS_HEADER)
        for order in orders:
            for line in order.lines:
                writer.writerow([
                    order.order_datetime.isoformat(sep=" "), order.order_no,
                    order.truck_id, line.item, line.qty, line.weight_kg,
                ])
