"""Storage policies: where an arriving pallet goes.

Three policies share one mechanism, differing only in the candidate
slot set for an item:

* fixed      - the item's dedicated slots from a slot map
* random     - every storage slot (shared storage)
* fixed-zone - every slot inside the item's home zone

Among vacant candidates the policy picks the one with the smallest
travel time from the receiving anchor (ties by route position).  "Random"
storage is therefore shared-but-deterministic: the nearest vacant slot
anywhere, with no randomness involved.

When no candidate is vacant the pallet joins a FIFO waiting list that
is re-attempted whenever a slot frees up; the head of the list blocks
the rest so arrival order is never overtaken.
"""

from __future__ import annotations

import csv
import enum
import logging
from collections import deque
from dataclasses import dataclass
from datetime import date, datetime

from .allocation import SlotMap
from .errors import InputDataError, ParseError
from .warehouse import (
    ELEVATOR_ID,
    Equipment,
    Item,
    Location,
    LocationId,
    Warehouse,
    aisle_turns,
    travel_time,
)

log = logging.getLogger("picksim.storage")


class PolicyKind(enum.Enum):
    FIXED = "fixed"
    RANDOM = "random"
    FIXED_ZONE = "fixed-zone"


@dataclass(frozen=True)
class InboundLine:
    """One arriving pallet from the inbound file."""

    putaway_datetime: datetime
    order_no: str
    item_code: str
    qty: int
    total_weight_kg: float
    mfg_date: date


@dataclass(frozen=True)
class Assignment:
    """A completed put-away: where the pallet went and what it cost."""

    location: LocationId
    item: str
    qty: int
    mfg_date: date
    travel_s: float
    handle_s: float
    turns: int

    @property
    def duration_s(self) -> float:
        return self.travel_s + self.handle_s


@dataclass
class WaitingEntry:
    item: str
    qty: int
    mfg_date: date
    enqueued_at: float


class StoragePolicy:
    """Slot chooser plus waiting list for one warehouse and one policy kind."""

    def __init__(self, kind: PolicyKind, warehouse: Warehouse, equipment: Equipment,
                 slot_map: SlotMap | None = None, receiving_id: LocationId = ELEVATOR_ID,
                 base_time_s: float = 0.0, per_pallet_s: float = 0.0):
        if kind is PolicyKind.FIXED and slot_map is None:
            raise InputDataError("fixed storage policy needs a slot map")
        self.kind = kind
        self.warehouse = warehouse
        self.equipment = equipment
        self.slot_map = slot_map or {}
        self.receiving = warehouse.location(receiving_id)
        self.base_time_s = base_time_s
        self.per_pallet_s = per_pallet_s
        self.waiting: deque[WaitingEntry] = deque()
        self._candidates: dict[str, list[Location]] = {}

    # -- candidate sets ----------------------------------------------------

    def candidate_slots(self, item_code: str) -> list[Location]:
        """All slots the policy would ever consider for this item.

        The set is fixed at construction (layout, slot map and home zones
        never change mid-run), so it is memoized; treat it as read-only.
        """
        cached = self._candidates.get(item_code)
        if cached is not None:
            return cached
        wh = self.warehouse
        if self.kind is PolicyKind.FIXED:
            ids = self.slot_map.get(item_code)
            if not ids:
                raise InputDataError(f"item {item_code} has no dedicated slots in the slot map")
            slots = [wh.location(lid) for lid in ids]
        elif self.kind is PolicyKind.FIXED_ZONE:
            zone = wh.item(item_code).home_zone
            slots = [loc for loc in wh.storage.values() if loc.zone == zone]
            if not slots:
                raise InputDataError(f"home zone {zone!r} of item {item_code} has no slots")
        else:
            slots = list(wh.storage.values())
        self._candidates[item_code] = slots
        return slots

    def has_vacancy(self, item_code: str) -> bool:
        return any(self.warehouse.is_vacant(loc.id) for loc in self.candidate_slots(item_code))

    def nearest_vacant(self, item_code: str) -> Location | None:
        """Vacant candidate with the smallest travel time from receiving."""
        best: tuple[float, int] | None = None
        best_loc: Location | None = None
        for loc in self.candidate_slots(item_code):
            if not self.warehouse.is_vacant(loc.id):
                continue
            t = travel_time(self.receiving, loc, self.equipment,
                            aisle_turns(self.receiving, loc))
            key = (t, loc.seq_no)
            if best is None or key < best:
                best = key
                best_loc = loc
        return best_loc

    def primary_location(self, item_code: str) -> Location:
        """Fallback route stop for an item that is momentarily out of stock."""
        wh = self.warehouse
        if self.kind is PolicyKind.FIXED:
            return wh.location(self.candidate_slots(item_code)[0].id)
        candidates = self.candidate_slots(item_code)
        return min(candidates, key=lambda loc: loc.seq_no)

    # -- put-away ----------------------------------------------------------

    def put_away(self, item_code: str, qty: int, mfg_date: date,
                 now: float, source: str = "replenish") -> Assignment | None:
        """Place one pallet, or enqueue it and return None when no slot fits."""
        item = self.warehouse.item(item_code)
        if not 1 <= qty <= item.qty_per_pallet:
            raise InputDataError(
                f"put-away of {item_code} must hold 1..{item.qty_per_pallet} pieces, got {qty}"
            )
        slot = self.nearest_vacant(item_code)
        if slot is None:
            self.waiting.append(WaitingEntry(item_code, qty, mfg_date, now))
            log.info("put-away of %s waiting: no vacant candidate slot", item_code)
            return None
        return self._place(slot, item_code, qty, mfg_date, source)

    def _place(self, slot: Location, item_code: str, qty: int, mfg_date: date,
               source: str) -> Assignment:
        self.warehouse.place(slot.id, item_code, qty, mfg_date, source=source)
        turns = aisle_turns(self.receiving, slot)
        travel = travel_time(self.receiving, slot, self.equipment, turns)
        return Assignment(slot.id, item_code, qty, mfg_date, travel,
                          self.base_time_s + self.per_pallet_s, turns)

    def on_slot_freed(self, now: float) -> list[tuple[WaitingEntry, Assignment]]:
        """Re-attempt the waiting list head-first after a slot was vacated.

        Stops at the first entry that still has nowhere to go, so later
        entries can never overtake the head.
        """
        done: list[tuple[WaitingEntry, Assignment]] = []
        while self.waiting:
            entry = self.waiting[0]
            slot = self.nearest_vacant(entry.item)
            if slot is None:
                break
            self.waiting.popleft()
            done.append((entry, self._place(slot, entry.item, entry.qty, entry.mfg_date,
                                            "replenish")))
        return done


def place_initial(policy: StoragePolicy, rows: list, priority: dict[str, float]) -> int:
    """Load initial stock into a fresh warehouse under the active policy.

    Pallets are placed in descending item priority (average picks), then
    oldest first, each to its nearest vacant candidate slot, so the
    starting state respects the same containment rules as live put-away.
    A pallet whose candidate set is full falls back to the nearest vacant
    slot anywhere (logged); returns how many pallets needed the fallback.
    """
    wh = policy.warehouse
    ordered = sorted(rows, key=lambda r: (-priority.get(r.item, 0.0), r.item,
                                          r.mfg_date, r.location))
    fallbacks = 0
    for row in ordered:
        slot = policy.nearest_vacant(row.item)
        if slot is None:
            slot = _nearest_vacant_anywhere(policy)
            if slot is None:
                raise InputDataError("initial inventory exceeds total warehouse capacity")
            fallbacks += 1
            log.warning("initial pallet of %s placed outside its policy slots (all full)",
                        row.item)
        wh.place(slot.id, row.item, row.qty, row.mfg_date, source="initial")
    return fallbacks


def _nearest_vacant_anywhere(policy: StoragePolicy) -> Location | None:
    best: tuple[float, int] | None = None
    best_loc: Location | None = None
    for loc in policy.warehouse.vacant_slots():
        t = travel_time(policy.receiving, loc, policy.equipment,
                        aisle_turns(policy.receiving, loc))
        key = (t, loc.seq_no)
        if best is None or key < best:
            best = key
            best_loc = loc
    return best_loc


# -- inbound file --------------------------------------------------------

INBOUND_HEADER = ["putaway_datetime", "order_no", "item_code", "qty",
                  "total_weight_kg", "mfg_date"]


def load_inbound(path: str, items: dict[str, Item], max_pallet_kg: float) -> list[InboundLine]:
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    lines: list[InboundLine] = []
    with fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != INBOUND_HEADER:
            raise ParseError(f"{path}: expected header {','.join(INBOUND_HEADER)}")
        for i, row in enumerate(reader, start=2):
            try:
                line = InboundLine(
                    putaway_datetime=datetime.fromisoformat(row["putaway_datetime"]),
                    order_no=row["order_no"],
                    item_code=row["item_code"],
                    qty=int(row["qty"]),
                    total_weight_kg=float(row["total_weight_kg"]),
                    mfg_date=date.fromisoformat(row["mfg_date"]),
                )
            except (TypeError, ValueError) as exc:
                raise ParseError(f"{path}:{i}: {exc}") from exc
            if line.item_code not in items:
                raise InputDataError(f"{path}:{i}: unknown item {line.item_code}")
            if line.qty > items[line.item_code].qty_per_pallet:
                raise InputDataError(
                    f"{path}:{i}: {line.qty} pieces exceed one pallet of {line.item_code}"
                )
            if line.total_weight_kg > max_pallet_kg:
                raise InputDataError(
                    f"{path}:{i}: pallet weight {line.total_weight_kg} kg exceeds limit "
                    f"{max_pallet_kg} kg"
                )
            lines.append(line)
    return lines


def save_inbound(lines: list[InboundLine], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(INBOUND_HEADER)
        for ln in lines:
            writer.writerow([
                ln.putaway_datetime.isoformat(sep=" "), ln.order_no, ln.item_code,
                ln.qty, ln.total_weight_kg, ln.mfg_date.isoformat(),
            ])
