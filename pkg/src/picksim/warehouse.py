"""Warehouse state: layout, item catalog, pallet inventory, travel arithmetic.

Physical structure is a set of storage slots addressed by a
``(row, layer, slot)`` triple, each with planar coordinates in
centimeters, a zone label, and a ``seq_no`` giving the slot's position
along the picking route (a total order over the layout).  Three anchor
points (entrance, consolidation/special area, elevator) are ordinary
locations with reserved ids on row -1 so travel to and from them uses
the same arithmetic as slot-to-slot travel.

Inventory is one pallet record per slot at most.  Picking always
consumes the oldest manufacturing date first (ties broken by route
position), and a record is removed the moment its quantity reaches
zero, which frees the slot.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from datetime import date, datetime
from typing import Iterable, Iterator

from .errors import InputDataError, ParseError

LocationId = tuple[int, int, int]

ANCHOR_ROW = -1
ENTRANCE_ID: LocationId = (ANCHOR_ROW, 0, 0)
SPECIAL_AREA_ID: LocationId = (ANCHOR_ROW, 0, 1)
ELEVATOR_ID: LocationId = (ANCHOR_ROW, 0, 2)
ANCHOR_ZONE = "anchor"

HANDLIFT = "handlift"
STACKER = "stacker"

CAN_PUT_AWAY = "put_away"
CAN_PICK = "pick"
CAN_TRANSFER = "transfer"


@dataclass(frozen=True)
class Location:
    """One addressable point of the layout (storage slot or anchor)."""

    id: LocationId
    x_cm: float
    y_cm: float
    z_cm: float
    zone: str
    seq_no: int
    direction: str = ""
    parent: str = ""

    @property
    def row(self) -> int:
        return self.id[0]

    @property
    def is_anchor(self) -> bool:
        return self.id[0] == ANCHOR_ROW


@dataclass(frozen=True)
class Item:
    """Catalog entry for one stock-keeping unit."""

    code: str
    category: str
    weight_kg: float
    home_zone: str
    qty_per_pallet: int

    def __post_init__(self) -> None:
        if self.weight_kg <= 0:
            raise InputDataError(f"item {self.code}: weight must be positive")
        if self.qty_per_pallet < 1:
            raise InputDataError(f"item {self.code}: qty_per_pallet must be >= 1")


@dataclass
class PalletRecord:
    """One pallet of a single item occupying one slot."""

    location: LocationId
    item: str
    qty: int
    mfg_date: date


@dataclass(frozen=True)
class Equipment:
    """A class of handling equipment and its motion parameters.

    ``speed_cm_s`` is planar travel speed, ``lift_speed_cm_s`` vertical
    speed (zero means the equipment cannot lift), ``turn_time_s`` the
    fixed cost per aisle change.  ``capabilities`` lists which processes
    the equipment may serve.
    """

    kind: str
    count: int
    speed_cm_s: float
    lift_speed_cm_s: float
    turn_time_s: float
    capabilities: frozenset[str]
    operators_per_unit: int = 1


@dataclass
class PalletTouch:
    """A single pallet visited while picking one order line."""

    location: LocationId
    item: str
    taken: int
    drained: bool
    mfg_date: date


@dataclass
class ProcessTotals:
    """Accumulated labor seconds per sub-process for one weekly run."""

    pick_full_s: float = 0.0
    pick_partial_s: float = 0.0
    put_full_s: float = 0.0
    put_partial_s: float = 0.0
    move_s: float = 0.0
    sort_full_s: float = 0.0
    sort_partial_s: float = 0.0
    waiting_s: float = 0.0
    turns: int = 0


def aisle_turns(a: Location, b: Location) -> int:
    """Number of aisle changes between two points: 0 within a row, else 1."""
    return 0 if a.row == b.row else 1


def travel_time(a: Location, b: Location, eq: Equipment, turns: int) -> float:
    """Rectilinear travel seconds between two points with the given equipment.

    Planar distance moves at ``speed_cm_s``, vertical distance at
    ``lift_speed_cm_s``, and each turn costs ``turn_time_s``.  Symmetric in
    its endpoints.  Vertical travel with non-lifting equipment is an error.
    """
    dx = abs(a.x_cm - b.x_cm)
    dy = abs(a.y_cm - b.y_cm)
    dz = abs(a.z_cm - b.z_cm)
    t = (dx + dy) / eq.speed_cm_s
    if dz:
        if eq.lift_speed_cm_s <= 0:
            raise InputDataError(
                f"{eq.kind} cannot lift but travel {a.id} -> {b.id} needs {dz} cm vertical"
            )
        t += dz / eq.lift_speed_cm_s
    return t + turns * eq.turn_time_s


def _default_anchors() -> list[Location]:
    return [
        Location(ENTRANCE_ID, 0.0, 0.0, 0.0, ANCHOR_ZONE, -3),
        Location(SPECIAL_AREA_ID, 0.0, 0.0, 0.0, ANCHOR_ZONE, -2),
        Location(ELEVATOR_ID, 0.0, 0.0, 0.0, ANCHOR_ZONE, -1),
    ]


class Warehouse:
    """Layout plus live inventory, with optional continuous auditing.

    With ``audit=True`` every mutation keeps per-item counters so that
    ``verify_conservation`` can assert initial + replenished - picked ==
    on-hand at any instant, and every pick asserts that consumed
    manufacturing dates never decrease per item.
    """

    def __init__(self, locations: Iterable[Location], items: Iterable[Item], audit: bool = False):
        self.storage: dict[LocationId, Location] = {}
        self.anchors: dict[LocationId, Location] = {}
        for loc in locations:
            target = self.anchors if loc.is_anchor else self.storage
            if loc.id in target:
                raise InputDataError(f"duplicate location id {loc.id}")
            target[loc.id] = loc
        for anchor in _default_anchors():
            self.anchors.setdefault(anchor.id, anchor)
        seqs = [loc.seq_no for loc in self.storage.values()]
        if len(set(seqs)) != len(seqs):
            raise InputDataError("seq_no values must be unique across storage slots")

        self.items: dict[str, Item] = {}
        for item in items:
            if item.code in self.items:
                raise InputDataError(f"duplicate item code {item.code}")
            self.items[item.code] = item

        self.records: dict[LocationId, PalletRecord] = {}
        self._slots_by_item: dict[str, set[LocationId]] = {}

        self.audit = audit
        self._initial: dict[str, int] = {}
        self._replenished: dict[str, int] = {}
        self._picked: dict[str, int] = {}
        self._last_picked_date: dict[str, date] = {}

    # -- lookups ---------------------------------------------------------

    def location(self, loc_id: LocationId) -> Location:
        loc = self.storage.get(loc_id) or self.anchors.get(loc_id)
        if loc is None:
            raise InputDataError(f"unknown location id {loc_id}")
        return loc

    def item(self, code: str) -> Item:
        try:
            return self.items[code]
        except KeyError:
            raise InputDataError(f"unknown item code {code}") from None

    def is_vacant(self, loc_id: LocationId) -> bool:
        if loc_id not in self.storage:
            raise InputDataError(f"unknown storage slot {loc_id}")
        return loc_id not in self.records

    def vacant_slots(self) -> Iterator[Location]:
        for loc_id, loc in self.storage.items():
            if loc_id not in self.records:
                yield loc

    def total_on_hand(self, item_code: str) -> int:
        self.item(item_code)
        return sum(self.records[lid].qty for lid in self._slots_by_item.get(item_code, ()))

    def on_hand_by_item(self) -> dict[str, int]:
        return {code: self.total_on_hand(code) for code in self.items}

    # -- mutations -------------------------------------------------------

    def place(self, loc_id: LocationId, item_code: str, qty: int, mfg_date: date,
              source: str = "initial") -> PalletRecord:
        """Create a pallet record on a vacant slot.  Never overwrites."""
        item = self.item(item_code)
        if loc_id not in self.storage:
            raise InputDataError(f"cannot place pallet on unknown slot {loc_id}")
        if loc_id in self.records:
            raise InputDataError(f"slot {loc_id} already holds a pallet")
        if qty < 1 or qty > item.qty_per_pallet:
            raise InputDataError(
                f"pallet of {item_code} must hold 1..{item.qty_per_pallet} pieces, got {qty}"
            )
        record = PalletRecord(loc_id, item_code, qty, mfg_date)
        self.records[loc_id] = record
        self._slots_by_item.setdefault(item_code, set()).add(loc_id)
        if self.audit:
            bucket = self._initial if source == "initial" else self._replenished
            bucket[item_code] = bucket.get(item_code, 0) + qty
        return record

    def fifo_lot(self, item_code: str) -> PalletRecord | None:
        """Oldest pallet of the item (ties by route position); None if out of stock."""
        slots = self._slots_by_item.get(item_code)
        if not slots:
            self.item(item_code)
            return None
        best = min(slots, key=lambda lid: (self.records[lid].mfg_date, self.storage[lid].seq_no))
        return self.records[best]

    def pick(self, item_code: str, qty: int) -> list[PalletTouch]:
        """Consume ``qty`` pieces oldest-first, splitting across pallets.

        Drained pallets are removed, freeing their slots.  Callers must
        ensure qty <= total_on_hand beforehand.
        """
        if qty < 1:
            raise InputDataError(f"pick quantity must be >= 1, got {qty}")
        touches: list[PalletTouch] = []
        remaining = qty
        while remaining > 0:
            record = self.fifo_lot(item_code)
            if record is None:
                raise InputDataError(
                    f"pick of {qty} x {item_code} exceeds stock ({qty - remaining} taken)"
                )
            taken = min(remaining, record.qty)
            record.qty -= taken
            drained = record.qty == 0
            if drained:
                del self.records[record.location]
                self._slots_by_item[item_code].discard(record.location)
            touches.append(PalletTouch(record.location, item_code, taken, drained, record.mfg_date))
            remaining -= taken
            if self.audit:
                self._picked[item_code] = self._picked.get(item_code, 0) + taken
                last = self._last_picked_date.get(item_code)
                assert last is None or record.mfg_date >= last, (
                    f"FIFO violation for {item_code}: consumed {record.mfg_date} after {last}"
                )
                self._last_picked_date[item_code] = record.mfg_date
        return touches

    def verify_conservation(self) -> None:
        """Assert initial + replenished - picked == on-hand for every item."""
        for code in self.items:
            expected = (
                self._initial.get(code, 0)
                + self._replenished.get(code, 0)
                - self._picked.get(code, 0)
            )
            actual = self.total_on_hand(code)
            assert expected == actual, (
                f"conservation broken for {code}: expected {expected}, on hand {actual}"
            )


# -- CSV interfaces ------------------------------------------------------

LAYOUT_HEADER = ["row", "layer", "slot", "x_cm", "y_cm", "z_cm", "zone", "seq_no", "direction", "parent"]
ITEMS_HEADER = ["item_code", "category", "weight_kg", "home_zone", "qty_per_pallet"]
INVENTORY_HEADER = ["row", "layer", "slot", "item_code", "qty", "mfg_date"]


def _open_reader(path: str, expected_header: list[str]) -> tuple[object, csv.DictReader]:
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    reader = csv.DictReader(fh)
    if reader.fieldnames != expected_header:
        fh.close()
        raise ParseError(
            f"{path}: expected header {','.join(expected_header)}, got "
            f"{','.join(reader.fieldnames or ['<empty>'])}"
        )
    return fh, reader


def _parse_date(text: str, path: str, line: int) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError as exc:
        raise ParseError(f"{path}:{line}: bad ISO date {text!r}") from exc


def load_layout(path: str) -> list[Location]:
    fh, reader = _open_reader(path, LAYOUT_HEADER)
    locations: list[Location] = []
    with fh:
        for i, row in enumerate(reader, start=2):
            try:
                loc = Location(
                    id=(int(row["row"]), int(row["layer"]), int(row["slot"])),
                    x_cm=float(row["x_cm"]),
                    y_cm=float(row["y_cm"]),
                    z_cm=float(row["z_cm"]),
                    zone=row["zone"],
                    seq_no=int(row["seq_no"]),
                    direction=row["direction"],
                    parent=row["parent"],
                )
            except (TypeError, ValueError) as exc:
                raise ParseError(f"{path}:{i}: {exc}") from exc
            locations.append(loc)
    return locations


def save_layout(locations: Iterable[Location], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(LAYOUT_HEADER)
        for loc in locations:
            r, layer, s = loc.id
            writer.writerow([r, layer, s, loc.x_cm, loc.y_cm, loc.z_cm,
                             loc.zone, loc.seq_no, loc.direction, loc.parent])


def load_items(path: str) -> list[Item]:
    fh, reader = _open_reader(path, ITEMS_HEADER)
    items: list[Item] = []
    with fh:
        for i, row in enumerate(reader, start=2):
            try:
                items.append(Item(
                    code=row["item_code"],
                    category=row["category"],
                    weight_kg=float(row["weight_kg"]),
                    home_zone=row["home_zone"],
                    qty_per_pallet=int(row["qty_per_pallet"]),
                ))
            except (TypeError, ValueError) as exc:
                raise ParseError(f"{path}:{i}: {exc}") from exc
    return items


def save_items(items: Iterable[Item], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ITEMS_HEADER)
        for item in items:
            writer.writerow([item.code, item.category, item.weight_kg,
                             item.home_zone, item.qty_per_pallet])


@dataclass(frozen=True)
class InventoryRow:
    location: LocationId
    item: str
    qty: int
    mfg_date: date


def load_inventory(path: str) -> list[InventoryRow]:
    fh, reader = _open_reader(path, INVENTORY_HEADER)
    rows: list[InventoryRow] = []
    with fh:
        for i, row in enumerate(reader, start=2):
            try:
                rows.append(InventoryRow(
                    location=(int(row["row"]), int(row["layer"]), int(row["slot"])),
                    item=row["item_code"],
                    qty=int(row["qty"]),
                    mfg_date=_parse_date(row["mfg_date"], path, i),
                ))
            except (TypeError, ValueError) as exc:
                raise ParseError(f"{path}:{i}: {exc}") from exc
    return rows


def save_inventory(rows: Iterable[InventoryRow], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(INVENTORY_HEADER)
        for r in rows:
            row, layer, slot = r.location
            writer.writerow([row, layer, slot, r.item, r.qty, r.mfg_date.isoformat()])
