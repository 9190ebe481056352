"""Storage policies: candidate sets, nearest-vacant choice, waiting list."""

from __future__ import annotations

import random
from datetime import date, datetime

import pytest

from conftest import ELEVATOR, anchors, make_item, slot
from picksim import (
    InputDataError,
    InventoryRow,
    PolicyKind,
    SimConfig,
    StoragePolicy,
    Warehouse,
    load_inbound,
    place_initial,
    save_inbound,
    travel_time,
    aisle_turns,
)
from picksim.storage import InboundLine

CFG = SimConfig()
MFG = date(2024, 5, 1)


def _world(n_rows=2, per_row=3, zones=("Z1", "Z2")):
    """Rows of slots; row r belongs to zones[r % len(zones)]."""
    slots = []
    seq = 0
    for r in range(n_rows):
        for s in range(per_row):
            slots.append(slot(r, 1, s, 300.0 + 400.0 * r, 100.0 + 150.0 * s,
                              zone=zones[r % len(zones)], seq=seq))
            seq += 1
    items = [make_item("A", zone="Z1"), make_item("B", zone="Z2")]
    wh = Warehouse(anchors() + slots, items)
    return wh, slots


def _policy(wh, kind, slot_map=None):
    return StoragePolicy(kind, wh, CFG.stacker(), slot_map=slot_map,
                         base_time_s=CFG.BTpa, per_pallet_s=CFG.PPpa)


# -- candidate sets -------------------------------------------------------


def test_fixed_candidates_are_the_dedicated_slots():
    wh, slots = _world()
    pol = _policy(wh, PolicyKind.FIXED, {"A": [slots[0].id, slots[4].id], "B": [slots[1].id]})
    assert [l.id for l in pol.candidate_slots("A")] == [slots[0].id, slots[4].id]
    with pytest.raises(InputDataError, match="no dedicated slots"):
        pol.candidate_slots("ZZ")


def test_fixed_policy_requires_a_slot_map():
    wh, _ = _world()
    with pytest.raises(InputDataError, match="slot map"):
        StoragePolicy(PolicyKind.FIXED, wh, CFG.stacker())


def test_random_candidates_are_every_slot():
    wh, slots = _world()
    pol = _policy(wh, PolicyKind.RANDOM)
    assert {l.id for l in pol.candidate_slots("A")} == {s.id for s in slots}


def test_zone_candidates_are_the_home_zone():
    wh, slots = _world()
    pol = _policy(wh, PolicyKind.FIXED_ZONE)
    assert {l.zone for l in pol.candidate_slots("A")} == {"Z1"}
    assert {l.zone for l in pol.candidate_slots("B")} == {"Z2"}


# -- nearest vacant -------------------------------------------------------


def test_put_away_takes_nearest_vacant_from_receiving():
    wh, slots = _world()
    pol = _policy(wh, PolicyKind.RANDOM)
    a1 = pol.put_away("A", 10, MFG, now=0.0)
    # slot (0,1,0) at (300,100) is closest to the elevator at (60,0)
    assert a1.location == (0, 1, 0)
    assert a1.handle_s == CFG.BTpa + CFG.PPpa
    a2 = pol.put_away("A", 10, MFG, now=0.0)
    assert a2.location == (0, 1, 1)  # next nearest, first one now occupied


def test_put_away_qty_bounds():
    wh, _ = _world()
    pol = _policy(wh, PolicyKind.RANDOM)
    with pytest.raises(InputDataError, match="1..10"):
        pol.put_away("A", 11, MFG, now=0.0)


def test_nearest_vacant_matches_brute_force():
    rng = random.Random(7)
    wh, slots = _world(n_rows=4, per_row=4, zones=("Z1", "Z2", "Z1", "Z2"))
    pol = _policy(wh, PolicyKind.RANDOM)
    # occupy a random half of the warehouse
    for s in rng.sample(slots, 8):
        wh.place(s.id, "B", 1, MFG)
    receiving = wh.location(ELEVATOR)
    eq = CFG.stacker()
    expected = min(
        (s for s in slots if wh.is_vacant(s.id)),
        key=lambda s: (travel_time(receiving, s, eq, aisle_turns(receiving, s)), s.seq_no),
    )
    assert pol.nearest_vacant("A").id == expected.id


def test_primary_location_fixed_and_shared():
    wh, slots = _world()
    fixed = _policy(wh, PolicyKind.FIXED, {"A": [slots[4].id, slots[0].id]})
    assert fixed.primary_location("A").id == slots[4].id  # first mapped slot
    shared = _policy(wh, PolicyKind.RANDOM)
    assert shared.primary_location("A").seq_no == 0  # earliest route position
    zoned = _policy(wh, PolicyKind.FIXED_ZONE)
    assert zoned.primary_location("B").zone == "Z2"


# -- waiting list ---------------------------------------------------------


def test_full_candidates_enqueue_and_release_fifo():
    wh, slots = _world(n_rows=1, per_row=2, zones=("Z1",))
    pol = _policy(wh, PolicyKind.RANDOM)
    assert pol.put_away("A", 10, MFG, now=0.0) is not None
    assert pol.put_away("A", 10, MFG, now=1.0) is not None
    assert pol.put_away("A", 10, MFG, now=2.0) is None  # warehouse full
    assert pol.put_away("B", 10, MFG, now=3.0) is None
    assert [w.item for w in pol.waiting] == ["A", "B"]

    wh.pick("A", 10)  # drains one pallet, frees one slot
    placed = pol.on_slot_freed(now=10.0)
    assert [(w.item, a.location is not None) for w, a in placed] == [("A", True)]
    assert [w.item for w in pol.waiting] == ["B"]  # head went first, B still waits


def test_head_of_line_blocks_later_entries():
    wh, slots = _world(n_rows=2, per_row=1, zones=("Z1", "Z2"))
    pol = _policy(wh, PolicyKind.FIXED_ZONE)
    wh.place(slots[0].id, "A", 5, MFG)   # Z1 full
    wh.place(slots[1].id, "B", 5, MFG)   # Z2 full
    assert pol.put_away("A", 10, MFG, now=0.0) is None   # A waits for Z1
    assert pol.put_away("B", 10, MFG, now=1.0) is None   # B waits for Z2
    # Z2 frees up, but the head of the queue (A) still has nowhere to go:
    # nothing may overtake it, so B keeps waiting too
    wh.pick("B", 5)
    assert pol.on_slot_freed(now=2.0) == []
    assert [w.item for w in pol.waiting] == ["A", "B"]
    wh.pick("A", 5)  # now Z1 has room: the whole queue drains in order
    placed = pol.on_slot_freed(now=3.0)
    assert [entry.item for entry, _ in placed] == ["A", "B"]
    assert [a.location for _, a in placed] == [slots[0].id, slots[1].id]
    assert not pol.waiting


def test_policy_containment_under_load():
    wh, slots = _world(n_rows=4, per_row=4, zones=("Z1", "Z2", "Z1", "Z2"))
    pol = _policy(wh, PolicyKind.FIXED_ZONE)
    for i in range(12):
        a = pol.put_away("A", 10, MFG, now=float(i))
        assert a is None or wh.location(a.location).zone == "Z1"
    # eight Z1 slots exist, so exactly eight placements succeeded
    assert len(pol.waiting) == 4
    assert all(wh.records[lid].item == "A" for lid in wh.records)


# -- initial placement ----------------------------------------------------


def test_place_initial_orders_by_priority_then_age():
    wh, slots = _world(n_rows=1, per_row=3, zones=("Z1",))
    wh.items["B"] = make_item("B", zone="Z1")  # rehome B so both fit Z1
    pol = _policy(wh, PolicyKind.FIXED_ZONE)
    rows = [
        InventoryRow((0, 0, 0), "B", 3, date(2024, 4, 2)),
        InventoryRow((0, 0, 0), "A", 4, date(2024, 4, 9)),
        InventoryRow((0, 0, 0), "A", 5, date(2024, 4, 1)),
    ]
    fallbacks = place_initial(pol, rows, priority={"A": 9.0, "B": 1.0})
    assert fallbacks == 0
    # A places first (higher priority), oldest pallet first -> nearest slot
    assert wh.records[slots[0].id].item == "A"
    assert wh.records[slots[0].id].mfg_date == date(2024, 4, 1)
    assert wh.records[slots[1].id].item == "A"
    assert wh.records[slots[2].id].item == "B"


def test_place_initial_falls_back_outside_policy_slots():
    wh, slots = _world(n_rows=2, per_row=1, zones=("Z1", "Z2"))
    pol = _policy(wh, PolicyKind.FIXED_ZONE)
    rows = [
        InventoryRow((0, 0, 0), "A", 1, date(2024, 4, 1)),
        InventoryRow((0, 0, 0), "A", 1, date(2024, 4, 2)),  # Z1 now full
    ]
    assert place_initial(pol, rows, priority={"A": 1.0}) == 1
    held = {rec.item for rec in wh.records.values()}
    assert held == {"A"} and len(wh.records) == 2


def test_place_initial_overflow_is_an_error():
    wh, slots = _world(n_rows=1, per_row=1, zones=("Z1",))
    pol = _policy(wh, PolicyKind.RANDOM)
    rows = [InventoryRow((0, 0, 0), "A", 1, MFG),
            InventoryRow((0, 0, 0), "A", 2, MFG)]
    with pytest.raises(InputDataError, match="capacity"):
        place_initial(pol, rows, priority={})


# -- inbound file ---------------------------------------------------------


def test_inbound_round_trip_and_validation(tmp_path):
    items = {"A": make_item("A", qpp=10, weight=2.0)}
    good = InboundLine(datetime(2024, 6, 3, 8, 30), "IN-1", "A", 10, 20.0, MFG)
    path = tmp_path / "inbound.csv"
    save_inbound([good], str(path))
    assert load_inbound(str(path), items, max_pallet_kg=1200.0) == [good]

    too_many = InboundLine(datetime(2024, 6, 3, 8, 30), "IN-2", "A", 11, 22.0, MFG)
    save_inbound([too_many], str(path))
    with pytest.raises(InputDataError, match="exceed one pallet"):
        load_inbound(str(path), items, max_pallet_kg=1200.0)

    heavy = InboundLine(datetime(2024, 6, 3, 8, 30), "IN-3", "A", 10, 1500.0, MFG)
    save_inbound([heavy], str(path))
    with pytest.raises(InputDataError, match="weight"):
        load_inbound(str(path), items, max_pallet_kg=1200.0)

    unknown = InboundLine(datetime(2024, 6, 3, 8, 30), "IN-4", "ZZ", 1, 2.0, MFG)
    save_inbound([unknown], str(path))
    with pytest.raises(InputDataError, match="unknown item"):
        load_inbound(str(path), items, max_pallet_kg=1200.0)
