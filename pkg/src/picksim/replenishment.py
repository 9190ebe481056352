"""Shelf replenishment: periodic restocking driven by inventory levels.

A replenishment operator visits the storage area at sampled intervals.
Each visit restocks the product with the lowest total on-hand quantity
among those that currently have a vacant candidate slot under the
active storage policy (ties go to the smallest item code), placing one
full pallet manufactured on the current simulation date.  If nothing is
eligible the visit is skipped, but the next one is always scheduled: a
full warehouse is not a terminal state.

Intervals come from a sampler that either returns a constant mean or
draws Normal(mu, sigma) clamped below by a positive floor, so simulated
time always advances.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from datetime import date, timedelta

from .config import REPLENISH_SAMPLED, SimConfig
from .errors import InputDataError
from .events import Engine, Event, Replenish
from .picking import PickingSession
from .storage import StoragePolicy
from .warehouse import ProcessTotals

log = logging.getLogger("picksim.replenishment")


@dataclass
class ReplenishmentSampler:
    """Inter-replenishment interval source, deterministic under a seed."""

    mode: str
    mu_s: float
    sigma_s: float
    t_min_s: float
    rng: random.Random

    @classmethod
    def from_config(cls, cfg: SimConfig, seed: int) -> "ReplenishmentSampler":
        r = cfg.replenish
        if r.t_min_s is None or r.t_min_s <= 0:
            raise InputDataError("replenishment interval floor must be positive")
        return cls(r.mode, r.mu_s, r.sigma_s, r.t_min_s, random.Random(seed))

    def draw(self) -> float:
        if self.mode == REPLENISH_SAMPLED:
            return max(self.rng.gauss(self.mu_s, self.sigma_s), self.t_min_s)
        return self.mu_s


class Replenisher:
    """Event handler for replenishment visits in one weekly run."""

    def __init__(self, policy: StoragePolicy, cfg: SimConfig, sampler: ReplenishmentSampler,
                 session: PickingSession, metrics: ProcessTotals, start_date: date):
        self.policy = policy
        self.warehouse = policy.warehouse
        self.cfg = cfg
        self.sampler = sampler
        self.session = session
        self.metrics = metrics
        self.start_date = start_date

    def sim_date(self, now: float) -> date:
        return self.start_date + timedelta(days=int(now // 86400.0))

    def handle_rp(self, sim: Engine, event: Event) -> list[tuple[float, object]]:
        if self.session.all_complete:
            # the week's work is done; let the event list drain
            return []
        gap = self.sampler.draw()
        code = self._select()
        if code is None:
            log.info("replenishment at t=%s skipped: no product has a vacant slot", event.time)
        else:
            item = self.warehouse.item(code)
            assignment = self.policy.put_away(
                code, item.qty_per_pallet, self.sim_date(event.time), event.time
            )
            assert assignment is not None, "eligibility guaranteed a vacant slot"
            self.metrics.put_full_s += assignment.handle_s
            self.metrics.move_s += assignment.travel_s
            self.metrics.turns += assignment.turns
        return [(event.time + gap, Replenish())]

    def _select(self) -> str | None:
        """Eligible product with the lowest stock; ties by item code."""
        best: tuple[int, str] | None = None
        for code in self.warehouse.items:
            if not self.policy.has_vacancy(code):
                continue
            key = (self.warehouse.total_on_hand(code), code)
            if best is None or key < best:
                best = key
        return best[1] if best else None
