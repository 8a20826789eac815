"""Supplier set: two (or more) local suppliers plus one main supplier.

Local suppliers are enquired in ascending lead-time order; the distant main
supplier is reachable only on the emergency path (corrective-maintenance
shortage). Availability is resolved per enquiry by comparing a fresh uniform
draw against the supplier's provision probability.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

from .errors import ConfigError
from .numerics import RngStream

__all__ = ["Supplier", "validate_chain", "local_suppliers", "main_supplier", "select_supplier"]


@dataclass(frozen=True)
class Supplier:
    id: str
    lead_time: float
    availability_prob: float
    ordering_cost: float
    kind: str  # "local" or "main"

    def __post_init__(self):
        if self.kind not in ("local", "main"):
            raise ConfigError(f"supplier {self.id}: kind must be 'local' or 'main', got {self.kind!r}")
        if not self.lead_time > 0.0:
            raise ConfigError(f"supplier {self.id}: lead_time must be positive")
        if not 0.0 <= self.availability_prob <= 1.0:
            raise ConfigError(f"supplier {self.id}: availability_prob must be in [0,1]")
        if not self.ordering_cost > 0.0:
            raise ConfigError(f"supplier {self.id}: ordering_cost must be positive")


def local_suppliers(suppliers: Sequence[Supplier]) -> List[Supplier]:
    return sorted((s for s in suppliers if s.kind == "local"), key=lambda s: s.lead_time)


def main_supplier(suppliers: Sequence[Supplier]) -> Supplier:
    mains = [s for s in suppliers if s.kind == "main"]
    if len(mains) != 1:
        raise ConfigError(f"exactly one main supplier required, got {len(mains)}")
    return mains[0]


def validate_chain(suppliers: Sequence[Supplier]) -> None:
    """Enforce the lead-time and ordering-cost orderings of the chain.

    Sorted by lead time, local lead times must be strictly increasing with
    nondecreasing ordering costs; the main supplier must be strictly slower
    and strictly costlier than every local.
    """
    locals_ = local_suppliers(suppliers)
    if not locals_:
        raise ConfigError("at least one local supplier required")
    main = main_supplier(suppliers)
    for a, b in zip(locals_, locals_[1:]):
        if not a.lead_time < b.lead_time:
            raise ConfigError(
                f"local lead times must be strictly increasing: "
                f"{a.id} ({a.lead_time}) vs {b.id} ({b.lead_time})"
            )
        if not a.ordering_cost <= b.ordering_cost:
            raise ConfigError(
                f"local ordering costs must not decrease with lead time: "
                f"{a.id} ({a.ordering_cost}) vs {b.id} ({b.ordering_cost})"
            )
    slowest_local = locals_[-1]
    if not slowest_local.lead_time < main.lead_time:
        raise ConfigError(
            f"main supplier lead time ({main.lead_time}) must exceed every local "
            f"lead time (max {slowest_local.lead_time})"
        )
    max_local_cost = max(s.ordering_cost for s in locals_)
    if not max_local_cost < main.ordering_cost:
        raise ConfigError(
            f"main supplier ordering cost ({main.ordering_cost}) must exceed every "
            f"local ordering cost (max {max_local_cost})"
        )


def select_supplier(
    suppliers: Sequence[Supplier],
    emergency: bool,
    rng: RngStream,
) -> Optional[Supplier]:
    """Pick the supplier for one order, or None if nobody can provide.

    Each enquiry draws a fresh uniform; a supplier provides when the draw is
    strictly below its availability probability. The main supplier is
    enquired only when ``emergency`` is set and both locals declined.
    """
    for sup in local_suppliers(suppliers):
        if rng.uniform() < sup.availability_prob:
            return sup
    if emergency:
        sup = main_supplier(suppliers)
        if rng.uniform() < sup.availability_prob:
            return sup
    return None
