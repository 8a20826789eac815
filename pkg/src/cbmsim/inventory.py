"""On-hand and pipeline stock under the degradation-triggered (T, S) policy.

Orders are placed up to the maximum level S whenever the post-action
degradation level is strictly above the reorder level T. At a failure with
insufficient stock, the emergency quantity restores the total to S after the
corrective consumption.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

from .errors import ShortageError

__all__ = [
    "Order",
    "InventoryState",
    "SpareRequirements",
    "order_up_to_quantity",
    "should_order",
    "receive_due",
    "projected_on_hand",
    "consume",
    "emergency_order_quantity",
]


@dataclass
class Order:
    quantity: int
    placed_at: float
    delivery_at: float
    supplier_id: str
    emergency: bool = False

    def __post_init__(self):
        if self.quantity < 1:
            raise ValueError(f"order quantity must be >= 1, got {self.quantity}")
        if self.delivery_at < self.placed_at:
            raise ValueError("delivery_at cannot precede placed_at")


@dataclass
class InventoryState:
    on_hand: int
    pipeline: List[Order] = field(default_factory=list)

    def __post_init__(self):
        if self.on_hand < 0:
            raise ValueError(f"on_hand must be non-negative, got {self.on_hand}")

    @property
    def pipeline_quantity(self) -> int:
        return sum(o.quantity for o in self.pipeline)

    @property
    def total_stock(self) -> int:
        return self.on_hand + self.pipeline_quantity


@dataclass(frozen=True)
class SpareRequirements:
    """Parts consumed per maintenance action kind."""

    cms: int = 1           # corrective
    pms: int = 1           # perfect preventive
    ipms_prob: float = 0.5  # probability an imperfect action replaces a part

    def __post_init__(self):
        if self.cms < 1 or self.pms < 1:
            raise ValueError("cms and pms must be >= 1")
        if not 0.0 <= self.ipms_prob <= 1.0:
            raise ValueError(f"ipms_prob must be in [0,1], got {self.ipms_prob}")


def order_up_to_quantity(inv: InventoryState, S: int) -> int:
    return max(0, S - inv.total_stock)


def should_order(x_post_action: float, T_reorder: float) -> bool:
    # strictly above T triggers an order
    return x_post_action > T_reorder


def receive_due(inv: InventoryState, now: float) -> InventoryState:
    """Move every order due at or before ``now`` into on-hand stock."""
    still_out = []
    for order in inv.pipeline:
        if order.delivery_at <= now:
            inv.on_hand += order.quantity
        else:
            still_out.append(order)
    inv.pipeline = still_out
    return inv


def projected_on_hand(inv: InventoryState, at: float) -> int:
    """On-hand stock at time ``at`` assuming no consumption until then."""
    return inv.on_hand + sum(o.quantity for o in inv.pipeline if o.delivery_at <= at)


def consume(inv: InventoryState, n: int) -> InventoryState:
    if n < 1:
        raise ValueError(f"consumption must be >= 1, got {n}")
    if inv.on_hand < n:
        raise ShortageError(f"need {n} parts but only {inv.on_hand} on hand")
    inv.on_hand -= n
    return inv


def emergency_order_quantity(inv: InventoryState, S: int, pending_consumption: int) -> int:
    """Quantity leaving total stock exactly at S after the corrective
    consumption is taken out."""
    if pending_consumption < 1:
        raise ValueError("pending_consumption must be >= 1")
    return S + pending_consumption - inv.total_stock
