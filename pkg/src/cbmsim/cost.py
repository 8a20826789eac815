"""Cost parameters, the per-cycle event ledger, and cost-rate estimators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ConfigError

__all__ = [
    "CostParams",
    "CostLedger",
    "imperfect_cost",
    "accrue_holding",
    "total_cost",
    "cost_rate",
]


@dataclass(frozen=True)
class CostParams:
    c_ins: float   # per inspection
    c_p0: float    # perfect preventive action
    c_c: float     # corrective action
    c_d1: float    # malfunction cost rate (degraded production continues)
    c_d2: float    # downtime cost rate (production halted)
    c_h: float     # holding cost rate per part per unit time
    c_o: float     # ordinary (local) ordering cost
    c_oe: float    # emergency (main supplier) ordering cost
    c_pur: float   # purchase price per part, identical across suppliers
    eta: float     # exponent of the imperfect-cost improvement factor

    def __post_init__(self):
        positive = ("c_ins", "c_p0", "c_c", "c_d1", "c_d2", "c_h", "c_o", "c_oe", "c_pur")
        for name in positive:
            if not getattr(self, name) > 0.0:
                raise ConfigError(f"{name} must be strictly positive, got {getattr(self, name)}")
        if self.eta < 0.0:
            raise ConfigError(f"eta must be non-negative, got {self.eta}")
        if not self.c_c > self.c_p0:
            raise ConfigError(
                f"corrective cost c_c ({self.c_c}) must exceed perfect preventive cost c_p0 ({self.c_p0})"
            )
        if not self.c_d2 > self.c_d1:
            raise ConfigError(
                f"downtime rate c_d2 ({self.c_d2}) must exceed malfunction rate c_d1 ({self.c_d1})"
            )
        if not self.c_oe > self.c_o:
            raise ConfigError(
                f"emergency ordering cost c_oe ({self.c_oe}) must exceed ordinary cost c_o ({self.c_o})"
            )


@dataclass
class CostLedger:
    """Event counters and accumulators for one life cycle."""

    n_ins: int = 0
    n_ip: int = 0
    n_p: int = 0
    n_c: int = 0
    n_o: int = 0
    n_oe: int = 0
    imperfect_cost_sum: float = 0.0
    d1: float = 0.0                # malfunction duration
    d2: float = 0.0                # downtime duration
    holding_integral: float = 0.0  # integral of on-hand stock over time
    purchased: int = 0


def imperfect_cost(gain: float, x_before: float, params: CostParams) -> float:
    """Cost of one imperfect action: c_p0 * (gain / x_before)^eta."""
    if not 0.0 < gain < x_before:
        raise ValueError(f"gain must lie strictly in (0, {x_before}), got {gain}")
    return params.c_p0 * (gain / x_before) ** params.eta


def accrue_holding(ledger: CostLedger, on_hand: int, dt: float) -> CostLedger:
    """Add one piecewise-constant holding segment (rectangle rule, exact)."""
    if dt < 0.0:
        raise ValueError(f"dt must be non-negative, got {dt}")
    ledger.holding_integral += on_hand * dt
    return ledger


def total_cost(ledger: CostLedger, params: CostParams) -> float:
    """Cycle cost: inspections + imperfect actions + perfect actions +
    corrective + malfunction + downtime + ordering + holding + purchases."""
    return (
        params.c_ins * ledger.n_ins
        + ledger.imperfect_cost_sum
        + params.c_p0 * ledger.n_p
        + params.c_c * ledger.n_c
        + params.c_d1 * ledger.d1
        + params.c_d2 * ledger.d2
        + params.c_o * ledger.n_o
        + params.c_oe * ledger.n_oe
        + params.c_h * ledger.holding_integral
        + params.c_pur * ledger.purchased
    )


def cost_rate(results: Sequence, per_cycle_mean: bool = False) -> float:
    """Long-run cost rate over regeneration cycles.

    Default is the renewal-reward ratio of sums; ``per_cycle_mean`` switches
    to the (biased) mean of per-cycle ratios for comparison.
    """
    if not results:
        raise ValueError("cost_rate needs at least one replication result")
    if per_cycle_mean:
        return sum(r.total_cost / r.cycle_length for r in results) / len(results)
    total_length = sum(r.cycle_length for r in results)
    if total_length <= 0.0:
        raise ValueError("total cycle length must be positive")
    return sum(r.total_cost for r in results) / total_length
