"""Life-cycle simulation: the event loop tying degradation, inspection
scheduling, maintenance, spare ordering, and cost accrual together.

One replication simulates a single regeneration cycle, from the as-good-as-new
state with a full inventory until the first corrective maintenance completes.
Replication r draws from RNG stream r, so batches are reproducible for any
worker count and execution order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .cost import CostLedger, CostParams, accrue_holding, imperfect_cost, total_cost
from .degradation import DegradationParams, SystemState, advance, apply_imperfect, apply_perfect, first_passage
from .errors import ConfigError, SimulationError
from .inventory import (
    InventoryState,
    Order,
    SpareRequirements,
    consume,
    emergency_order_quantity,
    order_up_to_quantity,
    receive_due,
    should_order,
)
from .numerics import RngStream
from .policy import ActionKind, PolicyParams, classify_action, schedule_next_inspection
from .supply import Supplier, local_suppliers, select_supplier, validate_chain

__all__ = [
    "ScenarioConfig",
    "ReplicationResult",
    "BatchStats",
    "TraceEvent",
    "run_cycle",
    "run_replications",
    "availability_of",
]

_GRID_EPS = 1e-9


@dataclass(frozen=True)
class TraceEvent:
    t: float
    kind: str
    info: dict


@dataclass(frozen=True)
class ScenarioConfig:
    degradation: DegradationParams
    policy: PolicyParams
    costs: CostParams
    suppliers: Tuple[Supplier, ...]
    requirements: SpareRequirements
    replications: int
    seed: int
    emergency_retry_interval: Optional[float] = None  # None -> shortest local lead time
    emergency_retry_cap: int = 1000
    max_inspections_per_cycle: int = 100_000
    record_trace: bool = False
    per_cycle_rate: bool = False  # report mean of per-cycle ratios instead of ratio of sums

    def __post_init__(self):
        if self.replications < 1:
            raise ConfigError(f"replications must be >= 1, got {self.replications}")
        if not self.policy.M < self.degradation.L:
            raise ConfigError(
                f"M ({self.policy.M}) must be below failure threshold L ({self.degradation.L})"
            )
        validate_chain(self.suppliers)
        if self.emergency_retry_interval is not None and not self.emergency_retry_interval > 0.0:
            raise ConfigError("emergency_retry_interval must be positive")
        if self.emergency_retry_cap < 1:
            raise ConfigError("emergency_retry_cap must be >= 1")

    @property
    def retry_interval(self) -> float:
        if self.emergency_retry_interval is not None:
            return self.emergency_retry_interval
        return local_suppliers(self.suppliers)[0].lead_time


@dataclass
class ReplicationResult:
    stream_id: int
    cycle_length: float
    total_cost: float
    availability: float
    ledger: CostLedger
    preventive_shortages: int = 0
    trace: Optional[List[TraceEvent]] = None


def availability_of(result: ReplicationResult) -> float:
    """Fraction of the cycle not spent in downtime; malfunction time does not
    count against availability because production continues during it."""
    if not result.cycle_length > 0.0:
        raise ValueError("cycle_length must be positive")
    return 1.0 - result.ledger.d2 / result.cycle_length


def _advance_clock(
    inv: InventoryState,
    ledger: CostLedger,
    t_from: float,
    t_to: float,
    trace: Optional[List[TraceEvent]],
) -> None:
    """Accrue holding cost over [t_from, t_to] and receive due deliveries.

    On-hand stock is piecewise constant between deliveries, so segment-wise
    rectangles are exact.
    """
    t_cur = t_from
    for order in sorted(
        (o for o in inv.pipeline if t_from < o.delivery_at <= t_to),
        key=lambda o: o.delivery_at,
    ):
        accrue_holding(ledger, inv.on_hand, order.delivery_at - t_cur)
        t_cur = order.delivery_at
        receive_due(inv, t_cur)
        if trace is not None:
            trace.append(TraceEvent(t_cur, "delivery", {"on_hand": inv.on_hand}))
    accrue_holding(ledger, inv.on_hand, t_to - t_cur)


def _place_order(
    inv: InventoryState,
    ledger: CostLedger,
    supplier: Supplier,
    quantity: int,
    now: float,
    emergency: bool,
    trace: Optional[List[TraceEvent]],
) -> None:
    order = Order(
        quantity=quantity,
        placed_at=now,
        delivery_at=now + supplier.lead_time,
        supplier_id=supplier.id,
        emergency=emergency,
    )
    inv.pipeline.append(order)
    if supplier.kind == "main":
        ledger.n_oe += 1
    else:
        ledger.n_o += 1
    ledger.purchased += quantity
    if trace is not None:
        trace.append(
            TraceEvent(now, "order", {
                "supplier": supplier.id, "quantity": quantity,
                "delivery_at": order.delivery_at, "emergency": emergency,
                "total_stock": inv.total_stock,
            })
        )


def _emergency_procurement(
    config: ScenarioConfig,
    state: SystemState,
    inv: InventoryState,
    ledger: CostLedger,
    rng: RngStream,
    trace: Optional[List[TraceEvent]],
) -> None:
    """Corrective-maintenance shortage: order instantly (locals first, main as
    fallback) and stand down until on-hand covers the corrective need.

    The clock advances while the failed system waits; the path does not.
    """
    cms = config.requirements.cms
    attempts = 0
    while inv.on_hand < cms:
        supplier = select_supplier(config.suppliers, emergency=True, rng=rng)
        if supplier is not None:
            qty = emergency_order_quantity(inv, config.policy.S, cms)
            _place_order(inv, ledger, supplier, qty, state.t,
                         emergency=True, trace=trace)
            while inv.on_hand < cms and inv.pipeline:
                t_next = min(o.delivery_at for o in inv.pipeline)
                _advance_clock(inv, ledger, state.t, t_next, trace)
                state.t = t_next
        else:
            attempts += 1
            if attempts > config.emergency_retry_cap:
                raise SimulationError(
                    f"no supplier available after {attempts - 1} emergency retries"
                )
            t_retry = state.t + config.retry_interval
            _advance_clock(inv, ledger, state.t, t_retry, trace)
            state.t = t_retry


def run_cycle(config: ScenarioConfig, stream_id: int) -> ReplicationResult:
    """Simulate one regeneration cycle on RNG stream ``stream_id``."""
    rng = RngStream.from_seed(config.seed, stream_id)
    deg = config.degradation
    pol = config.policy
    req = config.requirements
    delta = deg.path_step

    state = SystemState(x=0.0, v=deg.nu0, k=0, t=0.0)
    inv = InventoryState(on_hand=pol.S, pipeline=[])
    ledger = CostLedger()
    trace: Optional[List[TraceEvent]] = [] if config.record_trace else None
    preventive_shortages = 0

    t_next, _shortfall = schedule_next_inspection(state, inv, pol, deg, req)
    for _ in range(config.max_inspections_per_cycle):
        # snap the inspection to the latent grid: down for residual-life times
        # (keeps the interval failure probability at or below Q), up when the
        # schedule deferred to a pipeline delivery that must have arrived
        deferred = any(abs(o.delivery_at - t_next) <= _GRID_EPS for o in inv.pipeline)
        dt = t_next - state.t
        if deferred:
            n_steps = max(1, math.ceil(dt / delta - _GRID_EPS))
        else:
            n_steps = max(1, math.floor(dt / delta + _GRID_EPS))
        t_insp = state.t + n_steps * delta

        _advance_clock(inv, ledger, state.t, t_insp, trace)
        times, levels = advance(state, t_insp - state.t, deg, rng)
        ledger.n_ins += 1
        if trace is not None:
            trace.append(TraceEvent(state.t, "inspection", {"x": state.x, "k": state.k}))

        action = classify_action(state.x, state.k, pol, deg.L)

        if action is ActionKind.CORRECTIVE:
            t_cross = first_passage(times, levels, deg.L)
            ledger.d1 = state.t - t_cross
            if inv.on_hand < req.cms:
                t_detect = state.t
                _emergency_procurement(config, state, inv, ledger, rng, trace)
                ledger.d2 = state.t - t_detect
            consume(inv, req.cms)
            ledger.n_c += 1
            state = apply_perfect(state, deg)
            if trace is not None:
                trace.append(TraceEvent(state.t, "corrective", {
                    "on_hand": inv.on_hand,
                    "pipeline_quantity": inv.pipeline_quantity,
                    "consumed": req.cms,
                }))
            break

        if action is ActionKind.PERFECT:
            if inv.on_hand >= req.pms:
                consume(inv, req.pms)
                state = apply_perfect(state, deg)
                ledger.n_p += 1
                if trace is not None:
                    trace.append(TraceEvent(state.t, "perfect", {
                        "on_hand": inv.on_hand, "consumed": req.pms,
                    }))
            else:
                # replacement impossible without a part: skip, order below
                preventive_shortages += 1
                if trace is not None:
                    trace.append(TraceEvent(state.t, "preventive_shortage", {"wanted": req.pms}))
        elif action is ActionKind.IMPERFECT:
            wants_part = bool(rng.uniform() < req.ipms_prob)
            consumed_part = False
            if wants_part:
                if inv.on_hand >= 1:
                    consume(inv, 1)
                    consumed_part = True
                else:
                    # gain is independent of replacement; perform without the part
                    preventive_shortages += 1
                    if trace is not None:
                        trace.append(TraceEvent(state.t, "preventive_shortage", {"wanted": 1}))
            x_before = state.x
            state, outcome = apply_imperfect(state, deg, rng)
            ledger.n_ip += 1
            ledger.imperfect_cost_sum += imperfect_cost(outcome.gain, x_before, config.costs)
            if trace is not None:
                trace.append(TraceEvent(state.t, "imperfect", {
                    "gain": outcome.gain, "eps": outcome.eps,
                    "consumed": consumed_part, "on_hand": inv.on_hand,
                }))

        # (T, S) ordering on the post-action level
        if should_order(state.x, pol.T_reorder):
            qty = order_up_to_quantity(inv, pol.S)
            if qty > 0:
                supplier = select_supplier(config.suppliers, emergency=False, rng=rng)
                if supplier is not None:
                    _place_order(inv, ledger, supplier, qty, state.t,
                                 emergency=False, trace=trace)

        t_next, _shortfall = schedule_next_inspection(state, inv, pol, deg, req)
    else:
        raise SimulationError(
            f"cycle did not complete within {config.max_inspections_per_cycle} inspections"
        )

    cycle_length = state.t
    result = ReplicationResult(
        stream_id=stream_id,
        cycle_length=cycle_length,
        total_cost=total_cost(ledger, config.costs),
        availability=1.0 - ledger.d2 / cycle_length,
        ledger=ledger,
        preventive_shortages=preventive_shortages,
        trace=trace,
    )
    return result


# ---------------------------------------------------------------------------
# Replication batches
# ---------------------------------------------------------------------------


@dataclass
class BatchStats:
    n: int
    cost_rate: float               # the configured estimator
    cost_rate_se: float
    rate_renewal_reward: float     # ratio of sums
    rate_mean_ratio: float         # mean of per-cycle ratios
    availability: float
    availability_se: float
    mean_cycle_length: float
    mean_cycle_cost: float
    breakdown: Dict[str, float]    # mean per-cycle cost by term
    results: List[ReplicationResult] = field(repr=False, default_factory=list)


def _run_batch(config: ScenarioConfig, stream_ids: Sequence[int]) -> List[ReplicationResult]:
    return [run_cycle(config, sid) for sid in stream_ids]


def _breakdown(results: Sequence[ReplicationResult], costs: CostParams) -> Dict[str, float]:
    n = len(results)
    mean = lambda f: sum(f(r.ledger) for r in results) / n
    return {
        "inspection": costs.c_ins * mean(lambda l: l.n_ins),
        "imperfect": mean(lambda l: l.imperfect_cost_sum),
        "perfect": costs.c_p0 * mean(lambda l: l.n_p),
        "corrective": costs.c_c * mean(lambda l: l.n_c),
        "malfunction": costs.c_d1 * mean(lambda l: l.d1),
        "downtime": costs.c_d2 * mean(lambda l: l.d2),
        "ordering": costs.c_o * mean(lambda l: l.n_o),
        "emergency_ordering": costs.c_oe * mean(lambda l: l.n_oe),
        "holding": costs.c_h * mean(lambda l: l.holding_integral),
        "purchase": costs.c_pur * mean(lambda l: l.purchased),
    }


def run_replications(config: ScenarioConfig, workers: int = 1) -> BatchStats:
    """Run streams 0..replications-1 and aggregate.

    Results are identical for any ``workers`` value: each replication owns
    its stream and the reduction is ordered by stream id.
    """
    n = config.replications
    ids = list(range(n))
    if workers <= 1 or n == 1:
        results = _run_batch(config, ids)
    else:
        chunk = max(1, math.ceil(n / (workers * 4)))
        batches = [ids[i:i + chunk] for i in range(0, n, chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_run_batch, [config] * len(batches), batches)
            results = [r for part in parts for r in part]
        results.sort(key=lambda r: r.stream_id)

    costs_arr = np.array([r.total_cost for r in results])
    lengths = np.array([r.cycle_length for r in results])
    avail = np.array([r.availability for r in results])

    rr_rate = float(costs_arr.sum() / lengths.sum())
    ratios = costs_arr / lengths
    mean_ratio = float(ratios.mean())

    # delta-method standard error for the ratio-of-sums estimator
    u = costs_arr - rr_rate * lengths
    rr_se = float(np.sqrt(u.var(ddof=1) / n) / lengths.mean()) if n > 1 else float("nan")
    mean_ratio_se = float(np.sqrt(ratios.var(ddof=1) / n)) if n > 1 else float("nan")
    avail_se = float(np.sqrt(avail.var(ddof=1) / n)) if n > 1 else float("nan")

    if config.per_cycle_rate:
        rate, rate_se = mean_ratio, mean_ratio_se
    else:
        rate, rate_se = rr_rate, rr_se

    return BatchStats(
        n=n,
        cost_rate=rate,
        cost_rate_se=rate_se,
        rate_renewal_reward=rr_rate,
        rate_mean_ratio=mean_ratio,
        availability=float(avail.mean()),
        availability_se=avail_se,
        mean_cycle_length=float(lengths.mean()),
        mean_cycle_cost=float(costs_arr.mean()),
        breakdown=_breakdown(results, config.costs),
        results=results,
    )
