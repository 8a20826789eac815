"""Action classification and joint inspection-time determination.

The next inspection is scheduled in two steps: first the residual-life delay
that keeps the failure probability within the interval at exactly Q, then a
deferral to the earliest time at which projected stock covers the spare
requirement of the action expected at that inspection.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Tuple

from .degradation import DegradationParams, SystemState
from .errors import ConfigError, SolverError
from .inventory import InventoryState, SpareRequirements, projected_on_hand
from .numerics import _invert_fail_prob

__all__ = [
    "PolicyParams",
    "ActionKind",
    "classify_action",
    "rul_delay",
    "expected_preventive_requirement",
    "schedule_next_inspection",
]

RUL_PROB_TOL = 1e-9


@dataclass(frozen=True)
class PolicyParams:
    """Decision vector (M, K, T, S, Q) plus the availability floor."""

    M: float          # preventive maintenance threshold
    K: int            # max successive imperfect actions
    T_reorder: float  # degradation reorder level
    S: int            # maximum spare inventory level
    Q: float          # failure probability allowed between inspections
    A_star: float     # availability floor

    def __post_init__(self):
        if not self.M > 0.0:
            raise ConfigError(f"M must be strictly positive, got {self.M}")
        if self.K < 0:
            raise ConfigError(f"K must be non-negative, got {self.K}")
        if not self.T_reorder > 0.0:
            raise ConfigError(f"T_reorder must be strictly positive, got {self.T_reorder}")
        if self.S < 1:
            raise ConfigError(f"S must be >= 1, got {self.S}")
        if not 0.0 < self.Q < 1.0:
            raise ConfigError(f"Q must be in (0,1), got {self.Q}")
        if not 0.0 <= self.A_star <= 1.0:
            raise ConfigError(f"A_star must be in [0,1], got {self.A_star}")


class ActionKind(enum.Enum):
    NO_ACTION = "no_action"
    IMPERFECT = "imperfect"
    PERFECT = "perfect"
    CORRECTIVE = "corrective"


def classify_action(x: float, k: int, policy: PolicyParams, L: float) -> ActionKind:
    """Hybrid rule: corrective at or above L; between M and L an imperfect
    action unless K successive ones already happened, then perfect."""
    if x < 0.0:
        raise ValueError(f"degradation level must be non-negative, got {x}")
    if x >= L:
        return ActionKind.CORRECTIVE
    if x >= policy.M:
        return ActionKind.IMPERFECT if k < policy.K else ActionKind.PERFECT
    return ActionKind.NO_ACTION


def rul_delay(x: float, v: float, Q: float, L: float, params: DegradationParams) -> float:
    """Delay dt such that P(X_{t+dt} >= L | X_t = x) = Q.

    The residual increment over dt is Gamma(shape=v*beta*dt, rate=beta), so
    the failure probability is 1 - F(L - x); it increases monotonically in dt
    and is solved by bracket-doubling bisection. The result is floored at the
    path grid step to rule out zero-length inspection loops.
    """
    if x >= L:
        raise ValueError(f"rul_delay needs x < L, got x={x}, L={L}")

    gap = L - x
    dt = _invert_fail_prob(params.beta * gap, v * params.beta, Q,
                           2.0 * gap / v, RUL_PROB_TOL, 60, 500)
    if dt == -1.0:
        raise SolverError(f"failed to bracket failure probability {Q} for gap {gap}")
    if dt == -2.0:
        raise SolverError(f"bisection did not reach tolerance {RUL_PROB_TOL} for Q={Q}")
    return max(dt, params.path_step)


def expected_preventive_requirement(k: int, policy: PolicyParams, req: SpareRequirements) -> int:
    """Parts to reserve for the action expected at the next inspection,
    assuming its level lands in the preventive band [M, L)."""
    if k < policy.K:
        return 1 if req.ipms_prob > 0.0 else 0
    return req.pms


def schedule_next_inspection(
    state: SystemState,
    inv: InventoryState,
    policy: PolicyParams,
    params: DegradationParams,
    req: SpareRequirements,
) -> Tuple[float, bool]:
    """Next inspection time and a shortfall flag.

    The residual-life candidate is deferred to the earliest pipeline delivery
    that covers the expected action's spare requirement. When no delivery can
    ever cover it, the candidate time is kept and the shortfall is flagged
    for the ordering logic.
    """
    t_candidate = state.t + rul_delay(state.x, state.v, policy.Q, params.L, params)
    needed = expected_preventive_requirement(state.k, policy, req)
    if needed == 0 or projected_on_hand(inv, t_candidate) >= needed:
        return t_candidate, False
    for order in sorted(inv.pipeline, key=lambda o: o.delivery_at):
        if order.delivery_at > t_candidate and projected_on_hand(inv, order.delivery_at) >= needed:
            return order.delivery_at, False
    return t_candidate, True
