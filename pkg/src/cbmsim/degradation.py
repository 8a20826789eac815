"""Latent deterioration path and the state effects of maintenance actions.

The deterioration level evolves as a gamma process simulated exactly on a
fixed grid of step ``path_step``: increments over disjoint steps are
independent, so the grid values have the exact joint law. First passage of
the failure threshold is resolved to within one grid step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .numerics import GammaSpec, RngStream, TruncNormSpec, sample_exponential, sample_gamma, sample_truncated_normal

__all__ = [
    "DegradationParams",
    "SystemState",
    "ImperfectOutcome",
    "advance",
    "first_passage",
    "apply_perfect",
    "apply_imperfect",
]


@dataclass(frozen=True)
class DegradationParams:
    """Gamma-process parameters plus failure threshold and path grid step.

    An increment over one grid step has shape v*beta*path_step and rate beta,
    so its mean is v*path_step and its variance v*path_step/beta.
    """

    alpha0: float      # initial shape per unit time; nu0 = alpha0 / beta
    beta: float        # gamma rate
    L: float           # failure threshold
    gamma_rate: float  # rate of the exponential speed-acceleration draws
    path_step: float   # latent grid step delta

    def __post_init__(self):
        for name in ("alpha0", "beta", "L", "gamma_rate", "path_step"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be strictly positive, got {getattr(self, name)}")
        # the grid must resolve a life cycle finely enough for first passage
        if self.path_step > self.L / (20.0 * self.nu0):
            raise ValueError(
                f"path_step={self.path_step} too coarse: must be <= L/(20*nu0) "
                f"= {self.L / (20.0 * self.nu0)}"
            )

    @property
    def nu0(self) -> float:
        return self.alpha0 / self.beta


@dataclass
class SystemState:
    x: float  # deterioration level
    v: float  # current mean deterioration speed
    k: int    # successive imperfect actions since last renewal
    t: float  # clock


@dataclass(frozen=True)
class ImperfectOutcome:
    gain: float  # degradation removed, strictly inside (0, x_before)
    eps: float   # permanent speed acceleration


def advance(
    state: SystemState,
    dt: float,
    params: DegradationParams,
    rng: RngStream,
) -> Tuple[np.ndarray, np.ndarray]:
    """Advance the latent path by dt (rounded to whole grid steps).

    Returns (times, levels) including the starting point; mutates ``state``
    to the final grid point.
    """
    if dt < 0.0:
        raise ValueError(f"dt must be non-negative, got {dt}")
    n = int(round(dt / params.path_step))
    if n == 0:
        return np.array([state.t]), np.array([state.x])
    shape = state.v * params.beta * params.path_step
    incs = sample_gamma(GammaSpec(shape, params.beta), rng, size=n)
    levels = np.empty(n + 1)
    levels[0] = state.x
    np.cumsum(incs, out=levels[1:])
    levels[1:] += state.x
    times = state.t + params.path_step * np.arange(n + 1)
    state.x = float(levels[-1])
    state.t = float(times[-1])
    return times, levels


def first_passage(times: np.ndarray, levels: np.ndarray, L: float) -> Optional[float]:
    """Earliest grid time with level >= L, or None if the path stays below."""
    if len(times) == 0:
        raise ValueError("first_passage needs a nonempty path")
    idx = np.nonzero(levels >= L)[0]
    if idx.size == 0:
        return None
    return float(times[idx[0]])


def apply_perfect(state: SystemState, params: DegradationParams) -> SystemState:
    """As-good-as-new renewal: level, speed, and imperfect count all reset.

    Maintenance duration is negligible, so the clock does not move.
    """
    return SystemState(x=0.0, v=params.nu0, k=0, t=state.t)


def apply_imperfect(
    state: SystemState,
    params: DegradationParams,
    rng: RngStream,
) -> Tuple[SystemState, ImperfectOutcome]:
    """Imperfect preventive action: random partial gain plus a permanent
    speed acceleration.

    The gain is truncated-normal on (0, x) with mu=x/2 and sigma=x/6, i.e.
    the symmetric three-sigma window; the acceleration is exponential.
    """
    if not state.x > 0.0:
        raise ValueError("imperfect maintenance needs a strictly positive level")
    spec = TruncNormSpec(mu=state.x / 2.0, sigma=state.x / 6.0, a=0.0, b=state.x)
    gain = sample_truncated_normal(spec, rng)
    # keep the gain strictly interior so the post-action level stays positive
    gain = min(max(gain, state.x * 1e-12), state.x * (1.0 - 1e-12))
    eps = sample_exponential(params.gamma_rate, rng)
    new = SystemState(x=state.x - gain, v=state.v + eps, k=state.k + 1, t=state.t)
    return new, ImperfectOutcome(gain=gain, eps=eps)
