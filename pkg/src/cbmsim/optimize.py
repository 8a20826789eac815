"""Search over the decision vector (M, K, T, S, Q) for the minimum cost rate
subject to the availability floor.

Every candidate point is evaluated with common random numbers (identical
stream seeds) by default, which keeps comparisons low-variance and the argmin
stable under uniform cost scaling.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field, replace
from typing import List, Sequence, Tuple

from .engine import ScenarioConfig, run_replications
from .errors import ConfigError, InfeasibleError
from .numerics import RngStream
from .policy import PolicyParams

__all__ = [
    "SearchGrid",
    "SearchBounds",
    "GridPointRecord",
    "OptimizationResult",
    "grid_search",
    "random_search",
]

logger = logging.getLogger(__name__)

# stream id reserved for drawing random-search candidates; replications use
# ids 0..N-1, so anything this large never collides
_SEARCH_STREAM_ID = 2**62


@dataclass(frozen=True)
class SearchGrid:
    m_values: Tuple[float, ...]
    k_values: Tuple[int, ...]
    t_values: Tuple[float, ...]
    s_values: Tuple[int, ...]
    q_values: Tuple[float, ...]

    def __post_init__(self):
        for name in ("m_values", "k_values", "t_values", "s_values", "q_values"):
            if not getattr(self, name):
                raise ConfigError(f"search grid axis {name} must be nonempty")

    def __len__(self) -> int:
        return (len(self.m_values) * len(self.k_values) * len(self.t_values)
                * len(self.s_values) * len(self.q_values))

    def points(self):
        return itertools.product(self.m_values, self.k_values, self.t_values,
                                 self.s_values, self.q_values)


@dataclass(frozen=True)
class SearchBounds:
    """Inclusive sampling ranges for random search; k and s are integers."""

    m: Tuple[float, float]
    k: Tuple[int, int]
    t: Tuple[float, float]
    s: Tuple[int, int]
    q: Tuple[float, float]

    def __post_init__(self):
        for name in ("m", "k", "t", "s", "q"):
            lo, hi = getattr(self, name)
            if not lo <= hi:
                raise ConfigError(f"search bound {name} needs lo <= hi, got ({lo}, {hi})")


@dataclass(frozen=True)
class GridPointRecord:
    params: PolicyParams
    cost_rate: float
    cost_rate_se: float
    availability: float
    availability_se: float
    feasible: bool


@dataclass
class OptimizationResult:
    best: PolicyParams
    best_cost_rate: float
    best_availability: float
    table: List[GridPointRecord] = field(repr=False, default_factory=list)


def _evaluate_points(
    candidates: Sequence[Tuple[float, int, float, int, float]],
    config: ScenarioConfig,
    workers: int,
    common_random_numbers: bool,
) -> List[GridPointRecord]:
    base_policy = config.policy
    records: List[GridPointRecord] = []
    for idx, (m, k, t, s, q) in enumerate(candidates):
        try:
            params = PolicyParams(M=m, K=k, T_reorder=t, S=s, Q=q, A_star=base_policy.A_star)
            point_config = replace(config, policy=params)
        except ConfigError as exc:
            logger.warning("skipping point (M=%s, K=%s, T=%s, S=%s, Q=%s): %s",
                           m, k, t, s, q, exc)
            continue
        if not common_random_numbers:
            point_config = replace(point_config, seed=point_config.seed + 1 + idx)
        stats = run_replications(point_config, workers=workers)
        records.append(GridPointRecord(
            params=params,
            cost_rate=stats.cost_rate,
            cost_rate_se=stats.cost_rate_se,
            availability=stats.availability,
            availability_se=stats.availability_se,
            feasible=stats.availability >= base_policy.A_star,
        ))
    return records


def _pick_best(records: List[GridPointRecord]) -> OptimizationResult:
    feasible = [r for r in records if r.feasible]
    if not feasible:
        raise InfeasibleError(
            f"no feasible point among {len(records)} evaluated candidates", table=records
        )
    # ties broken by smaller S, then K, then lexicographic (M, T, Q)
    best = min(feasible, key=lambda r: (
        r.cost_rate, r.params.S, r.params.K, r.params.M, r.params.T_reorder, r.params.Q,
    ))
    return OptimizationResult(
        best=best.params,
        best_cost_rate=best.cost_rate,
        best_availability=best.availability,
        table=records,
    )


def grid_search(
    grid: SearchGrid,
    config: ScenarioConfig,
    workers: int = 1,
    common_random_numbers: bool = True,
) -> OptimizationResult:
    """Exhaustive evaluation of the grid; returns the feasible minimizer."""
    records = _evaluate_points(list(grid.points()), config, workers, common_random_numbers)
    return _pick_best(records)


def random_search(
    bounds: SearchBounds,
    budget: int,
    config: ScenarioConfig,
    workers: int = 1,
    common_random_numbers: bool = True,
) -> OptimizationResult:
    """Uniform sampling of ``budget`` points within ``bounds``; evaluation and
    selection rules are identical to grid_search."""
    if budget < 1:
        raise ConfigError(f"budget must be >= 1, got {budget}")
    rng = RngStream.from_seed(config.seed, _SEARCH_STREAM_ID)
    candidates = []
    for _ in range(budget):
        m = bounds.m[0] + rng.uniform() * (bounds.m[1] - bounds.m[0])
        k = int(rng.gen.integers(bounds.k[0], bounds.k[1] + 1))
        t = bounds.t[0] + rng.uniform() * (bounds.t[1] - bounds.t[0])
        s = int(rng.gen.integers(bounds.s[0], bounds.s[1] + 1))
        q = bounds.q[0] + rng.uniform() * (bounds.q[1] - bounds.q[0])
        candidates.append((m, k, t, s, q))
    records = _evaluate_points(candidates, config, workers, common_random_numbers)
    return _pick_best(records)
