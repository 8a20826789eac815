"""Simulation-optimization of condition-based maintenance with
degradation-triggered spare ordering across a small supply chain."""

from .cost import CostLedger, CostParams, cost_rate, imperfect_cost, total_cost
from .degradation import DegradationParams, ImperfectOutcome, SystemState
from .engine import (
    BatchStats,
    ReplicationResult,
    ScenarioConfig,
    availability_of,
    run_cycle,
    run_replications,
)
from .errors import ConfigError, InfeasibleError, ShortageError, SimulationError, SolverError
from .inventory import InventoryState, Order, SpareRequirements
from .numerics import GammaSpec, RngStream, TruncNormSpec
from .optimize import OptimizationResult, SearchBounds, SearchGrid, grid_search, random_search
from .policy import ActionKind, PolicyParams
from .supply import Supplier, select_supplier, validate_chain

__version__ = "0.1.0"
