"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A scenario configuration violates a structural or ordering constraint."""


class SolverError(RuntimeError):
    """Root bracketing or bisection failed."""


class ShortageError(RuntimeError):
    """On-hand stock cannot cover a requested consumption."""


class SimulationError(RuntimeError):
    """A replication could not be completed (e.g. emergency retry cap hit)."""


class InfeasibleError(RuntimeError):
    """No evaluated policy point satisfies the availability floor.

    Carries the full evaluation table in ``table`` so callers can still
    inspect or persist every evaluated point.
    """

    def __init__(self, message, table):
        super().__init__(message)
        self.table = table
