"""Distribution functions, samplers, and a monotone root solver.

Everything downstream (degradation paths, inspection scheduling, supplier
draws) is built on the primitives here. All sampling goes through
:class:`RngStream` so a replication is fully determined by (seed, stream_id).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numba import njit

from .errors import SolverError

__all__ = [
    "GammaSpec",
    "TruncNormSpec",
    "RngStream",
    "gamma_pdf",
    "gamma_cdf",
    "sample_gamma",
    "sample_exponential",
    "sample_truncated_normal",
    "normal_cdf",
    "normal_quantile",
    "solve_monotone_increasing",
]


@dataclass(frozen=True)
class GammaSpec:
    """Gamma distribution with density rate^shape x^(shape-1) e^(-rate x) / Γ(shape).

    ``rate`` multiplies x in the exponent (the pdf as printed is authoritative,
    even though some sources would call the same symbol a scale).
    """

    shape: float
    rate: float

    def __post_init__(self):
        if not (self.shape > 0.0 and math.isfinite(self.shape)):
            raise ValueError(f"gamma shape must be positive and finite, got {self.shape}")
        if not (self.rate > 0.0 and math.isfinite(self.rate)):
            raise ValueError(f"gamma rate must be positive and finite, got {self.rate}")

    @property
    def mean(self) -> float:
        return self.shape / self.rate

    @property
    def variance(self) -> float:
        return self.shape / self.rate**2


@dataclass(frozen=True)
class TruncNormSpec:
    """Normal(mu, sigma) renormalized to the interval [a, b]."""

    mu: float
    sigma: float
    a: float
    b: float

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not self.a < self.b:
            raise ValueError(f"truncation bounds need a < b, got [{self.a}, {self.b}]")


@dataclass
class RngStream:
    """Deterministic random stream: same (seed, stream_id) -> same draws.

    Backed by the counter-based Philox generator; distinct stream_ids give
    statistically independent streams, so replications can run in any order
    and on any worker without affecting results.
    """

    gen: np.random.Generator
    stream_id: int

    @classmethod
    def from_seed(cls, seed: int, stream_id: int) -> "RngStream":
        if stream_id < 0:
            raise ValueError("stream_id must be non-negative")
        ss = np.random.SeedSequence(entropy=seed, spawn_key=(stream_id,))
        return cls(gen=np.random.Generator(np.random.Philox(ss)), stream_id=stream_id)

    def uniform(self, size=None):
        return self.gen.random(size)

    def standard_normal(self, size=None):
        return self.gen.standard_normal(size)


# ---------------------------------------------------------------------------
# Regularized incomplete gamma
# ---------------------------------------------------------------------------

_MAX_ITER = 200_000


@njit(cache=True)
def _reg_lower_gamma(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x).

    Series expansion for x < a + 1, Gauss continued fraction (modified Lentz)
    otherwise; the split keeps both branches numerically stable.
    """
    if x <= 0.0:
        return 0.0
    log_prefix = a * math.log(x) - x - math.lgamma(a)
    if x < a + 1.0:
        ap = a
        term = 1.0 / a
        total = term
        for _ in range(_MAX_ITER):
            ap += 1.0
            term *= x / ap
            total += term
            if abs(term) < abs(total) * 1e-16:
                break
        p = total * math.exp(log_prefix)
        return p if p < 1.0 else 1.0
    # continued fraction for the upper tail Q(a, x)
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    q = math.exp(log_prefix) * h
    p = 1.0 - q
    if p < 0.0:
        return 0.0
    return p if p < 1.0 else 1.0


@njit(cache=True)
def _invert_fail_prob(bgap: float, vbeta: float, target: float, hi_init: float,
                      tol: float, max_doublings: int, max_bisections: int) -> float:
    """Solve 1 - P(vbeta*dt, bgap) = target for dt by bracket doubling plus
    bisection; the compiled twin of solve_monotone_increasing for this curve.

    Returns -1.0 when the bracket is not found and -2.0 when bisection stalls
    above tolerance; the caller converts those to solver errors.
    """
    if target <= tol:
        return 0.0  # dt = 0 already satisfies the tolerance
    hi = hi_init
    bracketed = False
    for _ in range(max_doublings):
        if 1.0 - _reg_lower_gamma(vbeta * hi, bgap) >= target:
            bracketed = True
            break
        hi = 2.0 * hi
    if not bracketed:
        return -1.0
    a, b = 0.0, hi
    for _ in range(max_bisections):
        mid = 0.5 * (a + b)
        if not (a < mid < b):
            break  # interval collapsed to machine precision
        fm = 1.0 - _reg_lower_gamma(vbeta * mid, bgap)
        if abs(fm - target) <= tol:
            return mid
        if fm < target:
            a = mid
        else:
            b = mid
    return -2.0


def gamma_pdf(x: float, spec: GammaSpec) -> float:
    """Gamma density at x; zero on the negative half-line."""
    if not math.isfinite(x):
        raise ValueError(f"gamma_pdf needs finite x, got {x}")
    if x < 0.0:
        return 0.0
    if x == 0.0:
        if spec.shape < 1.0:
            return math.inf
        if spec.shape == 1.0:
            return spec.rate
        return 0.0
    log_pdf = (
        spec.shape * math.log(spec.rate)
        + (spec.shape - 1.0) * math.log(x)
        - spec.rate * x
        - math.lgamma(spec.shape)
    )
    return math.exp(log_pdf)


def gamma_cdf(x: float, spec: GammaSpec) -> float:
    """P(X <= x) for X ~ Gamma(spec); regularized lower incomplete gamma."""
    if not math.isfinite(x):
        raise ValueError(f"gamma_cdf needs finite x, got {x}")
    if x <= 0.0:
        return 0.0
    return _reg_lower_gamma(spec.shape, spec.rate * x)


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------


def _gamma_shape_ge1(gen: np.random.Generator, shape: float, n: int) -> np.ndarray:
    """Marsaglia-Tsang squeeze/rejection sampler, vectorized, shape >= 1."""
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(n)
    todo = np.arange(n)
    while todo.size:
        z = gen.standard_normal(todo.size)
        v = (1.0 + c * z) ** 3
        u = gen.random(todo.size)
        pos = v > 0.0
        logv = np.log(np.where(pos, v, 1.0))
        accept = pos & (np.log(u) < 0.5 * z * z + d - d * v + d * logv)
        out[todo[accept]] = d * v[accept]
        todo = todo[~accept]
    return out


def sample_gamma(spec: GammaSpec, rng: RngStream, size: Optional[int] = None):
    """Draw from Gamma(spec); shape < 1 handled by the boosting identity
    X(a) = X(a+1) * U^(1/a)."""
    n = 1 if size is None else int(size)
    if spec.shape >= 1.0:
        raw = _gamma_shape_ge1(rng.gen, spec.shape, n)
    else:
        raw = _gamma_shape_ge1(rng.gen, spec.shape + 1.0, n)
        u = rng.gen.random(n)
        # guard u=0: nextafter keeps the draw finite without biasing anything
        raw = raw * np.maximum(u, np.nextafter(0.0, 1.0)) ** (1.0 / spec.shape)
    raw = raw / spec.rate
    return float(raw[0]) if size is None else raw


def sample_exponential(rate_gamma: float, rng: RngStream, size: Optional[int] = None):
    """Draw from density rate_gamma * e^(-rate_gamma x) on x >= 0."""
    if not rate_gamma > 0.0:
        raise ValueError(f"exponential rate must be positive, got {rate_gamma}")
    u = rng.gen.random(size)
    return -np.log1p(-u) / rate_gamma if size is not None else float(-math.log1p(-u) / rate_gamma)


def normal_cdf(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


# Acklam's rational approximation for the standard normal quantile;
# relative error below 1.15e-9 over the whole open unit interval.
_ACK_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
          1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_ACK_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
          6.680131188771972e+01, -1.328068155288572e+01)
_ACK_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
          -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_ACK_D = (7.784695709041462e-03, 3.224671290700398e-01,
          2.445134137142996e+00, 3.754408661907416e+00)


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF (Acklam approximation)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile argument must be in (0,1), got {p}")
    a, b, c, d = _ACK_A, _ACK_B, _ACK_C, _ACK_D
    p_low, p_high = 0.02425, 1.0 - 0.02425
    if p < p_low:
        q = math.sqrt(-2.0 * math.log(p))
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    if p > p_high:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
                ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    q = p - 0.5
    r = q * q
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q / \
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0)


def sample_truncated_normal(spec: TruncNormSpec, rng: RngStream, size: Optional[int] = None):
    """Inverse-CDF sampling on the renormalized interval [a, b]."""
    lo = normal_cdf((spec.a - spec.mu) / spec.sigma)
    hi = normal_cdf((spec.b - spec.mu) / spec.sigma)
    u = rng.gen.random(size)
    p = lo + u * (hi - lo)
    if size is None:
        z = spec.mu + spec.sigma * normal_quantile(min(max(float(p), 1e-16), 1.0 - 1e-16))
        return min(max(z, spec.a), spec.b)
    p = np.clip(p, 1e-16, 1.0 - 1e-16)
    z = spec.mu + spec.sigma * np.array([normal_quantile(pi) for pi in p])
    return np.clip(z, spec.a, spec.b)


# ---------------------------------------------------------------------------
# Root solver
# ---------------------------------------------------------------------------


def solve_monotone_increasing(
    f: Callable[[float], float],
    target: float,
    lo: float,
    hi_init: float,
    tol: float,
    max_doublings: int = 60,
    max_bisections: int = 500,
) -> float:
    """Solve f(x) = target for monotone nondecreasing f with f(lo) <= target.

    Brackets the root by doubling the upper end from ``hi_init``, then
    bisects until |f(x) - target| <= tol.
    """
    if not hi_init > lo:
        raise ValueError("hi_init must exceed lo")
    f_lo = f(lo)
    if f_lo > target + tol:
        raise SolverError(f"f(lo)={f_lo} exceeds target={target}; precondition violated")
    if abs(f_lo - target) <= tol:
        return lo
    hi = hi_init
    for _ in range(max_doublings):
        if f(hi) >= target:
            break
        hi = lo + 2.0 * (hi - lo)
    else:
        raise SolverError(
            f"failed to bracket target={target} within {max_doublings} doublings "
            f"(last upper end {hi})"
        )
    a, b = lo, hi
    for _ in range(max_bisections):
        mid = 0.5 * (a + b)
        if not a < mid < b:
            break  # interval collapsed to machine precision
        fm = f(mid)
        if abs(fm - target) <= tol:
            return mid
        if fm < target:
            a = mid
        else:
            b = mid
    raise SolverError(f"bisection did not reach tolerance {tol} for target {target}")
