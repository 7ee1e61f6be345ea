"""The wall-attracted walk on {0, 1, 2, ...}.

From y >= 1 the walk steps up with probability y/(2y+d) and down with
(y+d)/(2y+d); from 0 it always steps to 1. Exact laws come from forward
evolution of the probability vector, whose support after n steps from x
is finite, so nothing is truncated.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .specfun import log_gamma, log_gamma_ratio

__all__ = [
    "DP_CAP",
    "Distribution",
    "SimulationResult",
    "StationaryMeasure",
    "WalkParams",
    "drift",
    "evolve",
    "expected_position",
    "mean_trajectory",
    "simulate",
    "stationary",
    "step_probs",
    "trajectory",
]

DP_CAP = 20_000
MC_BLOCK = 1 << 16


@dataclass(frozen=True)
class WalkParams:
    delta: float

    def __post_init__(self):
        if not math.isfinite(self.delta):
            raise ValueError("delta must be finite")

    @property
    def regime(self) -> str:
        if 1.0 < self.delta < 2.0:
            return "subcritical"
        if self.delta > 2.0:
            return "supercritical"
        if self.delta in (1.0, 2.0):
            return "boundary"
        return "other"

    def require_normalizable(self):
        if not self.delta > 1.0:
            raise ValueError(f"stationary law needs delta > 1, got {self.delta}")

    def require_subcritical(self):
        if self.regime != "subcritical":
            raise ValueError(f"this operation needs delta in (1, 2), got {self.delta}")


def _params(p) -> WalkParams:
    return p if isinstance(p, WalkParams) else WalkParams(float(p))


def step_probs(params, y):
    """Return ``(p_up, p_down)`` at site(s) ``y``."""
    d = _params(params).delta
    ya = np.asarray(y, dtype=float)
    if np.any(ya < 0):
        raise ValueError("sites are nonnegative")
    denom = 2.0 * ya + d
    with np.errstate(divide="ignore", invalid="ignore"):
        up = np.where(ya > 0, ya / denom, 1.0)
        down = np.where(ya > 0, (ya + d) / denom, 0.0)
    if np.ndim(y) == 0:
        return float(up), float(down)
    return up, down


def drift(params, y):
    """Mean displacement ``-d / (2y + d)`` of one step from site y >= 1."""
    d = _params(params).delta
    ya = np.asarray(y, dtype=float)
    if np.any(ya < 1):
        raise ValueError("drift is defined for y >= 1")
    out = -d / (2.0 * ya + d)
    return float(out) if np.ndim(y) == 0 else out


@dataclass(frozen=True)
class StationaryMeasure:
    delta: float
    values: np.ndarray

    @property
    def pi0(self) -> float:
        return float(self.values[0])


def stationary(params, N: int) -> StationaryMeasure:
    """Normalised reversible measure on sites 0..N.

    ``pi_0 = (d-1)/(2d)`` and for y >= 1
    ``pi_y = pi_0 (2y+d) Gamma(d+1) Gamma(y) / Gamma(y+d+1)``.
    """
    p = _params(params)
    p.require_normalizable()
    d = p.delta
    pi0 = (d - 1.0) / (2.0 * d)
    y = np.arange(1, N + 1, dtype=float)
    vals = np.empty(N + 1)
    vals[0] = pi0
    if N >= 1:
        log_ratio = log_gamma(d + 1.0) - np.asarray(log_gamma_ratio(y, d + 1.0))
        vals[1:] = pi0 * (2.0 * y + d) * np.exp(log_ratio)
    return StationaryMeasure(d, vals)


@dataclass(frozen=True)
class Distribution:
    """Law of X_n under P_start, stored over sites 0..start+n."""

    start: int
    n: int
    probs: np.ndarray

    @property
    def parity(self) -> str:
        return "even" if (self.start + self.n) % 2 == 0 else "odd"

    def mean(self) -> float:
        return float(np.dot(np.arange(self.probs.size), self.probs))

    def __getitem__(self, y):
        return float(self.probs[y]) if 0 <= y < self.probs.size else 0.0


def _check_dp(start, n, cap):
    if start < 0 or n < 0:
        raise ValueError("start and n must be nonnegative")
    if n > cap:
        raise MemoryError(f"n = {n} exceeds the DP cap {cap}; raise cap explicitly")


def trajectory(params, start: int, n: int, cap: int = DP_CAP):
    """Yield ``(k, probs)`` for k = 0..n; ``probs`` is reused between steps."""
    d = _params(params).delta
    _check_dp(start, n, cap)
    size = start + n + 2
    up, down = step_probs(d, np.arange(size))
    cur = np.zeros(size)
    nxt = np.zeros(size)
    cur[start] = 1.0
    hi = start + 1
    yield 0, cur[: start + 1]
    for k in range(1, n + 1):
        # only 0..hi can be occupied after this step
        nxt[: hi + 1] = 0.0
        nxt[1 : hi + 1] += cur[:hi] * up[:hi]
        nxt[: hi - 1] += cur[1:hi] * down[1:hi]
        cur, nxt = nxt, cur
        hi += 1
        yield k, cur[: start + k + 1]


def evolve(params, start: int, n: int, cap: int = DP_CAP) -> Distribution:
    """Exact law of X_n started from ``start``."""
    probs = None
    for _, probs in trajectory(params, start, n, cap):
        pass
    return Distribution(start, n, probs.copy())


def mean_trajectory(params, start: int, n: int, cap: int = DP_CAP) -> np.ndarray:
    """``E_start X_k`` for k = 0..n from a single forward pass."""
    out = np.empty(n + 1)
    sites = np.arange(start + n + 1, dtype=float)
    for k, probs in trajectory(params, start, n, cap):
        out[k] = np.dot(sites[: probs.size], probs)
    return out


def expected_position(params, start: int, n: int, cap: int = DP_CAP) -> float:
    return evolve(params, start, n, cap).mean()


@dataclass(frozen=True)
class SimulationResult:
    mean: np.ndarray
    stderr: np.ndarray
    paths: int
    seed: int


def _worker_count(workers):
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("WALLWALK_THREADS")
    return max(1, int(env)) if env else 1


def _run_block(delta, start, n, seed, block, size):
    # Block b owns the Philox stream keyed by seed and jumped b times; path
    # i of the block reads column i of each step's draw, so the uniform used
    # by (path, step) depends only on (seed, path index, step).
    rng = np.random.Generator(np.random.Philox(key=seed).jumped(block))
    x = np.full(size, start, dtype=np.int64)
    s1 = np.zeros(n + 1, dtype=np.int64)
    s2 = np.zeros(n + 1, dtype=np.int64)
    s1[0] = start * size
    s2[0] = start * start * size
    for k in range(1, n + 1):
        u = rng.random(MC_BLOCK)[:size]
        up = np.where(x > 0, x / (2.0 * x + delta), 1.0)
        x += np.where(u < up, 1, -1)
        s1[k] = x.sum()
        s2[k] = (x * x).sum()
    return s1, s2


def simulate(params, start: int, n: int, paths: int, seed: int, workers=None) -> SimulationResult:
    """Monte Carlo estimate of ``E_start X_k`` for k = 0..n.

    Paths are processed in fixed blocks with counter-based substreams and
    the per-step sums are integers, so the result is bit-identical for any
    number of worker threads.
    """
    d = _params(params).delta
    if paths < 1:
        raise ValueError("need at least one path")
    if start < 0 or n < 0:
        raise ValueError("start and n must be nonnegative")
    sizes = [min(MC_BLOCK, paths - b * MC_BLOCK) for b in range(-(-paths // MC_BLOCK))]
    jobs = [(d, start, n, seed, b, sz) for b, sz in enumerate(sizes)]
    nworkers = min(_worker_count(workers), len(jobs))
    if nworkers == 1:
        results = [_run_block(*job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            results = list(pool.map(lambda job: _run_block(*job), jobs))
    s1 = np.zeros(n + 1, dtype=np.int64)
    s2 = np.zeros(n + 1, dtype=np.int64)
    for a, b in results:
        s1 += a
        s2 += b
    mean = s1 / paths
    if paths > 1:
        var = (s2 - s1.astype(float) * s1 / paths) / (paths - 1)
        stderr = np.sqrt(np.maximum(var, 0.0) / paths)
    else:
        stderr = np.zeros(n + 1)
    return SimulationResult(mean, stderr, paths, seed)
