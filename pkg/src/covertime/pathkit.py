"""Walks on path-shaped networks and planar Brownian motion.

Covers the discretised first Ray-Knight picture (local times of a path walk
against the squared modulus of a planar Brownian motion), walks on a path
conditioned on their exit side, and the disk-avoidance tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels as K
from .errors import BudgetExceeded, RejectionBudgetExceeded
from .network import ElectricalNetwork, build_network
from .rng import SeedLike, run_chunks
from .stats import Bound


@dataclass(frozen=True, eq=False)
class PathNetwork:
    """Path ``0 - 1 - ... - N`` with ``conductances[k] = c_{k,k+1}``."""

    conductances: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.conductances, dtype=float)
        if c.ndim != 1 or len(c) < 1 or not np.all(c > 0):
            raise ValueError("a path needs at least one edge and positive conductances")
        c.setflags(write=False)
        object.__setattr__(self, "conductances", c)

    @property
    def N(self) -> int:
        return len(self.conductances)

    @cached_property
    def positions(self) -> np.ndarray:
        """``a_k = sum_{i<k} 1/c_{i,i+1}``, the resistance from 0 to ``k``."""
        return np.concatenate([[0.0], np.cumsum(1.0 / self.conductances)])

    @cached_property
    def vertex_conductance(self) -> np.ndarray:
        c = np.zeros(self.N + 1)
        c[:-1] += self.conductances
        c[1:] += self.conductances
        return c

    def to_network(self, base: int = 0) -> ElectricalNetwork:
        return build_network([(str(k), str(k + 1), c) for k, c in enumerate(self.conductances)], str(base))


def unit_path(N: int) -> PathNetwork:
    return PathNetwork(np.ones(N))


def conditioned_conductances(N: int, r: float) -> PathNetwork:
    """Path on ``0..N`` whose walk is the unit path ``0..N+1`` (last edge ``r``)
    started at ``N`` and conditioned to leave through 0."""
    if int(N) != N or N < 1:
        raise ValueError("N must be a positive integer")
    if not r > 0:
        raise ValueError("r must be positive")
    q = 1.0 / r
    k = np.arange(N, dtype=float)
    return PathNetwork((N - k - 1 + q) * (N - k + q) / (q * (1 + q)))


def conditioned_positions(N: int, r: float) -> np.ndarray:
    """Closed form of the cumulative positions of :func:`conditioned_conductances`."""
    q = 1.0 / r
    k = np.arange(N + 1, dtype=float)
    return q * (1 + q) * (1.0 / (N - k + q) - 1.0 / (N + q))


def excursion_local_time_mean(r: float, s: float) -> float:
    """Mean local time at a point of a walk/Brownian motion stopped at distance
    ``r`` below or ``s`` above it: ``rs / (r + s)``.  On a path this is the mean
    normalized holding time ``1 / (c_{k-1,k} + c_{k,k+1})`` of one sojourn."""
    return r * s / (r + s)


@dataclass(frozen=True)
class SquaredRadiusLaw:
    """Law of ``|W_a|^2`` for planar Brownian motion: exponential with mean ``2a``.

    ``a == 0`` is the point mass at 0.
    """

    position: float

    @property
    def mean(self) -> float:
        return 2.0 * self.position

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.position == 0:
            return (x >= 0).astype(float)
        return np.where(x > 0, -np.expm1(-np.maximum(x, 0.0) / self.mean), 0.0)

    def frozen(self):
        import scipy.stats

        return scipy.stats.expon(scale=self.mean)


def first_rk_marginal(a: float) -> SquaredRadiusLaw:
    if a < 0:
        raise ValueError("position must be non-negative")
    return SquaredRadiusLaw(float(a))


def disk_avoidance_bound(epsilon: float, lam: float) -> Bound:
    """``2/log(1/eps) + (3/eps) exp(-log(1/lam) / log(1/eps))`` for
    ``P(inf_{eps<=t<=1} |W_t|^2 < lam)``."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    le = math.log(1.0 / epsilon)
    ll = math.inf if lam == 0 else math.log(1.0 / lam)
    return Bound(2.0 / le + (3.0 / epsilon) * math.exp(-ll / le))


# ----------------------------------------------------------------------
# path walks


@dataclass
class PathWalkSample:
    lengths: np.ndarray
    up: np.ndarray
    down: np.ndarray

    def up_fraction(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-vertex fraction of moves that went up, with binomial SE."""
        tot = self.up + self.down
        with np.errstate(invalid="ignore", divide="ignore"):
            p = self.up / tot
            se = np.sqrt(p * (1 - p) / tot)
        return p, se

    def up_down_ratio(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-vertex up/down ratio ``p/(1-p)`` with a delta-method SE."""
        p, se = self.up_fraction()
        with np.errstate(invalid="ignore", divide="ignore"):
            return p / (1 - p), se / (1 - p) ** 2


def walk_to_zero(path: PathNetwork, n_trials: int, seed: SeedLike, *, max_steps: int = 10**8) -> PathWalkSample:
    """Discrete walks on ``path`` from ``N`` until they reach 0."""
    return _path_walks(path, path.N, 0, -1, n_trials, seed, max_steps)


def _path_walks(path, start, low, high, n_trials, seed, max_steps):
    def chunk(count, rng):
        ln = np.zeros(count, dtype=np.int64)
        ex = np.zeros(count, dtype=np.int64)
        up = np.zeros(path.N + 1, dtype=np.int64)
        dn = np.zeros(path.N + 1, dtype=np.int64)
        status, _ = K.path_walk_batch(path.conductances, start, low, high, max_steps, rng, ln, ex, up, dn)
        if status == K.BUDGET:
            raise BudgetExceeded(f"path walk exceeded {max_steps} steps")
        return ln, up, dn

    parts = run_chunks(chunk, n_trials, seed)
    return PathWalkSample(np.concatenate([p[0] for p in parts]), sum(p[1] for p in parts), sum(p[2] for p in parts))


def conditioned_walks(
    N: int, r: float, n_trials: int, seed: SeedLike, *, rejection_budget: int = 100_000, max_steps: int = 10**8
) -> PathWalkSample:
    """Walks on the unit path ``0..N+1`` (last edge ``r``) from ``N``, kept only if they exit at 0."""
    path = PathNetwork(np.r_[np.ones(N), r])

    def chunk(count, rng):
        ln = np.zeros(count, dtype=np.int64)
        up = np.zeros(N + 2, dtype=np.int64)
        dn = np.zeros(N + 2, dtype=np.int64)
        status, _ = K.conditioned_path_batch(path.conductances, N, max_steps, rejection_budget, rng, ln, up, dn)
        if status == K.BUDGET:
            raise BudgetExceeded(f"path walk exceeded {max_steps} steps")
        if status == K.REJECTED:
            raise RejectionBudgetExceeded(f"no walk exited at 0 within {rejection_budget} attempts")
        return ln, up[: N + 1], dn[: N + 1]

    parts = run_chunks(chunk, n_trials, seed)
    return PathWalkSample(np.concatenate([p[0] for p in parts]), sum(p[1] for p in parts), sum(p[2] for p in parts))


# ----------------------------------------------------------------------
# planar Brownian motion


def geometric_time_grid(epsilon: float, steps: int, t_end: float = 1.0) -> np.ndarray:
    """``steps + 1`` times from ``epsilon`` to ``t_end``, geometrically spaced."""
    if not 0 < epsilon < t_end:
        raise ValueError("need 0 < epsilon < t_end")
    g = np.geomspace(epsilon, t_end, steps + 1)
    g[0], g[-1] = epsilon, t_end
    return g


class PlanarBmSampler:
    """Standard planar Brownian motion observed on a fixed time grid.

    Positions at the first grid time are drawn exactly; later points add
    independent Gaussian increments per coordinate.
    """

    def __init__(self, times, rng: np.random.Generator):
        times = np.asarray(times, dtype=float)
        if times.ndim != 1 or len(times) < 2 or times[0] <= 0 or np.any(np.diff(times) <= 0):
            raise ValueError("times must be positive and strictly increasing")
        self.times = times
        self.rng = rng

    def sample_path(self) -> np.ndarray:
        """Array ``(len(times), 2)`` of positions."""
        dt = np.diff(np.r_[0.0, self.times])
        steps = self.rng.standard_normal((len(self.times), 2)) * np.sqrt(dt)[:, None]
        return np.cumsum(steps, axis=0)

    def min_squared_radius(self, n_paths: int = 1, bridge_points: int = 0) -> np.ndarray:
        out = np.zeros(n_paths)
        K.planar_min_batch(self.times, int(bridge_points), self.rng, out)
        return out


def min_squared_radius_on_path(path: np.ndarray, stride: int = 1) -> float:
    """Grid minimum of ``|W|^2`` using every ``stride``-th point (the last point always included)."""
    idx = np.r_[np.arange(0, len(path), stride), len(path) - 1]
    return float(np.min(np.sum(path[idx] ** 2, axis=1)))


def simulate_min_squared_radius(
    epsilon: float,
    rng: np.random.Generator,
    *,
    grid_steps: int = 10_000,
    n_paths: int = 1,
    t_end: float = 1.0,
    bridge_points: int = 0,
) -> np.ndarray:
    """Discretised ``inf_{epsilon <= t <= t_end} |W_t|^2`` for ``n_paths`` independent paths.

    Grid minima overestimate the true infimum; ``bridge_points`` adds that
    many bridge samples inside each step.
    """
    if grid_steps < 1000:
        raise ValueError("grid_steps must be at least 1000")
    return PlanarBmSampler(geometric_time_grid(epsilon, grid_steps, t_end), rng).min_squared_radius(n_paths, bridge_points)


def min_squared_radius_samples(
    epsilon: float, n_paths: int, seed: SeedLike, *, grid_steps: int = 10_000, t_end: float = 1.0,
    bridge_points: int = 0, workers: int = 1,
) -> np.ndarray:
    parts = run_chunks(
        lambda count, rng: simulate_min_squared_radius(epsilon, rng, grid_steps=grid_steps, n_paths=count,
                                                       t_end=t_end, bridge_points=bridge_points),
        n_paths, seed, workers=workers,
    )
    return np.concatenate(parts) if parts else np.zeros(0)
