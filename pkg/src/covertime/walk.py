"""Continuous-time random walks: local times, inverse local time, cover and
hitting times, and projection of walks on a refinement."""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import _kernels as K
from .errors import BudgetExceeded, RejectionBudgetExceeded
from .network import ElectricalNetwork, Refinement, Vertex
from .rng import DEFAULT_CHUNK, SeedLike, run_chunks, substream

DEFAULT_MAX_JUMPS = 10**8


def default_max_jumps() -> int:
    env = os.environ.get("COVERTIME_MAX_JUMPS")
    return int(env) if env else DEFAULT_MAX_JUMPS


# ----------------------------------------------------------------------
# stopping rules


@dataclass(frozen=True)
class CoverAll:
    reason = "cover"


@dataclass(frozen=True)
class InverseLocalTime:
    """Stop when the base vertex has accumulated local time ``t``."""

    t: float
    reason = "inverse_local_time"

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError("inverse local time level must be positive")


@dataclass(frozen=True)
class HitSet:
    targets: tuple
    reason = "hit_target"

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        if not self.targets:
            raise ValueError("HitSet needs at least one target")


@dataclass(frozen=True)
class FixedJumpCount:
    n: int
    reason = "custom"

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("jump count must be non-negative")


WalkStopRule = Union[CoverAll, InverseLocalTime, HitSet, FixedJumpCount]


@dataclass(frozen=True)
class _RuleArgs:
    mode: int
    raw_target: float
    target_mask: np.ndarray
    n_fixed: int


def _rule_args(net: ElectricalNetwork, rule: WalkStopRule) -> _RuleArgs:
    mask = np.zeros(net.n, dtype=np.bool_)
    if isinstance(rule, CoverAll):
        return _RuleArgs(K.COVER, 0.0, mask, 0)
    if isinstance(rule, InverseLocalTime):
        return _RuleArgs(K.INVERSE_LT, rule.t * float(net.vertex_conductance[net.base]), mask, 0)
    if isinstance(rule, HitSet):
        for v in rule.targets:
            mask[net.idx(v)] = True
        return _RuleArgs(K.HIT, 0.0, mask, 0)
    if isinstance(rule, FixedJumpCount):
        return _RuleArgs(K.FIXED, 0.0, mask, int(rule.n))
    raise TypeError(f"unknown stopping rule {rule!r}")


# ----------------------------------------------------------------------
# single trajectories


@dataclass
class Trace:
    """Sojourns in order: ``vertices[i]`` was occupied for ``holding[i]``."""

    vertices: np.ndarray
    holding: np.ndarray

    @property
    def arrival_times(self) -> np.ndarray:
        return np.concatenate([[0.0], np.cumsum(self.holding)[:-1]])


@dataclass
class LocalTimeField:
    local_time: np.ndarray
    visits: np.ndarray
    first_visit: np.ndarray
    stop_time: float
    stop_reason: str
    n_jumps: int
    final_vertex: int
    trace: Optional[Trace] = None

    @property
    def cover_time(self) -> float:
        """Largest first-visit time (infinite if some vertex was never visited)."""
        return float(self.first_visit.max())


def simulate_ctrw(
    net: ElectricalNetwork,
    start: Vertex,
    rule: WalkStopRule,
    rng: np.random.Generator,
    *,
    max_jumps: int | None = None,
    record_trace: bool = False,
) -> LocalTimeField:
    """One trajectory of the continuous-time walk from ``start`` until ``rule`` fires.

    Holding times are unit exponentials; an inverse-local-time stop cuts the
    last sojourn at the base short so its local time equals ``t`` exactly.
    """
    args = _rule_args(net, rule)
    indptr, nbr, cum = net.transition_table
    max_jumps = default_max_jumps() if max_jumps is None else int(max_jumps)
    n = net.n
    raw, comp = np.zeros(n), np.zeros(n)
    visits = np.zeros(n, dtype=np.int64)
    first = np.zeros(n)
    clock = np.zeros(2)
    cap = 1024 if record_trace else 0
    while True:
        tv = np.zeros(cap, dtype=np.int64)
        th = np.zeros(cap)
        state = rng.bit_generator.state
        status, jumps, final, ntr = K.walk_one(indptr, nbr, cum, net.idx(start), net.base, args.mode,
                                               args.raw_target, args.target_mask, args.n_fixed, max_jumps,
                                               rng, raw, comp, visits, first, clock, tv, th, record_trace)
        if status == K.TRACE_FULL:
            # replay the same randomness with a larger buffer
            rng.bit_generator.state = state
            cap *= 8
            continue
        break
    if status == K.BUDGET:
        raise BudgetExceeded(f"walk exceeded {max_jumps} jumps")
    lt = (raw - comp) / net.vertex_conductance
    if args.mode == K.INVERSE_LT:
        lt[net.base] = rule.t
    return LocalTimeField(
        local_time=lt,
        visits=visits,
        first_visit=first,
        stop_time=float(clock[0] - clock[1]),
        stop_reason=rule.reason,
        n_jumps=int(jumps),
        final_vertex=int(final),
        trace=Trace(tv[:ntr].copy(), th[:ntr].copy()) if record_trace else None,
    )


def write_trace_csv(field: LocalTimeField, path: str | Path, ids: Sequence[str] | None = None) -> None:
    """Dump a recorded trajectory as ``jump_index,time,vertex`` rows.

    Walks that stop on arrival get a final row for the vertex reached.
    """
    if field.trace is None:
        raise ValueError("trajectory was simulated without record_trace=True")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["jump_index", "time", "vertex"])
        for i, (t, v) in enumerate(zip(field.trace.arrival_times, field.trace.vertices)):
            w.writerow([i, repr(float(t)), ids[v] if ids is not None else int(v)])
        if len(field.trace.vertices) == field.n_jumps:
            v = field.final_vertex
            w.writerow([field.n_jumps, repr(field.stop_time), ids[v] if ids is not None else int(v)])


# ----------------------------------------------------------------------
# batches


@dataclass
class WalkBatch:
    """Many independent trajectories; per-vertex arrays are restricted to ``keep``."""

    keep: np.ndarray
    local_time: np.ndarray
    visits: np.ndarray
    first_visit: np.ndarray
    stop_time: np.ndarray
    n_jumps: np.ndarray
    final_vertex: np.ndarray

    @property
    def n_trials(self) -> int:
        return len(self.stop_time)


def simulate_batch(
    net: ElectricalNetwork,
    start: Vertex,
    rule: WalkStopRule,
    n_trials: int,
    seed: SeedLike,
    *,
    keep: Iterable[int] | None = None,
    workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK,
    max_jumps: int | None = None,
) -> WalkBatch:
    args = _rule_args(net, rule)
    indptr, nbr, cum = net.transition_table
    cx = np.ascontiguousarray(net.vertex_conductance, dtype=float)
    keep_idx = np.arange(net.n) if keep is None else np.array([net.idx(k) for k in keep], dtype=np.int64)
    max_jumps = default_max_jumps() if max_jumps is None else int(max_jumps)
    s = net.idx(start)
    t_base = rule.t if isinstance(rule, InverseLocalTime) else None
    base_col = np.flatnonzero(keep_idx == net.base)

    def chunk(count, rng):
        k = len(keep_idx)
        lt = np.zeros((count, k))
        vis = np.zeros((count, k), dtype=np.int64)
        first = np.zeros((count, k))
        stop = np.zeros(count)
        jumps = np.zeros(count, dtype=np.int64)
        final = np.zeros(count, dtype=np.int64)
        status, _ = K.walk_batch(indptr, nbr, cum, cx, s, net.base, args.mode, args.raw_target,
                                 args.target_mask, args.n_fixed, max_jumps, rng, keep_idx,
                                 lt, vis, first, stop, jumps, final)
        if status == K.BUDGET:
            raise BudgetExceeded(f"walk exceeded {max_jumps} jumps")
        if t_base is not None:
            lt[:, base_col] = t_base
        return lt, vis, first, stop, jumps, final

    parts = run_chunks(chunk, n_trials, seed, chunk_size=chunk_size, workers=workers)
    cols = list(zip(*parts)) if parts else [[]] * 6
    cat = [np.concatenate(c, axis=0) for c in cols]
    return WalkBatch(keep_idx, *cat)


def mean_local_time_profile(
    net: ElectricalNetwork, t: float, n_trials: int, seed: SeedLike, *, workers: int = 1
) -> tuple[np.ndarray, np.ndarray]:
    """Per-vertex mean of the local time at the inverse local time ``t``, and its standard error."""
    if n_trials < 100:
        raise ValueError("mean_local_time_profile needs at least 100 trials")
    b = simulate_batch(net, net.base, InverseLocalTime(t), n_trials, seed, workers=workers)
    se = b.local_time.std(axis=0, ddof=1) / math.sqrt(n_trials)
    return b.local_time.mean(axis=0), se


def cover_time(net: ElectricalNetwork, start: Vertex, rng: np.random.Generator, **kw) -> tuple[float, LocalTimeField]:
    f = simulate_ctrw(net, start, CoverAll(), rng, **kw)
    return f.stop_time, f


def cover_times(
    net: ElectricalNetwork, start: Vertex, n_trials: int, seed: SeedLike, *, workers: int = 1
) -> np.ndarray:
    return simulate_batch(net, start, CoverAll(), n_trials, seed, keep=[], workers=workers).stop_time


@dataclass
class HittingStats:
    """Monte Carlo hitting and cover times.

    ``pair_mean[x, y]`` estimates ``E tau_hit(x, y)``; rows for starts that
    were not simulated are NaN.
    """

    starts: np.ndarray
    pair_mean: np.ndarray
    pair_se: np.ndarray
    cover_mean: np.ndarray
    cover_se: np.ndarray
    n_trials: int

    @property
    def t_hit(self) -> float:
        return float(np.nanmax(self.pair_mean))

    @property
    def t_hit_pair(self) -> tuple[int, int]:
        i, j = np.unravel_index(np.nanargmax(self.pair_mean), self.pair_mean.shape)
        return int(i), int(j)

    @property
    def t_cov(self) -> float:
        return float(np.nanmax(self.cover_mean))


def hitting_time_stats(
    net: ElectricalNetwork,
    n_trials: int,
    seed: SeedLike,
    *,
    starts: Iterable[Vertex] | None = None,
    workers: int = 1,
) -> HittingStats:
    """First-visit times from each start, read off covering walks.

    A walk run until cover time visits every ``y``; its first-visit time of
    ``y`` is one draw of ``tau_hit(x, y)``.
    """
    n = net.n
    st = np.arange(n) if starts is None else np.array([net.idx(s) for s in starts], dtype=np.int64)
    pm = np.full((n, n), np.nan)
    ps = np.full((n, n), np.nan)
    cm = np.full(n, np.nan)
    cs = np.full(n, np.nan)
    for x in st:
        b = simulate_batch(net, int(x), CoverAll(), n_trials, substream(seed, "start", int(x)), workers=workers)
        pm[x] = b.first_visit.mean(axis=0)
        ps[x] = b.first_visit.std(axis=0, ddof=1) / math.sqrt(n_trials)
        pm[x, x] = np.nan
        ps[x, x] = np.nan
        cm[x] = b.stop_time.mean()
        cs[x] = b.stop_time.std(ddof=1) / math.sqrt(n_trials)
    return HittingStats(st, pm, ps, cm, cs, n_trials)


# ----------------------------------------------------------------------
# refinement projection


@dataclass
class ProjectedWalk:
    """The walk on the parent network induced by a walk on a refinement.

    ``sojourn_vertex[i]`` is the i-th parent vertex visited, with
    ``sojourn_visits[i]`` returns to it and ``sojourn_time[i]`` time spent
    there before reaching a different parent vertex.  The last sojourn is
    incomplete when the walk was stopped mid-way.
    """

    sojourn_vertex: np.ndarray
    sojourn_visits: np.ndarray
    sojourn_time: np.ndarray
    complete: np.ndarray
    local_time_raw: np.ndarray
    local_time: np.ndarray

    @property
    def transitions(self) -> np.ndarray:
        """``(from, to)`` pairs of the parent jump chain."""
        return np.stack([self.sojourn_vertex[:-1], self.sojourn_vertex[1:]], axis=1)


def project_refined_walk(refinement: Refinement, field: LocalTimeField) -> ProjectedWalk:
    """Record only the time spent at parent vertices.

    ``local_time_raw`` normalizes by parent conductances (the projected walk,
    whose holding times are stretched by ``N``); ``local_time`` divides that
    by ``N`` and so matches local time on the refinement itself.
    """
    if field.trace is None:
        raise ValueError("projection needs a trajectory recorded with record_trace=True")
    parent = refinement.parent
    v, h = field.trace.vertices, field.trace.holding
    mask = v < parent.n
    pv, ph = v[mask], h[mask]
    change = np.r_[True, pv[1:] != pv[:-1]]
    sid = np.cumsum(change) - 1
    soj_v = pv[change]
    soj_visits = np.bincount(sid)
    soj_t = np.bincount(sid, weights=ph)
    complete = np.ones(len(soj_v), dtype=bool)
    if field.stop_reason != "cover" and len(complete):
        complete[-1] = False
    raw = np.bincount(soj_v, weights=soj_t, minlength=parent.n) / parent.vertex_conductance
    return ProjectedWalk(soj_v, soj_visits, soj_t, complete, raw, raw / refinement.N)


# ----------------------------------------------------------------------
# local times along refined edges


def near_edge_vertices(refinement: Refinement, x: Vertex, k_max: float, neighbors=None) -> np.ndarray:
    """``v_{xy,k}`` for every parent neighbour ``y`` of ``x`` and ``0 <= k <= k_max``."""
    ys = refinement.parent.neighbors(x) if neighbors is None else [refinement.parent.idx(y) for y in neighbors]
    kk = np.arange(0, int(math.floor(k_max)) + 1)
    out = {int(refinement.path(x, y)[k]) for y in ys for k in kk if k <= refinement.N}
    return np.array(sorted(out), dtype=np.int64)


def bridge_vertices(refinement: Refinement, x: Vertex, y: Vertex, k_min: float) -> np.ndarray:
    """``v_{yx,k}`` for ``k_min <= k <= N``."""
    p = refinement.path(y, x)
    lo = int(math.ceil(k_min))
    return np.array(sorted(int(p[k]) for k in range(lo, refinement.N + 1)), dtype=np.int64)


def edge_min_local_time(
    refinement: Refinement,
    x: Vertex,
    sub_vertices: Sequence[int],
    rng: np.random.Generator,
    *,
    exit_vertex: Vertex | None = None,
    rejection_budget: int = 10_000,
    max_jumps: int | None = None,
) -> float:
    """One draw of the minimum local time over ``sub_vertices`` when the walk
    from parent vertex ``x`` first reaches another parent vertex."""
    return float(_edge_min(refinement, x, sub_vertices, 1, rng, exit_vertex, rejection_budget, max_jumps)[0][0])


def edge_min_samples(
    refinement: Refinement,
    x: Vertex,
    sub_vertices: Sequence[int],
    n_trials: int,
    seed: SeedLike,
    *,
    exit_vertex: Vertex | None = None,
    rejection_budget: int = 10_000,
    workers: int = 1,
    max_jumps: int | None = None,
) -> np.ndarray:
    def chunk(count, rng):
        return _edge_min(refinement, x, sub_vertices, count, rng, exit_vertex, rejection_budget, max_jumps)[0]

    parts = run_chunks(chunk, n_trials, seed, workers=workers)
    return np.concatenate(parts) if parts else np.zeros(0)


def _edge_min(refinement, x, sub_vertices, count, rng, exit_vertex, rejection_budget, max_jumps):
    net = refinement.network
    parent = refinement.parent
    xi = parent.idx(x)
    if not parent.neighbors(xi):
        raise ValueError(f"parent vertex {x!r} has no neighbours")
    mask = np.zeros(net.n, dtype=np.bool_)
    mask[: parent.n] = True
    mask[xi] = False
    want = -1 if exit_vertex is None else parent.idx(exit_vertex)
    if want >= 0 and want not in parent.neighbors(xi):
        raise ValueError("exit vertex must be a parent neighbour of x")
    indptr, nbr, cum = net.transition_table
    cx = np.ascontiguousarray(net.vertex_conductance, dtype=float)
    sub = np.asarray(sub_vertices, dtype=np.int64)
    out = np.zeros(count)
    att = np.zeros(count, dtype=np.int64)
    mj = default_max_jumps() if max_jumps is None else int(max_jumps)
    status, _ = K.edge_min_batch(indptr, nbr, cum, cx, xi, mask, want, mj, rejection_budget, rng, sub, out, att)
    if status == K.BUDGET:
        raise BudgetExceeded(f"walk exceeded {mj} jumps")
    if status == K.REJECTED:
        raise RejectionBudgetExceeded(f"no walk exited at {exit_vertex!r} within {rejection_budget} attempts")
    return out, att
