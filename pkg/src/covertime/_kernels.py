"""Compiled inner loops for the continuous-time walk.

All kernels take a ``numpy.random.Generator`` and never touch global state.
Status codes: 0 ok, 1 jump budget exceeded, 2 trace buffer full,
3 rejection budget exceeded.
"""

import numpy as np
from numba import njit

COVER = 0
INVERSE_LT = 1
HIT = 2
FIXED = 3

OK = 0
BUDGET = 1
TRACE_FULL = 2
REJECTED = 3


@njit(nogil=True, cache=True)
def _kahan_add(acc, comp, i, x):
    y = x - comp[i]
    s = acc[i] + y
    comp[i] = (s - acc[i]) - y
    acc[i] = s


@njit(nogil=True, cache=True)
def walk_one(indptr, nbr, cum, start, base, mode, raw_target, target_mask, n_fixed, max_jumps,
             rng, raw, comp, visits, first_visit, clock, trace_v, trace_h, record):
    """Run one trajectory in place.

    ``raw`` receives per-vertex holding time, ``clock`` is a 2-slot Kahan
    accumulator for elapsed time.  Returns ``(status, jumps, final_vertex, n_trace)``.
    """
    n = raw.shape[0]
    raw[:] = 0.0
    comp[:] = 0.0
    visits[:] = 0
    first_visit[:] = np.inf
    clock[:] = 0.0
    v = start
    visits[v] = 1
    first_visit[v] = 0.0
    n_visited = 1
    jumps = 0
    ntr = 0
    if mode == COVER and n_visited == n:
        return OK, jumps, v, ntr
    if mode == HIT and target_mask[v]:
        return OK, jumps, v, ntr
    if mode == FIXED and n_fixed == 0:
        return OK, jumps, v, ntr
    while True:
        h = rng.exponential()
        stop = False
        if mode == INVERSE_LT and v == base:
            remaining = raw_target - (raw[base] - comp[base])
            if h >= remaining:
                h = remaining
                stop = True
        _kahan_add(raw, comp, v, h)
        _kahan_add(clock, clock[1:], 0, h)
        if record:
            if ntr >= trace_v.shape[0]:
                return TRACE_FULL, jumps, v, ntr
            trace_v[ntr] = v
            trace_h[ntr] = h
            ntr += 1
        if stop:
            return OK, jumps, v, ntr
        if jumps >= max_jumps:
            return BUDGET, jumps, v, ntr
        lo = indptr[v]
        hi = indptr[v + 1]
        u = rng.random()
        k = lo + np.searchsorted(cum[lo:hi], u, side="right")
        if k >= hi:
            k = hi - 1
        v = nbr[k]
        jumps += 1
        visits[v] += 1
        if first_visit[v] == np.inf:
            first_visit[v] = clock[0]
            n_visited += 1
        if mode == COVER and n_visited == n:
            return OK, jumps, v, ntr
        if mode == HIT and target_mask[v]:
            return OK, jumps, v, ntr
        if mode == FIXED and jumps == n_fixed:
            return OK, jumps, v, ntr


@njit(nogil=True, cache=True)
def walk_batch(indptr, nbr, cum, cx, start, base, mode, raw_target, target_mask, n_fixed, max_jumps,
               rng, keep, out_lt, out_visits, out_first, out_stop, out_jumps, out_final):
    n = cx.shape[0]
    raw = np.zeros(n)
    comp = np.zeros(n)
    visits = np.zeros(n, dtype=np.int64)
    first = np.zeros(n)
    clock = np.zeros(2)
    dummy_v = np.zeros(0, dtype=np.int64)
    dummy_h = np.zeros(0)
    for trial in range(out_stop.shape[0]):
        status, jumps, final, _ = walk_one(indptr, nbr, cum, start, base, mode, raw_target, target_mask,
                                           n_fixed, max_jumps, rng, raw, comp, visits, first, clock,
                                           dummy_v, dummy_h, False)
        if status != OK:
            return status, trial
        for j in range(keep.shape[0]):
            w = keep[j]
            out_lt[trial, j] = (raw[w] - comp[w]) / cx[w]
            out_visits[trial, j] = visits[w]
            out_first[trial, j] = first[w]
        out_stop[trial] = clock[0] - clock[1]
        out_jumps[trial] = jumps
        out_final[trial] = final
    return OK, -1


@njit(nogil=True, cache=True)
def edge_min_batch(indptr, nbr, cum, cx, start, target_mask, want_exit, max_jumps, rejection_budget,
                   rng, sub, out_min, out_attempts):
    """Minimum local time over ``sub`` at the first hit of ``target_mask``.

    With ``want_exit >= 0`` trials whose exit vertex differs are rejected
    and rerun.
    """
    n = cx.shape[0]
    raw = np.zeros(n)
    comp = np.zeros(n)
    visits = np.zeros(n, dtype=np.int64)
    first = np.zeros(n)
    clock = np.zeros(2)
    dummy_v = np.zeros(0, dtype=np.int64)
    dummy_h = np.zeros(0)
    for trial in range(out_min.shape[0]):
        attempts = 0
        while True:
            attempts += 1
            status, jumps, final, _ = walk_one(indptr, nbr, cum, start, start, HIT, 0.0, target_mask, 0,
                                               max_jumps, rng, raw, comp, visits, first, clock,
                                               dummy_v, dummy_h, False)
            if status != OK:
                return status, trial
            if want_exit < 0 or final == want_exit:
                break
            if attempts >= rejection_budget:
                return REJECTED, trial
        m = np.inf
        for j in range(sub.shape[0]):
            w = sub[j]
            val = (raw[w] - comp[w]) / cx[w]
            if val < m:
                m = val
        out_min[trial] = m
        out_attempts[trial] = attempts
    return OK, -1


@njit(nogil=True, cache=True)
def path_walk_batch(cond, start, stop_low, stop_high, max_steps, rng, out_len, out_exit, up, down):
    """Discrete-time walks on the path ``0..len(cond)`` with edge conductances ``cond``.

    Walks start at ``start`` and stop on reaching ``stop_low`` or ``stop_high``.
    ``up``/``down`` accumulate per-vertex move counts over all trials.
    """
    top = cond.shape[0]
    for trial in range(out_len.shape[0]):
        x = start
        steps = 0
        while x != stop_low and x != stop_high:
            if steps >= max_steps:
                return BUDGET, trial
            c_dn = cond[x - 1] if x > 0 else 0.0
            c_up = cond[x] if x < top else 0.0
            if rng.random() * (c_dn + c_up) < c_up:
                up[x] += 1
                x += 1
            else:
                down[x] += 1
                x -= 1
            steps += 1
        out_len[trial] = steps
        out_exit[trial] = x
    return OK, -1


@njit(nogil=True, cache=True)
def conditioned_path_batch(cond, start, max_steps, rejection_budget, rng, out_len, up, down):
    """Walks from ``start`` on ``0..len(cond)`` kept only when they exit at 0 (rejection)."""
    top = cond.shape[0]
    up_t = np.zeros_like(up)
    dn_t = np.zeros_like(down)
    for trial in range(out_len.shape[0]):
        attempts = 0
        while True:
            attempts += 1
            up_t[:] = 0
            dn_t[:] = 0
            x = start
            steps = 0
            while x != 0 and x != top:
                if steps >= max_steps:
                    return BUDGET, trial
                c_dn = cond[x - 1]
                c_up = cond[x]
                if rng.random() * (c_dn + c_up) < c_up:
                    up_t[x] += 1
                    x += 1
                else:
                    dn_t[x] += 1
                    x -= 1
                steps += 1
            if x == 0:
                break
            if attempts >= rejection_budget:
                return REJECTED, trial
        out_len[trial] = steps
        up += up_t
        down += dn_t
    return OK, -1


@njit(nogil=True, cache=True)
def planar_min_batch(times, n_bridge, rng, out):
    """Minimum of ``|W_t|^2`` over the grid ``times`` for planar Brownian paths.

    ``n_bridge`` extra points per step are drawn from the Brownian bridge
    between grid points (0 disables the correction).
    """
    m_steps = times.shape[0]
    for p in range(out.shape[0]):
        t0 = times[0]
        s0 = np.sqrt(t0)
        x = s0 * rng.standard_normal()
        y = s0 * rng.standard_normal()
        best = x * x + y * y
        for i in range(1, m_steps):
            dt = times[i] - times[i - 1]
            sd = np.sqrt(dt)
            nx = x + sd * rng.standard_normal()
            ny = y + sd * rng.standard_normal()
            if n_bridge > 0:
                # sequential bridge sampling at equally spaced interior points
                bx = x
                by = y
                sub = dt / (n_bridge + 1)
                for j in range(n_bridge):
                    left = dt - j * sub
                    w = sub / left
                    mvar = sub * (left - sub) / left
                    sdb = np.sqrt(mvar)
                    bx = bx + w * (nx - bx) + sdb * rng.standard_normal()
                    by = by + w * (ny - by) + sdb * rng.standard_normal()
                    r2 = bx * bx + by * by
                    if r2 < best:
                        best = r2
            x = nx
            y = ny
            r2 = x * x + y * y
            if r2 < best:
                best = r2
        out[p] = best
    return OK
