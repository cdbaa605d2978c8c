import math

import numpy as np
import pytest

from covertime import fixtures
from covertime.errors import BudgetExceeded
from covertime.network import refine
from covertime.rng import generator
from covertime.walk import (
    CoverAll,
    FixedJumpCount,
    HitSet,
    InverseLocalTime,
    cover_times,
    hitting_time_stats,
    mean_local_time_profile,
    project_refined_walk,
    simulate_batch,
    simulate_ctrw,
    write_trace_csv,
)


def test_inverse_local_time_accounting(any_fixture):
    net = any_fixture
    rng = generator(1)
    for _ in range(50):
        f = simulate_ctrw(net, net.base, InverseLocalTime(0.7), rng)
        assert f.local_time[net.base] == 0.7
        total = float(np.dot(net.vertex_conductance, f.local_time))
        assert total == pytest.approx(f.stop_time, rel=1e-9)
        assert f.final_vertex == net.base


def test_trace_matches_local_times():
    net = fixtures.triangle()
    f = simulate_ctrw(net, "a", InverseLocalTime(3.0), generator(2), record_trace=True)
    raw = np.bincount(f.trace.vertices, weights=f.trace.holding, minlength=net.n)
    np.testing.assert_allclose(raw / net.vertex_conductance, f.local_time, rtol=1e-12)
    assert len(f.trace.vertices) == f.n_jumps + 1


def test_long_trace_replay_is_consistent():
    net = fixtures.complete(16)
    a = simulate_ctrw(net, 0, InverseLocalTime(20.0), generator(4), record_trace=True)
    b = simulate_ctrw(net, 0, InverseLocalTime(20.0), generator(4))
    assert len(a.trace.vertices) > 1024
    np.testing.assert_array_equal(a.local_time, b.local_time)


def test_cover_and_hit_rules():
    net = fixtures.path(4)
    f = simulate_ctrw(net, "0", CoverAll(), generator(3))
    assert np.all(np.isfinite(f.first_visit)) and f.final_vertex == net.idx("4")
    assert f.cover_time == pytest.approx(f.stop_time)
    h = simulate_ctrw(net, "0", HitSet(("2",)), generator(3))
    assert h.final_vertex == net.idx("2") and h.visits[net.idx("3")] == 0
    j = simulate_ctrw(net, "0", FixedJumpCount(7), generator(3))
    assert j.n_jumps == 7


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        simulate_ctrw(fixtures.complete(16), 0, CoverAll(), generator(0), max_jumps=3)


def test_batch_worker_invariance():
    net = fixtures.star(5)
    a = simulate_batch(net, net.base, InverseLocalTime(1.0), 5000, 9, workers=1)
    b = simulate_batch(net, net.base, InverseLocalTime(1.0), 5000, 9, workers=3)
    np.testing.assert_array_equal(a.local_time, b.local_time)
    np.testing.assert_array_equal(a.stop_time, b.stop_time)


def test_mean_local_time_profile_is_flat():
    mean, se = mean_local_time_profile(fixtures.random_cycle4(), 1.0, 40_000, 5)
    assert np.all(np.abs(mean - 1.0) <= 4 * np.maximum(se, 1e-12))


def test_inverse_local_time_mean():
    net = fixtures.triangle()
    tau = simulate_batch(net, net.base, InverseLocalTime(2.0), 40_000, 6, keep=[]).stop_time
    se = tau.std(ddof=1) / math.sqrt(len(tau))
    assert abs(tau.mean() - net.c_tot * 2.0) < 4 * se


def test_complete_graph_cover_time():
    # coupon collector: (n - 1) H_{n - 1} with unit rate per vertex
    n = 16
    tau = cover_times(fixtures.complete(n), 0, 20_000, 8)
    exact = (n - 1) * sum(1.0 / k for k in range(1, n))
    assert abs(tau.mean() - exact) < 4 * tau.std(ddof=1) / math.sqrt(len(tau))


def test_commute_identity_two_vertex_and_triangle():
    for net, expected in ((fixtures.two_vertex(), 2.0), (fixtures.triangle(), 4.0)):
        hs = hitting_time_stats(net, 20_000, 10)
        c = hs.pair_mean[0, 1] + hs.pair_mean[1, 0]
        se = math.hypot(hs.pair_se[0, 1], hs.pair_se[1, 0])
        assert abs(c - expected) < 4 * se


def test_projection_recovers_parent_walk():
    ref = refine(fixtures.triangle(), 3)
    f = simulate_ctrw(ref.network, ref.network.base, InverseLocalTime(1.5), generator(12), record_trace=True)
    pw = project_refined_walk(ref, f)
    np.testing.assert_allclose(pw.local_time, f.local_time[:3], rtol=1e-12)
    assert pw.sojourn_vertex[0] == ref.parent.base
    assert np.all(pw.sojourn_vertex[1:] != pw.sojourn_vertex[:-1])


def test_trace_csv(tmp_path):
    net = fixtures.triangle()
    f = simulate_ctrw(net, "a", FixedJumpCount(5), generator(1), record_trace=True)
    p = tmp_path / "trace.csv"
    write_trace_csv(f, p, net.ids)
    lines = p.read_text().splitlines()
    assert lines[0].split(",")[-1] == "vertex" and len(lines) == 7
