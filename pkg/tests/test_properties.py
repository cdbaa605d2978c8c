"""Property-based checks of structural invariants."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from covertime.network import build_network, refine
from covertime.stats import (
    dkw_band,
    dominance_test,
    exp_sum_tail_bound,
    inverse_lt_bound,
    ks_statistic,
)
from covertime.pathkit import disk_avoidance_bound

cond = st.floats(0.05, 20.0)


@st.composite
def networks(draw, max_n=7):
    n = draw(st.integers(2, max_n))
    # a random spanning tree keeps the graph connected, extra edges on top
    edges = [(str(i), str(draw(st.integers(0, i - 1))), draw(cond)) for i in range(1, n)]
    for _ in range(draw(st.integers(0, 8))):
        a, b = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        edges.append((str(a), str(b), draw(cond)))
    return build_network(edges, "0")


@settings(max_examples=60, deadline=None)
@given(networks())
def test_resistance_is_a_metric(net):
    R = net.resistance_matrix
    assert np.allclose(R, R.T, atol=1e-9)
    assert np.allclose(np.diag(R), 0.0, atol=1e-9)
    off = R[~np.eye(net.n, dtype=bool)]
    assert np.all(off > 0)
    # triangle inequality over all triples
    assert np.all(R[:, None, :] <= R[:, :, None] + R[None, :, :] + 1e-9)


@settings(max_examples=40, deadline=None)
@given(networks(), st.floats(1.01, 5.0))
def test_rayleigh_monotonicity(net, factor):
    u, v, c = net.edge_list()[0]
    boosted = build_network(net.edge_list() + [(u, v, (factor - 1.0) * c)], net.base_id)
    assert np.all(boosted.resistance_matrix <= net.resistance_matrix + 1e-9)


@settings(max_examples=40, deadline=None)
@given(networks(), st.integers(2, 4))
def test_refinement_keeps_parent_resistances(net, N):
    ref = refine(net, N)
    R = ref.network.resistance_matrix[: net.n, : net.n]
    assert np.allclose(R, net.resistance_matrix, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(networks())
def test_commute_rhs_total_conductance(net):
    assert np.isclose(net.c_tot, net.vertex_conductance.sum())
    assert np.isclose(net.c_tot, 2 * net.edge_count_equivalent)


samples = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=1, max_size=60)


@settings(max_examples=80, deadline=None)
@given(samples, samples)
def test_ks_statistic_symmetric_and_bounded(a, b):
    d = ks_statistic(a, b)
    assert 0.0 <= d <= 1.0
    assert d == ks_statistic(b, a)
    assert ks_statistic(a, a) == 0.0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=50, max_size=200), st.floats(0.0, 5.0))
def test_shift_up_never_violates_dominance(a, shift):
    a = np.asarray(a)
    assert dominance_test(a, a + shift).statistic == 0.0


@given(st.integers(1, 10**6), st.floats(1e-6, 0.5))
def test_dkw_band_shrinks_with_n(n, alpha):
    assert dkw_band(n + 1, alpha) < dkw_band(n, alpha)
    assert dkw_band(n, alpha / 2) > dkw_band(n, alpha)


@given(st.integers(1, 500), st.floats(0.05, 1.0), st.floats(0.05, 1.0))
def test_exp_sum_bound_monotone_in_alpha(N, a1, a2):
    lo, hi = sorted((a1, a2))
    assert exp_sum_tail_bound(N, hi).raw <= exp_sum_tail_bound(N, lo).raw + 1e-15


@given(st.floats(1e-6, 0.5), st.floats(1e-12, 0.9), st.floats(1e-12, 0.9))
def test_disk_bound_monotone_in_lambda(eps, l1, l2):
    lo, hi = sorted((l1, l2))
    assert disk_avoidance_bound(eps, lo).raw <= disk_avoidance_bound(eps, hi).raw + 1e-12


@given(st.floats(0.1, 10), st.floats(1.0, 100), st.floats(1.0, 100))
def test_inverse_lt_bound_decreases_in_lambda(t, l1, l2):
    lo, hi = sorted((l1, l2))
    thr_lo, b_lo = inverse_lt_bound(t, lo, 1.0, 6.0)
    thr_hi, b_hi = inverse_lt_bound(t, hi, 1.0, 6.0)
    assert thr_hi >= thr_lo
    assert b_hi.raw <= b_lo.raw + 1e-15
