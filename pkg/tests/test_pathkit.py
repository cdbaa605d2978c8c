import math

import numpy as np
import pytest

from covertime import pathkit
from covertime.rng import generator


def test_conditioned_conductances_small_cases():
    np.testing.assert_allclose(pathkit.conditioned_conductances(2, 1.0).conductances, [3.0, 1.0])
    np.testing.assert_allclose(pathkit.conditioned_conductances(3, 1.0).conductances, [6.0, 3.0, 1.0])


@pytest.mark.parametrize("N,r", [(1, 1.0), (4, 0.5), (7, 3.0)])
def test_conditioned_positions_closed_form(N, r):
    gp = pathkit.conditioned_conductances(N, r)
    np.testing.assert_allclose(gp.positions, pathkit.conditioned_positions(N, r), rtol=1e-12, atol=1e-15)


@pytest.mark.parametrize("N,r", [(2, 1.0), (5, 0.7)])
def test_conditioned_law_is_doob_transform(N, r):
    # exact h-transform: p'(k, k+1) = p(k, k+1) h(k+1) / h(k), h(k) = P_k(exit at 0)
    c = np.r_[np.ones(N), r]
    a = np.r_[0.0, np.cumsum(1 / c)]
    h = 1 - a / a[-1]
    gp = pathkit.conditioned_conductances(N, r).conductances
    for k in range(1, N):
        p_up = c[k] / (c[k - 1] + c[k]) * h[k + 1] / h[k]
        assert gp[k] / (gp[k - 1] + gp[k]) == pytest.approx(p_up)


def test_walk_samples_have_expected_steps():
    s = pathkit.walk_to_zero(pathkit.unit_path(3), 5000, 1)
    assert np.all(s.lengths >= 3) and np.all((s.lengths - 3) % 2 == 0)
    assert s.up[0] == 0 and s.down[0] == 0


def test_squared_radius_law():
    law = pathkit.first_rk_marginal(1.5)
    assert law.mean == 3.0
    assert law.cdf(3.0) == pytest.approx(1 - math.exp(-1))
    assert pathkit.first_rk_marginal(0.0).cdf(0.0) == 1.0


def test_disk_bound_values():
    b = pathkit.disk_avoidance_bound(0.1, 0.01)
    assert b.raw == pytest.approx(2 / math.log(10) + 30 * math.exp(-2))
    assert pathkit.disk_avoidance_bound(0.1, 0.0).raw == pytest.approx(2 / math.log(10))


def test_planar_bm_marginals():
    times = pathkit.geometric_time_grid(0.01, 1000)
    s = pathkit.PlanarBmSampler(times, generator(3))
    end = np.array([s.sample_path()[-1] for _ in range(4000)])
    r2 = np.sum(end**2, axis=1)
    assert abs(r2.mean() - 2.0) < 4 * r2.std() / math.sqrt(len(r2))


def test_bridge_points_lower_the_minimum():
    a = pathkit.min_squared_radius_samples(0.01, 2000, 5, grid_steps=1000)
    b = pathkit.min_squared_radius_samples(0.01, 2000, 5, grid_steps=1000, bridge_points=4)
    assert np.mean(b) < np.mean(a)


def test_grid_size_floor():
    with pytest.raises(ValueError):
        pathkit.simulate_min_squared_radius(0.1, generator(0), grid_steps=100)
