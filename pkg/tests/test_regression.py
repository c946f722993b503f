import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lingering.model import ModelParams
from lingering.regression import (
    MIN_WINDOW,
    InsufficientWindowError,
    SweepFailure,
    SweepPoint,
    default_rho_grid,
    fit_alpha,
    minimum_index,
    sweep_alpha,
    warm_start,
)


def points_on(a, b, xs):
    return [SweepPoint(rho=1 - math.exp(-x), F=a + b / x, mean=math.nan, ci=0.0) for x in xs]


XS = np.linspace(2.0, 5.3, 10)


def test_exact_fit():
    res = fit_alpha(points_on(2.0, -0.8, XS))
    assert res.alpha_hat == pytest.approx(2.0, abs=1e-12)
    assert res.log_c_hat == pytest.approx(-0.8, abs=1e-12)
    assert res.rss == pytest.approx(0.0, abs=1e-20)
    assert res.window_start == 0 and res.n_points == 10


@given(st.floats(-5, 5), st.floats(-3, -0.01))
@settings(max_examples=50)
def test_exact_fit_random_parameters(a, b):
    # b < 0 keeps F increasing, so the minimum sits at the first point
    res = fit_alpha(points_on(a, b, XS))
    assert res.alpha_hat == pytest.approx(a, rel=1e-10, abs=1e-10)
    assert res.log_c_hat == pytest.approx(b, rel=1e-10, abs=1e-10)
    assert res.rss >= 0


def test_order_does_not_matter():
    pts = [SweepPoint(rho=1 - math.exp(-x), F=2 - 0.7 / x + 0.01 * math.sin(7 * x), mean=1, ci=0)
           for x in XS]
    shuffled = pts[:]
    random.Random(4).shuffle(shuffled)
    assert fit_alpha(shuffled) == fit_alpha(pts)


def _dip(xs, k_min):
    """Falls until ``xs[k_min]`` then follows 2 - 0.8/x shifted to join continuously."""
    x0 = xs[k_min]
    rise = 2 - 0.8 / xs
    fall = rise[k_min] + 0.3 * (x0 - xs)
    return np.where(np.arange(len(xs)) < k_min, fall, rise)


def test_window_starts_at_constructed_minimum():
    F = _dip(XS, 3)
    pts = [SweepPoint(rho=1 - math.exp(-x), F=f, mean=1, ci=0) for x, f in zip(XS, F)]
    res = fit_alpha(pts)
    assert res.window_start == 3
    assert res.alpha_hat == pytest.approx(2.0, abs=1e-10)


def test_minimum_rule_is_active():
    F = _dip(XS, 4)
    pts = [SweepPoint(rho=1 - math.exp(-x), F=f, mean=1, ci=0) for x, f in zip(XS, F)]
    assert abs(fit_alpha(pts).alpha_hat - fit_alpha(pts, window="all").alpha_hat) > 0.05


def test_minimum_index_ties_go_right():
    assert minimum_index([3, 1, 2, 1, 4]) == 3
    assert minimum_index([1, 1, 1]) == 2


def test_window_errors():
    with pytest.raises(InsufficientWindowError):
        fit_alpha(points_on(2, -0.8, XS[:5]))
    falling = points_on(3.0, 1.5, XS)  # decreasing F: the minimum is the last point
    with pytest.raises(InsufficientWindowError):
        fit_alpha(falling)
    late_dip = [SweepPoint(p.rho, f, 1, 0) for p, f in zip(falling, _dip(XS, len(XS) - MIN_WINDOW + 1))]
    with pytest.raises(InsufficientWindowError):
        fit_alpha(late_dip)
    with pytest.raises(ValueError):
        fit_alpha(falling, window="median")


def test_auto_window_on_falling_F():
    falling = points_on(3.0, 1.5, XS)
    res = fit_alpha(falling, window="auto")
    assert res.window_start == 0
    assert res.alpha_hat == pytest.approx(3.0)
    # with a usable minimum, auto behaves like the minimum rule
    dip = [SweepPoint(1 - math.exp(-x), f, 1, 0) for x, f in zip(XS, _dip(XS, 3))]
    assert fit_alpha(dip, window="auto") == fit_alpha(dip)


def test_default_grid():
    g = default_rho_grid()
    assert len(g) == 10
    assert np.log(1 / (1 - g))[[0, -1]] == pytest.approx([2.0, 5.3])
    assert np.all(np.diff(g) > 0)


def test_warm_start_levels():
    assert warm_start(ModelParams.standard(0.9, beta=math.inf)).total == 0
    s = warm_start(ModelParams.standard(0.9, beta=0.5))
    assert s.active == s.inactive == (99, 99)


SMALL_GRID = 1 - np.exp(-np.linspace(1.0, 2.2, 6))


def test_sweep_is_worker_independent():
    p1, r1 = sweep_alpha(2.0, SMALL_GRID, n_epochs=1500, seed=3, workers=1)
    p2, r2 = sweep_alpha(2.0, SMALL_GRID, n_epochs=1500, seed=3, workers=2)
    assert p1 == p2
    assert r1 == r2
    assert [p.rho for p in p1] == pytest.approx(SMALL_GRID.tolist())


def test_sweep_failures():
    budgets = [1500] * 5 + [3]  # three epochs cannot fill thirty batches
    pts, res = sweep_alpha(2.0, SMALL_GRID, n_epochs=budgets, seed=1, on_error="record")
    assert isinstance(pts[-1], SweepFailure)
    assert res is None  # five good points are too few to fit
    with pytest.raises(RuntimeError):
        sweep_alpha(2.0, SMALL_GRID, n_epochs=budgets, seed=1)


def test_sweep_grid_validation():
    with pytest.raises(ValueError):
        sweep_alpha(2.0, SMALL_GRID[::-1], n_epochs=100)
    with pytest.raises(ValueError):
        sweep_alpha(2.0, [0.5, 1.0], n_epochs=100)
    with pytest.raises(ValueError):
        sweep_alpha(2.0, SMALL_GRID, n_epochs=[100, 200])


@pytest.mark.slow
def test_alpha_insensitive_to_R():
    grid = default_rho_grid(8, 2.0, 4.4)
    _, r2 = sweep_alpha(2.0, grid, R=2, n_epochs=20_000, seed=11)
    _, r3 = sweep_alpha(2.0, grid, R=3, n_epochs=20_000, seed=11)
    assert abs(r2.alpha_hat - r3.alpha_hat) < 0.15
