import math

import numpy as np
import pytest

from lingering import oracles
from lingering.distributions import (
    ParameterError,
    RngStream,
    geometric,
    geometric_xi_for_load,
    point_mass,
    poisson,
)
from lingering.model import ModelParams
from lingering.oracles import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    WalkSpec,
    conditioned_acceptance,
    drift_root,
    estimate_drift,
    local_times,
    release_count_distribution,
    sample_conditioned_walk,
    scaling_of_A_at_Tstar,
    tail_exponent_B,
    tstar_gap_means,
    verify_bound_max,
    verify_bound_max_sqrt,
    verify_hitting_time_mean,
    verify_tstar_gap,
)

INF = math.inf
XI1 = geometric_xi_for_load(1.0)


def test_walk_spec_moments():
    h = WalkSpec.hitting_time(XI1)
    assert (h.step_mean, h.step_variance) == pytest.approx((2.0, 6.0))
    d = WalkSpec.from_distribution(XI1, shift=1, sign=-1)
    assert d.step_mean == pytest.approx(0.5)
    assert not d.non_negative and h.non_negative
    with pytest.raises(ParameterError):
        WalkSpec.hitting_time(geometric(0.4))  # E(xi) = 1.5


def test_hitting_time_generator_moments():
    h = WalkSpec.hitting_time(XI1)
    x = oracles._max_samples([1], h, 200_000, RngStream(3))
    se_mean = math.sqrt(h.step_variance / x.size)
    assert abs(x.mean() - h.step_mean) < 3 * se_mean
    # variance estimate: generous 10% band (heavy-ish right tail)
    assert x.var() == pytest.approx(h.step_variance, rel=0.1)


def test_bound_max_deterministic_steps_hits_equality():
    res = verify_bound_max((5, 7), WalkSpec.from_distribution(point_mass(2)), 10_000, RngStream(1))
    assert res.statistic == res.bound == 14.0
    assert res.verdict == PASS and res.satisfied


def test_bound_max_geometric_steps():
    res = verify_bound_max((100, 100), WalkSpec.from_distribution(XI1), 10_000, RngStream(2))
    assert res.verdict == PASS
    assert res.statistic < res.bound


def test_bound_max_single_walk_formula():
    spec = WalkSpec.from_distribution(poisson(1.5))
    res = verify_bound_max((40,), spec, 10_000, RngStream(3))
    assert res.bound == pytest.approx(1.5 * 40 + math.sqrt(1.5 * 40))
    assert res.verdict == PASS


def test_bound_max_rejects_negative_mean_and_small_budgets():
    with pytest.raises(ParameterError):
        verify_bound_max((10,), WalkSpec.from_distribution(XI1, shift=0, sign=-1), 10_000, RngStream(1))
    with pytest.raises(ParameterError):
        verify_bound_max((10,), WalkSpec.from_distribution(XI1), 100, RngStream(1))


def test_bound_max_randomised_instances():
    g = np.random.default_rng(2024)
    violations = 0
    for i in range(100):
        x = g.integers(0, 1500, size=g.integers(1, 5))
        kind = i % 4
        if kind == 0:
            spec = WalkSpec.from_distribution(geometric(g.uniform(0.2, 1.0)))
        elif kind == 1:
            spec = WalkSpec.from_distribution(poisson(g.uniform(0.0, 3.0)))
        elif kind == 2:
            spec = WalkSpec.hitting_time(geometric_xi_for_load(g.uniform(0.1, 1.8)))
        else:
            spec = WalkSpec.from_distribution(point_mass(int(g.integers(0, 4))), shift=int(g.integers(0, 2)))
        violations += verify_bound_max(x, spec, 10_000, RngStream(77, i)).verdict != PASS
    assert violations == 0


def test_bound_max_sqrt_cases():
    det = verify_bound_max_sqrt((9,), WalkSpec.from_distribution(point_mass(4)), 10_000, RngStream(1))
    assert det.statistic == pytest.approx(6.0) and det.verdict == PASS
    res = verify_bound_max_sqrt((400,), WalkSpec.hitting_time(XI1), 10_000, RngStream(2))
    assert res.verdict == PASS
    with pytest.raises(ParameterError):
        verify_bound_max_sqrt((9,), WalkSpec.from_distribution(point_mass(0)), 10_000, RngStream(1))
    with pytest.raises(ParameterError):
        verify_bound_max_sqrt((9,), WalkSpec.from_distribution(XI1, shift=1, sign=-1), 10_000, RngStream(1))


def test_bound_max_sqrt_relative_gap_shrinks():
    spec = WalkSpec.hitting_time(XI1)
    gaps = []
    for x in (100, 1000, 10_000):
        res = verify_bound_max_sqrt((x, x), spec, 10_000, RngStream(5, x))
        assert res.verdict == PASS
        gaps.append((res.statistic - res.bound) / res.statistic)
    assert gaps[0] > gaps[1] > gaps[2]


def test_tstar_gap_trivial_and_trend():
    p9 = ModelParams.standard(0.9, beta=INF)
    means, _ = tstar_gap_means([(0, 0)], p9, 100, RngStream(1))
    assert means.tolist() == [0.0]
    res = verify_tstar_gap([(100, 100), (1000, 1000), (10_000, 10_000), (10_000, 1)], p9, 1000, RngStream(2))
    assert res.verdict == PASS
    assert res.details["max_mean_gap"] == max(res.details["means"])
    with pytest.raises(ParameterError):
        verify_tstar_gap([(10, 10)], ModelParams.standard(0.9, beta=2.0), 10, RngStream(1))


def test_tstar_gap_monotone_in_load():
    grid = [(100, 100), (1000, 1000)]
    lo, lo_se = tstar_gap_means(grid, ModelParams.standard(0.5, beta=INF), 3000, RngStream(4))
    hi, hi_se = tstar_gap_means(grid, ModelParams.standard(0.9, beta=INF), 3000, RngStream(4))
    assert np.all(lo <= hi + 3 * np.hypot(lo_se, hi_se))


@pytest.mark.parametrize("a", [1, 10, 100])
def test_hitting_time_identity(a):
    res = verify_hitting_time_mean(a, ModelParams.standard(0.9, beta=2.0), 20_000, RngStream(6, a))
    assert res.verdict == PASS
    assert res.bound == pytest.approx(a / (1 - 0.45))


def test_drift_matches_heuristic_at_large_a():
    p = ModelParams.standard(0.9, beta=0.3)
    est = estimate_drift(1000, p, 10**6, RngStream(8))
    assert abs(est.drift - est.heuristic) < 3 * est.stderr


def test_drift_without_releases_is_exact():
    p = ModelParams.standard(0.9, beta=INF)
    est = estimate_drift(50, p, 10**6, RngStream(9))
    assert est.heuristic == pytest.approx((0.9 - 1) / 2)
    assert abs(est.drift - est.heuristic) < 3 * est.stderr


def test_drift_root_brackets_heuristic_level():
    p = ModelParams.standard(0.9, beta=0.3)
    root = drift_root(p, 10**5, RngStream(10))
    a_star = (1 - 0.9) ** (-1 / 0.3)
    assert a_star / 2 <= root <= 2 * a_star


def test_conditioned_paths_stay_positive():
    for seed in range(20):
        path, acc = sample_conditioned_walk(200, RngStream(seed))
        assert path[0] == 0
        assert np.all(path[1:] >= 1)
        assert np.all(np.diff(path) <= 1)
        assert 0 < acc <= 1


def test_acceptance_probability_positive():
    acc = conditioned_acceptance(500, 20_000, RngStream(3))
    assert 0.3 < acc < 0.7
    with pytest.raises(ParameterError):
        sample_conditioned_walk(10, RngStream(1), xi=geometric(0.5))  # no positive drift
    with pytest.raises(ParameterError):
        # paths rarely survive 50 steps near zero drift; allow a single try
        sample_conditioned_walk(50, RngStream(2), xi=geometric_xi_for_load(1.98), min_acceptance=1.0)


def test_local_times_bounded():
    lt = local_times(2000, 5000, RngStream(4), levels=51)
    assert lt[0] == 1.0
    assert lt[1:].max() < 5
    # the sup should not drift upwards with the level
    assert lt[40:].mean() < lt[1:11].mean() + 1


def test_release_counts_at_beta_two():
    rc = release_count_distribution(2.0, 500, 10_000, RngStream(5))
    assert rc.p_zero - 3 * rc.p_zero_stderr > 0
    assert np.all(np.diff(rc.tail) <= 0)
    assert rc.tail[-1] == 0.0
    assert not rc.inconclusive
    assert rc.histogram.sum() == rc.n_samples
    with pytest.raises(ParameterError):
        release_count_distribution(1.0, 100, 100, RngStream(1))


def test_release_counts_vanish_for_infinite_beta():
    rc = release_count_distribution(INF, 200, 2000, RngStream(6))
    assert rc.p_zero == 1.0


def test_short_horizon_is_flagged():
    rc = release_count_distribution(1.1, 5, 20_000, RngStream(7))
    assert rc.inconclusive


def test_tail_exponent_beta_two():
    est = tail_exponent_B(2.0, 2000, 40_000, RngStream(8))
    assert est.exponent_hat == pytest.approx(2.0, abs=0.3)
    assert est.truncation_horizon == 2000 and est.n_samples > 0
    doubled = tail_exponent_B(2.0, 4000, 40_000, RngStream(9))
    assert abs(doubled.exponent_hat - est.exponent_hat) < 0.2


def test_tail_exponent_near_one_via_hazard():
    # the pmf slope converges slowly near beta = 1; the hazard removes the survival factor
    est = tail_exponent_B(1.2, 2000, 30_000, RngStream(10), method="hazard")
    assert est.exponent_hat == pytest.approx(1.2, abs=0.3)
    pmf = tail_exponent_B(1.2, 2000, 30_000, RngStream(10))
    assert pmf.exponent_hat > est.exponent_hat


def test_tail_exponent_errors():
    with pytest.raises(ParameterError):
        tail_exponent_B(2.5, 100, 100, RngStream(1))
    with pytest.raises(oracles.InsufficientDataError):
        tail_exponent_B(2.0, 20, 500, RngStream(1))


def test_A_scaling_degenerate_and_ordering():
    deg = scaling_of_A_at_Tstar(INF, (10, 100), 100, RngStream(1))
    assert deg.degenerate and math.isnan(deg.slope)
    grid = (100, 1000, 10_000)
    heavy = scaling_of_A_at_Tstar(1.2, grid, 1000, RngStream(2))
    light = scaling_of_A_at_Tstar(3.0, grid, 1000, RngStream(3))
    assert heavy.slope > light.slope


def test_check_records_are_json_ready():
    rec = verify_bound_max((3,), WalkSpec.from_distribution(point_mass(1)), 10_000, RngStream(1)).to_record()
    assert set(rec) == {"check", "params", "statistic", "bound", "stderr", "verdict"}
    odd = oracles.CheckResult("x", {"beta": INF, "v": np.int64(3)}, math.nan, 1.0, 0.0, INCONCLUSIVE).to_record()
    assert odd["statistic"] is None and odd["params"] == {"beta": "inf", "v": 3}
    assert FAIL != PASS
