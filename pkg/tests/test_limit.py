import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, stats

from rwrs_lab.limit import (EXPECTED_LOCAL_TIME_AT_ZERO, SELF_INTERSECTION_CONSTANT, LimitConfig,
                            brownian_bins, delta_covariance, delta_refinement, local_time_functionals,
                            quadratic_functional_batch, simulate_bm_local_time, simulate_delta)


@pytest.fixture(scope="module")
def delta_batch():
    return simulate_delta(LimitConfig(times=(0.25, 0.5, 0.75, 1.0), replicates=5000, seed=101))


@pytest.fixture(scope="module")
def functionals():
    return local_time_functionals(LimitConfig(times=(1.0,), replicates=5000, seed=102))


def test_constants_against_quadrature():
    # E int L_1^2 = 2 int_0^1 int_s^1 (2 pi (u - s))^{-1/2} du ds
    val, _ = integrate.dblquad(lambda u, s: 2 / math.sqrt(2 * math.pi * (u - s)), 0, 1, lambda s: s, lambda s: 1)
    assert SELF_INTERSECTION_CONSTANT == pytest.approx(val, rel=1e-6)
    val, _ = integrate.quad(lambda s: 1 / math.sqrt(2 * math.pi * s), 0, 1)
    assert EXPECTED_LOCAL_TIME_AT_ZERO == pytest.approx(val, rel=1e-8)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([(1e-3, 0.05), (1e-4, 1e-2), (4e-4, 0.013)]),
       st.floats(0.05, 1.0))
def test_occupation_conservation(index, grid, t):
    dt, h = grid
    cfg = LimitConfig(dt=dt, h=h, replicates=1, seed=3)
    t = cfg.step_index(t) * dt or dt
    f = simulate_bm_local_time(cfg, t=t, index=index)
    assert np.all(f.values >= 0)
    assert abs(f.mass()[0] - cfg.step_index(t) * dt) <= 1e-12


def test_horizon_enforced():
    with pytest.raises(ValueError):
        simulate_bm_local_time(LimitConfig(), t=1.5)
    with pytest.raises(ValueError):
        LimitConfig(dt=0.0)
    with pytest.raises(ValueError):
        LimitConfig(times=(0.5, 0.25))


def test_increments_are_gaussian_steps():
    cfg = LimitConfig(dt=1e-3, h=1e-6, replicates=1, seed=0)
    b = brownian_bins(cfg, 0) * cfg.h
    inc = np.diff(b) / math.sqrt(cfg.dt)
    assert stats.kstest(inc, "norm").pvalue > 0.01


def test_self_intersection_constant(functionals):
    sq = functionals["sq_integral"][:, 0]
    assert sq.mean() == pytest.approx(SELF_INTERSECTION_CONSTANT, rel=0.05)


def test_local_time_at_zero(functionals):
    l0 = functionals["at_zero"][:, 0]
    assert l0.mean() == pytest.approx(EXPECTED_LOCAL_TIME_AT_ZERO, rel=0.05)


def test_variance_of_delta(delta_batch):
    assert delta_batch.values[:, -1].var() == pytest.approx(SELF_INTERSECTION_CONSTANT, rel=0.10)


def test_conditional_variance_route():
    # E Delta_1^2 = E[h sum_j L_1(x_j)^2]; the same Brownian paths feed both estimates
    cfg = LimitConfig(replicates=3000, seed=55)
    d2 = simulate_delta(cfg).values[:, 0] ** 2
    q = local_time_functionals(cfg)["sq_integral"][:, 0]
    diff = d2 - q
    assert abs(diff.mean()) <= 4 * diff.std(ddof=1) / math.sqrt(len(diff))


def test_self_similarity(delta_batch):
    ratios = [delta_batch.values[:, j].var() / t ** 1.5 for j, t in enumerate(delta_batch.times) if t != 0.75]
    assert max(ratios) / min(ratios) - 1 <= 0.10


def test_symmetric_marginal(delta_batch):
    x = delta_batch.values[:, -1]
    n = len(x)
    se = math.sqrt(6.0 * (n - 2) / ((n + 1) * (n + 3)))
    assert abs(stats.skew(x)) <= 4 * se


def test_stationary_increments(delta_batch):
    v = delta_batch.values
    inc = v[:, 2] - v[:, 0]
    # compare against an independent batch so the two samples share no paths
    other = simulate_delta(LimitConfig(times=(0.5,), replicates=5000, seed=202)).values[:, 0]
    assert stats.ks_2samp(inc, other).pvalue > 0.01


def test_covariance_structure(delta_batch):
    v = delta_batch.values
    emp = np.cov(v[:, 1], v[:, 3])[0, 1]
    assert emp == pytest.approx(delta_covariance(0.5, 1.0), rel=0.10)
    assert delta_covariance(1.0, 1.0) == pytest.approx(SELF_INTERSECTION_CONSTANT)


def test_refinement_stability():
    coarse, fine = delta_refinement(LimitConfig(replicates=5000, seed=9))
    c, f = coarse[:, 0], fine[:, 0]
    se = np.sqrt(np.var(c ** 2, ddof=1) / len(c))
    assert abs(f.var() - c.var()) < se


def test_refinement_coarse_matches_main_scheme():
    coarse, _ = delta_refinement(LimitConfig(replicates=3000, seed=4))
    main = simulate_delta(LimitConfig(replicates=3000, seed=4)).values[:, 0]
    assert stats.ks_2samp(coarse[:, 0], main).pvalue > 0.01


def test_quadratic_functional_nonnegative():
    cfg = LimitConfig(dt=4e-4, h=2e-2, replicates=300, seed=1)
    vals = quadratic_functional_batch(cfg, (1.0, -1.0), (0.5, 1.0))
    assert np.all(vals >= 0)
    # int (L_1 - L_1/2)^2 has the law of int L_{1/2}^2, mean c / 2^{3/2}
    assert vals.mean() == pytest.approx(SELF_INTERSECTION_CONSTANT / 2 ** 1.5, rel=0.15)


def test_reproducible_and_thread_independent():
    a = simulate_delta(LimitConfig(dt=1e-3, h=3e-2, replicates=50, seed=5, threads=1)).values
    b = simulate_delta(LimitConfig(dt=1e-3, h=3e-2, replicates=50, seed=5, threads=3)).values
    assert np.array_equal(a, b)
    assert np.all(np.isfinite(a))
