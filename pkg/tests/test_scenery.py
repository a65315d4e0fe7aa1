import json
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from rwrs_lab.scenery import (IID, DoublingMap, IteratedFunction, LinearProcess, NegativeLongRunVariance,
                              SceneryError, analytic_covariance, empirical_covariance, model_from_dict,
                              sample_scenery, sigma_inf_sq)

MODELS = [
    IID(),
    IID("uniform", 2.0),
    LinearProcess("geometric", 0.5),
    IteratedFunction(0.5),
    IteratedFunction(0.6, "tanh", "uniform"),
    DoublingMap("x-1/2"),
    DoublingMap("cos"),
]


def doubling_cov_oracle(k):
    """Exact int_0^1 x (2^k x mod 1) dx - 1/4, piecewise over the 2^k branches."""
    m = 2 ** k
    total = Fraction(0)
    for j in range(m):
        a, b = Fraction(j, m), Fraction(j + 1, m)
        # integrand x (m x - j)
        total += Fraction(m, 3) * (b ** 3 - a ** 3) - Fraction(j, 2) * (b ** 2 - a ** 2)
    return float(total - Fraction(1, 4))


def test_iid_covariance():
    m = IID()
    assert analytic_covariance(m, 0) == 1.0
    assert analytic_covariance(m, 3) == 0.0


@pytest.mark.parametrize("k", range(0, 9))
def test_doubling_covariance_against_integral(k):
    assert analytic_covariance(DoublingMap("x-1/2"), k) == pytest.approx(doubling_cov_oracle(k), rel=1e-12)


@pytest.mark.parametrize("rho,s", [(0.5, 1.0), (0.8, 0.5), (0.2, 2.0)])
def test_ar1_covariance_against_geometric_series(rho, s):
    m = LinearProcess("geometric", rho, scale=s)
    a = rho ** np.arange(400)
    for k in range(6):
        direct = s ** 2 * np.sum(a[:400 - k] * a[k:])
        assert analytic_covariance(m, k) == pytest.approx(direct, rel=1e-12)


def test_unavailable_covariance():
    assert analytic_covariance(IteratedFunction(0.5, "tanh"), 2) is None
    assert analytic_covariance(DoublingMap("cos"), 1) is None
    assert analytic_covariance(LinearProcess("polynomial", 3.0), 1) is None


def test_negative_lag_rejected():
    with pytest.raises(ValueError):
        analytic_covariance(IID(), -1)


def test_doubling_orbit_is_shift():
    m = DoublingMap("x-1/2")
    w = sample_scenery(m, -500, 500, np.random.default_rng(4))
    xi = w.values
    pred = np.mod(2 * (xi[:-1] + 0.5), 1.0) - 0.5
    assert np.max(np.abs(xi[1:] - pred)) <= 2.0 ** -m.bits + 1e-16


def test_doubling_orbit_does_not_collapse():
    w = sample_scenery(DoublingMap("x-1/2"), 0, 9_999, np.random.default_rng(0))
    assert np.unique(w.values).size > 9_000
    # naive floating-point iteration of 2x mod 1 hits 0 within ~60 steps
    x = np.random.default_rng(0).random()
    for _ in range(80):
        x = (2 * x) % 1.0
    assert x == 0.0


def test_iterated_lag_one_correlation():
    w = sample_scenery(IteratedFunction(0.5), 0, 999_999, np.random.default_rng(12)).values
    r1 = np.corrcoef(w[:-1], w[1:])[0, 1]
    assert r1 == pytest.approx(0.5, abs=0.01)


def test_iterated_exact_start_variance():
    m = IteratedFunction(0.5)
    starts = np.array([m.sample(0, 0, np.random.default_rng(i)).values[0] for i in range(4000)])
    assert starts.var() == pytest.approx(4 / 3, rel=0.08)


def test_window_length_and_indexing():
    for m in MODELS:
        w = sample_scenery(m, -7, 12, np.random.default_rng(1))
        assert len(w.values) == 20
        assert w.at([-7, 12]).shape == (2,)


def test_rejects_empty_window():
    with pytest.raises(SceneryError):
        sample_scenery(IID(), 5, 4, np.random.default_rng(0))


def test_memory_cap():
    with pytest.raises(SceneryError):
        sample_scenery(LinearProcess("polynomial", 2.0), 0, 100, np.random.default_rng(0))
    with pytest.raises(SceneryError):
        sample_scenery(IID(), 0, 1000, np.random.default_rng(0), buffer_cap=500)


def test_truncation_lag_meets_tolerance():
    m = LinearProcess("geometric", 0.5)
    J = m.truncation_lag
    assert m.scale * m.tail_sum(J + 1) < 1e-8
    assert m.scale * m.tail_sum(J) >= 1e-8
    m = IteratedFunction(0.6, "tanh")
    assert m.kappa ** m.burn_in < 1e-8


@pytest.mark.parametrize("model", MODELS, ids=lambda m: f"{m.kind}")
def test_stationarity_ks(model):
    # thin by 64 so the two halves are effectively i.i.d. samples
    w = sample_scenery(model, -128_000, 127_999, np.random.default_rng(31)).values
    neg, pos = w[:128_000:64], w[128_000::64]
    assert stats.ks_2samp(neg, pos).pvalue > 0.01


@pytest.mark.parametrize("model", MODELS, ids=lambda m: f"{m.kind}")
def test_centering(model):
    n = 200_000
    w = sample_scenery(model, 0, n - 1, np.random.default_rng(17)).values
    r0 = model.covariance(0) or w.var()
    assert abs(w.mean()) <= 4 * np.sqrt(r0 / n)


@pytest.mark.parametrize("model", [IID(), LinearProcess("geometric", 0.5), IteratedFunction(0.5),
                                   DoublingMap("x-1/2")], ids=lambda m: m.kind)
def test_analytic_matches_empirical(model):
    cov = empirical_covariance(model, 10, 400_000, np.random.default_rng(5))
    for k in range(11):
        assert abs(cov.r[k] - model.covariance(k)) <= 4 * cov.se[k]


def test_sigma_inf_closed_forms():
    ar = empirical_covariance(LinearProcess("geometric", 0.5), 40, 1_000_000, np.random.default_rng(2))
    assert ar.sigma_inf_sq == pytest.approx(4.0, rel=0.05)
    dm = empirical_covariance(DoublingMap("x-1/2"), 40, 1_000_000, np.random.default_rng(3))
    assert dm.sigma_inf_sq == pytest.approx(0.25, rel=0.05)
    iid = empirical_covariance(IID(scale=2.0), 40, 1_000_000, np.random.default_rng(4))
    assert iid.sigma_inf_sq == pytest.approx(4.0, rel=0.05)
    assert sigma_inf_sq(LinearProcess("geometric", 0.5)) == pytest.approx(4.0)
    # geometric-sum oracle for the doubling map
    assert sigma_inf_sq(DoublingMap()) == pytest.approx(1 / 12 + 2 * sum(2.0 ** -k / 12 for k in range(1, 60)))


def test_covariance_summary_invariants():
    cov = empirical_covariance(LinearProcess("geometric", 0.5), 20, 200_000, np.random.default_rng(0))
    assert cov.r[0] > 0
    assert np.all(np.abs(cov.r) <= cov.r[0])
    assert cov.truncation_error_bound > 0
    assert cov.truncation_error_bound < 1e-4


def test_negative_long_run_variance_is_an_error():
    alternating = np.tile([1.0, -1.0], 50_000)
    with pytest.raises(NegativeLongRunVariance):
        empirical_covariance(IID(), 41, len(alternating), None, values=alternating)


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.kind)
def test_model_json_round_trip(model):
    doc = json.loads(json.dumps(model.to_dict()))
    assert model_from_dict(doc) == model


def test_unknown_kind():
    with pytest.raises(SceneryError):
        model_from_dict({"kind": "levy"})


def test_invalid_parameters():
    with pytest.raises(SceneryError):
        IteratedFunction(1.0)
    with pytest.raises(SceneryError):
        DoublingMap(bits=65)
    with pytest.raises(SceneryError):
        LinearProcess("polynomial", 0.9)
