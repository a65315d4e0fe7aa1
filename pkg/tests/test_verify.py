import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special, stats

from rwrs_lab.scenery import IID
from rwrs_lab.verify import (CheckResult, VerificationReport, brute_force_alpha, check_a2_suite,
                             check_exact_identities, check_fdd_convergence, check_second_moment_exact,
                             check_tightness_moment, kolmogorov_sf, ks_two_sample, run_suite)
from rwrs_lab.walk import IncrementLaw


@pytest.mark.parametrize("lam", [0.05, 0.3, 0.6, 0.99, 1.0, 1.2, 1.8, 3.0, 6.0])
def test_kolmogorov_series_against_scipy(lam):
    assert kolmogorov_sf(lam) == pytest.approx(special.kolmogorov(lam), rel=1e-9, abs=1e-15)


def test_kolmogorov_edges():
    assert kolmogorov_sf(0.0) == 1.0
    assert kolmogorov_sf(-1.0) == 1.0
    assert kolmogorov_sf(50.0) == 0.0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000), st.integers(5, 400), st.integers(5, 400))
def test_ks_statistic_against_scipy(seed, na, nb):
    rng = np.random.default_rng(seed)
    a, b = rng.standard_normal(na), rng.standard_normal(nb) + 0.3
    ours = ks_two_sample(a, b)
    ref = stats.ks_2samp(a, b, method="asymp")
    assert ours.statistic == pytest.approx(ref.statistic, abs=1e-12)
    assert 0.0 <= ours.pvalue <= 1.0


def test_ks_pvalue_against_asymptotic_reference():
    rng = np.random.default_rng(0)
    a, b = rng.standard_normal(1000), rng.standard_normal(1200)
    res = ks_two_sample(a, b)
    lam = res.statistic * np.sqrt(1000 * 1200 / 2200)
    assert res.pvalue == pytest.approx(special.kolmogorov(lam), rel=1e-9)


def test_identical_samples():
    x = np.random.default_rng(1).standard_normal(300)
    res = ks_two_sample(x, x.copy())
    assert res.statistic == 0.0 and res.pvalue == 1.0


def test_ties_handled():
    res = ks_two_sample([0, 0, 1, 1], [0, 1, 1, 1])
    assert res.statistic == pytest.approx(0.25)


def test_empty_rejected():
    with pytest.raises(ValueError):
        ks_two_sample([], [1.0])


def test_null_calibration():
    rng = np.random.default_rng(2024)
    accepted = sum(ks_two_sample(rng.standard_normal(1000), rng.standard_normal(1000)).pvalue > 0.01
                   for _ in range(100))
    assert accepted >= 98


def test_power():
    rng = np.random.default_rng(7)
    assert ks_two_sample(rng.standard_normal(1000), rng.standard_normal(1000) + 1.0).pvalue < 1e-6


def test_brute_force_alpha():
    pos = np.array([0, 1, 0])
    assert [brute_force_alpha(pos, i) for i in (-1, 0, 1, 2)] == [2, 5, 2, 0]


def test_identity_checks_pass():
    res = check_exact_identities(IncrementLaw.from_atoms({-1: 2 / 3, 2: 1 / 3}), ns=(0, 3, 12, 200),
                                 replicates=10)
    assert res.passed and res.statistic == 0 and res.mandatory
    assert check_second_moment_exact(n_max=4).passed


def test_a2_suite_verdicts():
    assert all(c.passed for c in check_a2_suite())


def test_negative_sigma_aborts():
    with pytest.raises(ValueError):
        check_fdd_convergence(IID(), sigma_sq=-0.1, n=64, replicates=10)
    with pytest.raises(ValueError):
        check_fdd_convergence(IID(scale=0.0), sigma_sq=0.0, n=64, replicates=10)


def test_tightness_small_grid():
    res = check_tightness_moment(IID(), ns=(256, 512), grid=(0.5, 1.0), replicates=400)
    assert res.passed
    assert res.details["pairs"] == [(0.5, 1.0)]
    assert all(np.isfinite(res.details["max_by_n"]))


def test_report_serialization():
    a = CheckResult("a", 1.0, "<= 2", True, {"n": 3}, {"master": 9}, mandatory=True,
                    details={"arr": np.arange(3), "x": np.float64(np.inf)})
    b = CheckResult("b", 5.0, "<= 2", False, {"n": 3}, {"master": 9})
    rep = VerificationReport([a, b], {"seed": 9})
    assert rep.overall
    doc = json.loads(rep.to_json())
    assert doc["checks"][0]["details"]["arr"] == [0, 1, 2]
    assert doc["checks"][0]["seeds"] == {"master": 9}
    text = rep.to_text()
    assert "master=9" in text and "n=3" in text
    rep.checks[0].passed = False
    assert not rep.overall


def test_quick_suite_is_deterministic():
    a = run_suite(seed=42, quick=True)
    b = run_suite(seed=42, quick=True, threads=2)
    assert a.overall
    assert all(c.mandatory for c in a.checks)
    assert [c.statistic for c in a.checks] == [c.statistic for c in b.checks]
