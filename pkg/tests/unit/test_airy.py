"""
test_airy.py
Unit tests for uniwkb/services/specfun/airy.py
"""
import math

import numpy as np
import pytest
from scipy.special import airy, airye

from uniwkb.core.errors import SpecialFunctionOverflowError, ValidationError
from uniwkb.services.specfun.airy import (
    airy_ai,
    airy_all,
    airy_asymptotic,
    airy_bi,
    airy_series,
)
from uniwkb.services.specfun.values import ASYMPTOTIC, ODE_CONTINUED, SERIES


# ── Wronskian ─────────────────────────────────────────────────────────────────

@pytest.mark.parametrize("x", [-10.0, -3.0, 0.5, 6.0, 12.0])
def test_wronskian_is_one_over_pi(x):
    # scaled logs cancel pairwise: Ai·e^{ζ} against Bi·e^{−ζ}
    ai, aip, bi, bip = airy_all(x, scaled=True)
    assert ai.log_scale == -bi.log_scale
    assert ai.value * bip.value - aip.value * bi.value == pytest.approx(1.0 / math.pi, abs=1e-11)


# ── Values ────────────────────────────────────────────────────────────────────

@pytest.mark.parametrize("x", [0.0, 1.0, 4.0, 7.5, 20.0])
def test_scaled_values_match_scipy(x):
    ref = airye(x)
    ours = airy_all(x, scaled=True)
    for value, expected in zip(ours, ref):
        assert value.value == pytest.approx(float(expected), rel=1e-9, abs=1e-10)


def test_unscaled_values_match_scipy():
    for x in (-15.0, -7.0, -2.0, -1.0, 0.0, 2.0):
        ai, aip, bi, bip = airy(x)
        assert airy_ai(x).value == pytest.approx(float(ai), rel=1e-9, abs=1e-10)
        assert airy_bi(x).value == pytest.approx(float(bi), rel=1e-9, abs=1e-10)
        assert airy_ai(x).log_scale == 0.0


def test_ai_decays_without_overflow():
    value = airy_ai(30.0)
    assert 0.0 < value.value < 1e-40
    assert not value.scaled


def test_series_and_asymptotic_agree_in_overlap():
    x = -7.0
    assert airy_series(x) == pytest.approx(airy_asymptotic(x), rel=1e-7, abs=1e-8)


# ── Regimes ───────────────────────────────────────────────────────────────────

def test_regime_reported():
    assert airy_ai(3.0).regime == SERIES
    assert airy_ai(-6.0).regime == ODE_CONTINUED
    assert airy_ai(10.0).regime == ASYMPTOTIC
    assert airy_ai(-10.0).regime == ASYMPTOTIC


def test_error_estimate_is_small():
    for x in (-9.0, -5.0, 0.3, 5.0, 9.0):
        value = airy_ai(x, scaled=True)
        assert value.error <= 1e-10 * (abs(value.value) + 1.0)


# ── Failure modes ─────────────────────────────────────────────────────────────

def test_bi_overflow_carries_scaled_value():
    # 2/3·200^{3/2} ≈ 1886 > log(max double)
    with pytest.raises(SpecialFunctionOverflowError) as exc_info:
        airy_bi(200.0)
    err = exc_info.value
    assert err.log_scale == pytest.approx(2.0 / 3.0 * 200.0**1.5)
    assert err.scaled_value == pytest.approx(float(airye(200.0)[2]), rel=1e-9)
    assert np.isfinite(airy_bi(200.0, scaled=True).value)


def test_complex_argument_rejected():
    with pytest.raises(ValidationError):
        airy_ai(1.0 + 1.0j)
    with pytest.raises(ValidationError):
        airy_ai(math.nan)
