"""
test_turning_points.py
Unit tests for uniwkb/services/semiclassical/turning_points.py
"""
import math

import pytest

from uniwkb.core.errors import UnsupportedTopologyError
from uniwkb.services.potentials.catalog import make_potential, user_defined_potential
from uniwkb.services.potentials.splitting import build_splitting, wkb_splitting
from uniwkb.services.semiclassical.turning_points import (
    BARRIER,
    WELL,
    PairComplexConj,
    PairReal,
    SingleReal,
    find_turning_points,
)


def test_oscillator_pair(oscillator):
    tps = find_turning_points(build_splitting(oscillator, 0.5))
    assert isinstance(tps.classification, PairReal)
    assert tps.extreme_kind == WELL
    assert tps.classification.x1 == pytest.approx(-1.0, rel=1e-12)
    assert tps.classification.x2 == pytest.approx(1.0, rel=1e-12)
    assert tps.center == pytest.approx(0.0, abs=1e-12)


def test_hydrogen_langer_pair(hydrogen):
    # g = 1/(4x²) − 2/x + 1 at E = −½: zeros are the roots of x² − 2x + ¼
    tps = find_turning_points(build_splitting(hydrogen, -0.5))
    x1, x2 = tps.real_points
    assert x1 == pytest.approx(1.0 - math.sqrt(0.75), rel=1e-10)
    assert x2 == pytest.approx(1.0 + math.sqrt(0.75), rel=1e-10)


def test_wkb_hydrogen_l0_opens_to_origin(hydrogen):
    tps = find_turning_points(wkb_splitting(hydrogen, -0.5))
    assert isinstance(tps.classification, SingleReal)
    assert tps.classification.x0 == pytest.approx(2.0, rel=1e-12)
    assert tps.open_to_origin


def test_barrier_below_top_is_real_pair(pt_barrier):
    tps = find_turning_points(build_splitting(pt_barrier, 1.0))
    assert isinstance(tps.classification, PairReal)
    assert tps.extreme_kind == BARRIER
    x1, x2 = tps.real_points
    assert x1 == pytest.approx(-x2, rel=1e-10)


def test_barrier_above_top_is_complex_pair(pt_barrier):
    tps = find_turning_points(build_splitting(pt_barrier, 3.0))
    assert isinstance(tps.classification, PairComplexConj)
    assert tps.classification.x1.imag < 0
    assert tps.classification.x2 == tps.classification.x1.conjugate()
    assert tps.is_pair
    assert tps.real_points == ()


def test_coalesced_at_effective_top(pt_barrier):
    # improved top: 2v0 − α²/4 = 2E  →  E = 2.5 − 1/8
    tps = find_turning_points(build_splitting(pt_barrier, 2.375))
    assert tps.coalesced


def test_linear_potential_single_point():
    spec = user_defined_potential("x", domain="full-line")
    tps = find_turning_points(build_splitting(spec, 1.5))
    assert isinstance(tps.classification, SingleReal)
    assert tps.classification.x0 == pytest.approx(1.5, rel=1e-12)


def test_four_turning_points_unsupported():
    spec = user_defined_potential("x**4 - 4*x**2", domain="full-line")
    with pytest.raises(UnsupportedTopologyError):
        find_turning_points(wkb_splitting(spec, -1.0))


def test_pt_well_threshold_state_open_both_ways():
    spec = make_potential("poschl-teller-well", {"v0": -10})
    tps = find_turning_points(build_splitting(spec, 0.0))
    assert tps.classification is None
    assert tps.open_to_infinity and tps.open_to_negative_infinity
