"""
test_transmission.py
Unit tests for uniwkb/services/semiclassical/transmission.py
"""
import math

import numpy as np
import pytest
from scipy.optimize import brentq

from uniwkb.core.errors import (
    ClassificationError,
    MethodInapplicableError,
    NoScatteringError,
    ValidationError,
)
from uniwkb.services.oracle.scattering import (
    numerical_transmission,
    poschl_teller_transmission_exact,
)
from uniwkb.services.potentials.catalog import make_potential
from uniwkb.services.semiclassical.transmission import (
    barrier_top_energy,
    poschl_teller_improved_closed_form,
    poschl_teller_wkb_closed_form,
    transmission_curve,
    transmission_errors,
    transmission_improved,
    transmission_wkb,
)
from uniwkb.utils.grids import BARRIER_ENERGY_FRACTIONS, default_barrier_energies


def _barrier(lam):
    """Pöschl–Teller barrier with 8mv0/(ħ²α²) = lam in natural units."""
    return make_potential("poschl-teller-barrier", {"v0": lam / 8.0})


# ── Closed forms ──────────────────────────────────────────────────────────────

@pytest.mark.parametrize("lam", [2.0, 10.0, 20.0])
def test_improved_matches_closed_form_across_the_peak(lam):
    spec = _barrier(lam)
    v0 = spec.params.v0
    for E in np.linspace(0.02 * v0, 2.0 * v0, 1000):
        expected = poschl_teller_improved_closed_form(spec.params, E)
        assert transmission_improved(spec, E) == pytest.approx(expected, rel=1e-8)


@pytest.mark.parametrize("lam", [2.0, 10.0, 20.0])
def test_wkb_matches_closed_form_below_the_peak(lam):
    spec = _barrier(lam)
    v0 = spec.params.v0
    for E in np.linspace(0.02 * v0, 0.98 * v0, 200):
        expected = poschl_teller_wkb_closed_form(spec.params, E)
        assert transmission_wkb(spec, E) == pytest.approx(expected, rel=1e-8)


def test_improved_is_one_half_at_effective_top(pt_barrier):
    top = barrier_top_energy(pt_barrier)
    assert top == pytest.approx(2.5 - 1.0 / 8.0, rel=1e-12)
    assert transmission_improved(pt_barrier, top) == pytest.approx(0.5, abs=1e-8)


def test_improved_needs_lambda_above_one():
    with pytest.raises(MethodInapplicableError):
        transmission_improved(_barrier(0.5), 0.01)


# ── Improved beats WKB against the exact result ───────────────────────────────

def test_improved_closer_than_wkb_below_peak(pt_barrier):
    energies = default_barrier_energies(pt_barrier.params.v0)
    improved = transmission_curve(pt_barrier, energies, "improved")
    wkb = transmission_curve(pt_barrier, energies, "wkb")
    exact = transmission_curve(pt_barrier, energies, "closed-form")
    err_improved = transmission_errors(improved, exact)
    err_wkb = transmission_errors(wkb, exact)
    assert np.all(err_improved < err_wkb)
    assert err_improved.max() <= 0.02


def _ordering_gap(spec, E):
    """|T_WKB − T| − |T_improved − T| against the exact closed form."""
    exact = poschl_teller_transmission_exact(spec.params, E)
    return (abs(poschl_teller_wkb_closed_form(spec.params, E) - exact)
            - abs(poschl_teller_improved_closed_form(spec.params, E) - exact))


def test_ordering_crossover_sits_deep_in_the_tunnelling_tail(pt_barrier):
    v0 = pt_barrier.params.v0
    crossover = brentq(lambda E: _ordering_gap(pt_barrier, E), 0.01 * v0, 0.1 * v0, xtol=1e-12)
    assert crossover / v0 == pytest.approx(0.03301, abs=2e-4)
    assert BARRIER_ENERGY_FRACTIONS[0] * v0 > crossover


def test_improved_beats_wkb_against_oracle_above_the_crossover(pt_barrier):
    v0 = pt_barrier.params.v0
    energies = np.linspace(0.04 * v0, 0.999 * v0, 100)
    for E in energies:
        oracle = numerical_transmission(pt_barrier, E)
        err_improved = abs(transmission_improved(pt_barrier, E) - oracle)
        err_wkb = abs(transmission_wkb(pt_barrier, E) - oracle)
        assert err_improved < err_wkb, E
        assert err_improved <= 0.02


@pytest.mark.parametrize("fraction", [0.002, 0.01, 0.02, 0.03])
def test_wkb_beats_improved_below_the_crossover(pt_barrier, fraction):
    E = fraction * pt_barrier.params.v0
    oracle = numerical_transmission(pt_barrier, E)
    err_improved = abs(transmission_improved(pt_barrier, E) - oracle)
    err_wkb = abs(transmission_wkb(pt_barrier, E) - oracle)
    assert err_wkb < err_improved


def test_closed_form_curve_uses_analytic_result(pt_barrier):
    curve = transmission_curve(pt_barrier, [1.0], "closed-form")
    assert curve.transmissions[0] == pytest.approx(poschl_teller_transmission_exact(pt_barrier.params, 1.0))


# ── Curves and edge cases ─────────────────────────────────────────────────────

def test_wkb_curve_is_nan_above_peak(pt_barrier):
    curve = transmission_curve(pt_barrier, [1.0, 3.0], "wkb")
    assert math.isfinite(curve.transmissions[0])
    assert math.isnan(curve.transmissions[1])


def test_wkb_raises_above_peak(pt_barrier):
    with pytest.raises(MethodInapplicableError):
        transmission_wkb(pt_barrier, 3.0)


def test_no_scattering_below_asymptote(pt_barrier, oscillator):
    with pytest.raises(NoScatteringError):
        transmission_improved(pt_barrier, -0.5)
    with pytest.raises(NoScatteringError):
        transmission_improved(oscillator, 1.0)


def test_half_line_has_no_transmission(hydrogen):
    with pytest.raises(MethodInapplicableError):
        transmission_improved(hydrogen, 0.5)
    with pytest.raises(MethodInapplicableError):
        transmission_curve(hydrogen, [0.5], "wkb")


def test_well_is_not_a_barrier(pt_well):
    with pytest.raises(ClassificationError):
        barrier_top_energy(pt_well)


def test_curve_validation(pt_barrier):
    with pytest.raises(ValidationError):
        transmission_curve(pt_barrier, [1.0], "bogus")
    with pytest.raises(ValidationError):
        transmission_curve(pt_barrier, [], "improved")


def test_errors_need_shared_grid(pt_barrier):
    a = transmission_curve(pt_barrier, [1.0], "improved")
    b = transmission_curve(pt_barrier, [1.5], "improved")
    with pytest.raises(ValidationError):
        transmission_errors(a, b)
