"""
test_uniform.py
Unit tests for uniwkb/services/wavefunction/uniform.py:
bound states in wells, barrier waves and single-turning-point solutions.
"""
import math

import numpy as np
import pytest
from scipy.special import airy

from uniwkb.core.errors import BoundaryError, OffShellError, ValidationError
from uniwkb.services.potentials.catalog import make_potential, user_defined_potential
from uniwkb.services.potentials.spectra import exact_spectrum
from uniwkb.services.potentials.splitting import build_splitting, wkb_splitting
from uniwkb.services.semiclassical.error_control import wkb_condition
from uniwkb.services.semiclassical.phase_integrals import zeta0_squared
from uniwkb.services.semiclassical.transmission import transmission_improved
from uniwkb.services.semiclassical.turning_points import find_turning_points
from uniwkb.services.wavefunction.uniform import (
    ALLOWED,
    COEFFICIENTS,
    DECAY_AT_INFINITY,
    FORBIDDEN,
    INCIDENT_FROM_LEFT,
    RAW,
    UNIT_INCIDENT_FLUX,
    UNIT_L2,
    BoundaryCondition,
    barrier_flux_ratio,
    node_count,
    psi_barrier,
    psi_single_tp,
    psi_well,
    wkb_wavefunction,
)
from uniwkb.utils.grids import default_x_grid, trapezoid_with_tails


def _well_state(spec, n, points=401):
    E = exact_spectrum(spec, n)
    splitting = build_splitting(spec, E)
    tps = find_turning_points(splitting)
    xs = default_x_grid(tps.real_points, spec.length_scale, spec.half_line, points)
    return splitting, tps, xs, psi_well(splitting, tps, n, xs)


# ── Bound states ──────────────────────────────────────────────────────────────

@pytest.mark.parametrize("n", range(6))
def test_oscillator_nodes(oscillator, n):
    *_, samples = _well_state(oscillator, n)
    assert node_count(samples) == n


@pytest.mark.parametrize("n", range(4))
def test_poschl_teller_nodes(pt_well, n):
    *_, samples = _well_state(pt_well, n)
    assert node_count(samples) == n


@pytest.mark.parametrize("n", range(6))
def test_hydrogen_nodes(hydrogen, n):
    *_, samples = _well_state(hydrogen, n, points=1201)
    assert node_count(samples) == n
    assert all(s.x > 0 for s in samples)


def test_morse_ground_state_has_no_nodes(morse):
    *_, samples = _well_state(morse, 0)
    assert node_count(samples) == 0


@pytest.mark.parametrize("n", range(3))
def test_eckart_nodes(eckart, n):
    *_, samples = _well_state(eckart, n, points=1201)
    assert node_count(samples) == n
    assert all(s.x > 0 for s in samples)


@pytest.mark.parametrize("l", [0, 1])
@pytest.mark.parametrize("n", range(6))
def test_oscillator_d_nodes(l, n):
    spec = make_potential("oscillator-d", {"D": 3, "l": l})
    *_, samples = _well_state(spec, n, points=1201)
    assert node_count(samples) == n


@pytest.mark.parametrize("n", range(6))
def test_hydrogen_l2_nodes(n):
    spec = make_potential("hydrogen", {"l": 2})
    *_, samples = _well_state(spec, n, points=1201)
    assert node_count(samples) == n


def test_oscillator_ground_state_is_exact(oscillator):
    # ζ = x and a unit prefactor leave the Gaussian π^{−1/4}e^{−x²/2}
    _, _, xs, samples = _well_state(oscillator, 0, points=801)
    expected = math.pi ** -0.25 * np.exp(-xs**2 / 2.0)
    values = np.array([s.value for s in samples])
    assert values == pytest.approx(expected, abs=1e-4)


def test_unit_norm(pt_well):
    splitting, _, xs, samples = _well_state(pt_well, 2)
    density = np.array([abs(s.value) ** 2 for s in samples])
    assert trapezoid_with_tails(xs, density) == pytest.approx(1.0, rel=1e-3)


def test_largest_sample_positive(pt_well):
    *_, samples = _well_state(pt_well, 1)
    peak = max(samples, key=lambda s: abs(s.value))
    assert peak.value > 0


def test_regions_labelled(oscillator):
    *_, samples = _well_state(oscillator, 0)
    by_x = {round(s.x, 6): s.region for s in samples}
    assert by_x[round(min(by_x), 6)] == FORBIDDEN
    centre = min(by_x, key=abs)
    assert by_x[centre] == ALLOWED


def test_off_shell_energy_rejected(oscillator):
    splitting = build_splitting(oscillator, 0.7)
    tps = find_turning_points(splitting)
    with pytest.raises(OffShellError):
        psi_well(splitting, tps, 0, np.linspace(-3.0, 3.0, 11))


def test_well_normalization_options(oscillator):
    splitting = build_splitting(oscillator, 0.5)
    tps = find_turning_points(splitting)
    with pytest.raises(ValidationError):
        psi_well(splitting, tps, 0, [0.0], normalization=UNIT_INCIDENT_FLUX)
    with pytest.raises(ValidationError):
        psi_well(splitting, tps, -1, [0.0])


def test_far_tail_keeps_its_log_scale(oscillator):
    # raw ψ_1 = U(−3/2, √2x) = √2·x·e^{−x²/2}; √2·45 is past the tabulated range
    splitting = build_splitting(oscillator, 1.5)
    tps = find_turning_points(splitting)
    samples = psi_well(splitting, tps, 1, np.linspace(-45.0, 45.0, 1801), normalization=RAW)
    for s in (samples[0], samples[-1]):
        assert s.psi != 0
        assert s.log_scale < -700.0
        log_magnitude = math.log(abs(s.psi)) + s.log_scale
        assert log_magnitude == pytest.approx(math.log(math.sqrt(2.0) * 45.0) - 45.0**2 / 2.0, abs=1e-6)
    assert node_count(samples) == 1


# ── Barrier ───────────────────────────────────────────────────────────────────

@pytest.mark.parametrize("E", np.linspace(0.05, 6.0, 10))
def test_barrier_flux_ratio_matches_connection_formula(pt_barrier, E):
    splitting = build_splitting(pt_barrier, E)
    tps = find_turning_points(splitting)
    z0sq = zeta0_squared(tps, splitting).value
    ratio = barrier_flux_ratio(splitting, tps, np.linspace(-8.0, 8.0, 5))
    assert ratio == pytest.approx(1.0 / (1.0 + math.exp(math.pi * z0sq)), rel=1e-6)
    assert ratio == pytest.approx(transmission_improved(pt_barrier, E), rel=1e-6)


def test_incident_wave_is_complex(pt_barrier):
    splitting = build_splitting(pt_barrier, 1.5)
    tps = find_turning_points(splitting)
    samples = psi_barrier(splitting, tps, BoundaryCondition(INCIDENT_FROM_LEFT, UNIT_INCIDENT_FLUX),
                          np.linspace(-6.0, 6.0, 61))
    assert any(abs(np.imag(s.value)) > 0 for s in samples)
    # transmitted side: a single travelling wave of constant modulus
    right = [abs(s.value) for s in samples if s.x > 5.0]
    assert max(right) == pytest.approx(min(right), rel=1e-2)


def test_coefficient_barrier_wave_is_real(pt_barrier):
    splitting = build_splitting(pt_barrier, 1.5)
    tps = find_turning_points(splitting)
    samples = psi_barrier(splitting, tps, BoundaryCondition(COEFFICIENTS, RAW, a=1.0, b=0.5),
                          np.linspace(-4.0, 4.0, 21))
    assert all(isinstance(s.value, float) for s in samples)


def test_barrier_rejects_square_integrable(pt_barrier):
    splitting = build_splitting(pt_barrier, 1.5)
    tps = find_turning_points(splitting)
    with pytest.raises(BoundaryError):
        psi_barrier(splitting, tps, BoundaryCondition(INCIDENT_FROM_LEFT, UNIT_L2), [0.0])
    with pytest.raises(BoundaryError):
        psi_barrier(splitting, tps, BoundaryCondition(DECAY_AT_INFINITY, RAW), [0.0])


# ── Single turning point ──────────────────────────────────────────────────────

@pytest.fixture
def linear():
    return user_defined_potential("x", domain="full-line")


def test_linear_potential_is_airy(linear):
    # g = 2x: ξ = 2^{1/3}x and (ξ/g)^{1/4} = 2^{−1/6}
    splitting = wkb_splitting(linear, 0.0)
    xs = np.linspace(-6.0, 4.0, 41)
    samples = psi_single_tp(splitting, 0.0, BoundaryCondition(DECAY_AT_INFINITY, RAW), xs)
    expected = 2.0 ** (-1.0 / 6.0) * airy(2.0 ** (1.0 / 3.0) * xs)[0]
    assert np.array([s.value for s in samples]) == pytest.approx(expected, rel=1e-6, abs=1e-12)


def test_uniform_matches_wkb_away_from_turning_point(linear):
    splitting = wkb_splitting(linear, 0.0)
    xs = np.concatenate([np.linspace(-30.0, -8.0, 23), np.linspace(6.0, 12.0, 7)])
    samples = psi_single_tp(splitting, 0.0, BoundaryCondition(DECAY_AT_INFINITY, RAW), xs)
    for s in samples:
        assert wkb_condition(linear, 0.0, s.x) < 1e-3
        envelope = abs(float(splitting(s.x))) ** -0.25 / math.sqrt(math.pi)
        if s.x > 0:
            envelope *= math.exp(-abs(s.map_value) ** 1.5 * 2.0 / 3.0)
        assert abs(s.value - wkb_wavefunction(splitting, 0.0, s.x)) <= 1e-2 * envelope


def test_single_tp_rejects_incident_wave(linear):
    splitting = wkb_splitting(linear, 0.0)
    with pytest.raises(BoundaryError):
        psi_single_tp(splitting, 0.0, BoundaryCondition(INCIDENT_FROM_LEFT, RAW), [1.0])
    with pytest.raises(BoundaryError):
        psi_single_tp(splitting, 0.0, BoundaryCondition(DECAY_AT_INFINITY, UNIT_L2), [1.0])


# ── Boundary conditions ───────────────────────────────────────────────────────

def test_boundary_condition_validation():
    with pytest.raises(ValidationError):
        BoundaryCondition("nowhere")
    with pytest.raises(ValidationError):
        BoundaryCondition(DECAY_AT_INFINITY, "unit-energy")
    with pytest.raises(ValidationError):
        BoundaryCondition(COEFFICIENTS, RAW, a=1.0)
    with pytest.raises(ValidationError):
        BoundaryCondition(COEFFICIENTS, UNIT_L2, a=1.0, b=0.0)
    with pytest.raises(ValidationError):
        BoundaryCondition(DECAY_AT_INFINITY, RAW, a=1.0)
