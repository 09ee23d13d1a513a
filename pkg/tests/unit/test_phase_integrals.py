"""
test_phase_integrals.py
Unit tests for uniwkb/services/semiclassical/phase_integrals.py and maps.py
"""
import math

import numpy as np
import pytest

from uniwkb.core.errors import ClassificationError, ValidationError
from uniwkb.services.potentials.catalog import user_defined_potential
from uniwkb.services.potentials.splitting import build_splitting, wkb_splitting
from uniwkb.services.semiclassical.maps import (
    invert_zeta,
    xi_of_x,
    zeta_antiderivative,
    zeta_of_x,
    zeta_on_grid,
)
from uniwkb.services.semiclassical.phase_integrals import (
    abs_sqrt_integral,
    phase_integral_complex,
    phase_integral_real,
    zeta0_squared,
)
from uniwkb.services.semiclassical.turning_points import find_turning_points


# ── Phase integrals ───────────────────────────────────────────────────────────

def test_oscillator_phase_is_half_circle(oscillator):
    # ∫√(1 − x²) over [−1, 1] for g = x² − 1
    splitting = build_splitting(oscillator, 0.5)
    phase = phase_integral_real(splitting, -1.0, 1.0, -1)
    assert phase.value == pytest.approx(math.pi / 2.0, rel=1e-11)
    assert phase.ok


def test_phase_integral_sign_checked(oscillator):
    splitting = build_splitting(oscillator, 0.5)
    with pytest.raises(ClassificationError):
        phase_integral_real(splitting, -1.0, 1.0, 1)
    with pytest.raises(ValidationError):
        phase_integral_real(splitting, 1.0, -1.0, -1)
    with pytest.raises(ValidationError):
        phase_integral_real(splitting, -1.0, 1.0, 0)


def test_abs_sqrt_integral_is_signed(oscillator):
    splitting = build_splitting(oscillator, 0.5)
    forward, _ = abs_sqrt_integral(splitting, -1.0, 1.0)
    backward, _ = abs_sqrt_integral(splitting, 1.0, -1.0)
    assert forward == pytest.approx(-backward)


def test_zeta0_squared_well_is_2n_plus_1(oscillator):
    for n in range(4):
        splitting = build_splitting(oscillator, n + 0.5)
        tps = find_turning_points(splitting)
        assert zeta0_squared(tps, splitting).value == pytest.approx(2 * n + 1, rel=1e-10)


def test_zeta0_squared_barrier_signs(pt_barrier):
    below = build_splitting(pt_barrier, 1.0)
    above = build_splitting(pt_barrier, 3.0)
    assert zeta0_squared(find_turning_points(below), below).value > 0
    assert zeta0_squared(find_turning_points(above), above).value < 0


def test_inverted_oscillator_complex_phase():
    # V = −x²/2 gives g = −x² − 2E and q = 0, so ζ0² = −2E exactly
    spec = user_defined_potential("-x**2/2", domain="full-line")
    splitting = build_splitting(spec, 0.7)
    tps = find_turning_points(splitting)
    assert zeta0_squared(tps, splitting).value == pytest.approx(-1.4, rel=1e-9)


def test_complex_phase_along_imaginary_axis():
    # g = y² − 1.4 on x = iy: a half disc of radius √1.4
    spec = user_defined_potential("-x**2/2", domain="full-line")
    splitting = build_splitting(spec, 0.7)
    root = math.sqrt(1.4)
    phase = phase_integral_complex(splitting, -1j * root, 1j * root)
    assert phase.value == pytest.approx(0.7 * math.pi, rel=1e-9)
    assert phase.path[0] == "complex"


def test_zeta0_squared_needs_pair():
    spec = user_defined_potential("x", domain="full-line")
    splitting = wkb_splitting(spec, 1.0)
    with pytest.raises(ClassificationError):
        zeta0_squared(find_turning_points(splitting), splitting)


# ── ξ and ζ maps ──────────────────────────────────────────────────────────────

def test_xi_is_identity_for_linear_potential():
    # g = 2(x − E): ξ = 2^{1/3}(x − E)
    spec = user_defined_potential("x", domain="full-line")
    splitting = wkb_splitting(spec, 1.0)
    for x in (-2.0, 0.5, 3.0):
        assert xi_of_x(splitting, 1.0, x) == pytest.approx(2.0**(1.0 / 3.0) * (x - 1.0), rel=1e-10)


def test_zeta_antiderivative_inverse():
    for z0sq in (3.0, 0.0, -2.0):
        for zeta in (-4.0, -0.5, 0.3, 5.0):
            assert invert_zeta(zeta_antiderivative(zeta, z0sq), z0sq) == pytest.approx(zeta, abs=1e-12)


def test_zeta_is_linear_for_oscillator(oscillator):
    # g = x² − 2E is already the comparison function ζ² − ζ0², so ζ = x
    splitting = build_splitting(oscillator, 1.5)
    tps = find_turning_points(splitting)
    z0sq = zeta0_squared(tps, splitting).value
    assert z0sq == pytest.approx(3.0, rel=1e-10)
    xs = np.array([-3.0, -1.0, 0.0, 0.7, 2.5])
    grid = zeta_on_grid(splitting, tps, xs, z0sq)
    assert grid == pytest.approx(xs, abs=1e-8)
    assert zeta_of_x(splitting, tps, 0.7, z0sq) == pytest.approx(0.7, abs=1e-8)
