"""
test_grids.py — Unit tests for energy/position grids and the tail-corrected trapezoid rule.
"""
import math

import numpy as np
import pytest

from uniwkb.core.errors import ValidationError
from uniwkb.utils.grids import (
    BARRIER_ENERGY_STEPS,
    default_barrier_energies,
    default_x_grid,
    energy_grid,
    trapezoid_with_tails,
    x_grid,
)


def test_energy_grid_inclusive():
    grid = energy_grid(0.1, 3.0, 30)
    assert len(grid) == 30
    assert grid[0] == pytest.approx(0.1)
    assert grid[-1] == pytest.approx(3.0)


def test_energy_grid_single_step():
    assert list(energy_grid(1.0, 2.0, 1)) == [1.0]


@pytest.mark.parametrize("emin, emax, steps", [(2.0, 1.0, 10), (0.0, 1.0, 0), (math.nan, 1.0, 5)])
def test_energy_grid_rejects_bad_input(emin, emax, steps):
    with pytest.raises(ValidationError):
        energy_grid(emin, emax, steps)


def test_x_grid_needs_two_points():
    with pytest.raises(ValidationError):
        x_grid(0.0, 1.0, 1)
    with pytest.raises(ValidationError):
        x_grid(1.0, 1.0, 10)


def test_default_barrier_energies_stay_below_peak():
    energies = default_barrier_energies(2.5)
    assert len(energies) == BARRIER_ENERGY_STEPS
    assert energies[0] == pytest.approx(0.06 * 2.5)
    assert energies[-1] < 2.5


def test_default_x_grid_half_line_starts_above_origin():
    grid = default_x_grid([0.5, 2.0], 1.0, half_line=True, points=101)
    assert grid[0] == pytest.approx(1e-3)
    assert grid[-1] == pytest.approx(6.0)


def test_default_x_grid_full_line_margin():
    grid = default_x_grid([-1.0, 1.0], 2.0, half_line=False, points=11)
    assert grid[0] == pytest.approx(-9.0)
    assert grid[-1] == pytest.approx(9.0)


def test_trapezoid_with_tails_recovers_gaussian_norm():
    xs = np.linspace(-8.0, 8.0, 4001)
    density = np.exp(-xs**2)
    assert trapezoid_with_tails(xs, density) == pytest.approx(math.sqrt(math.pi), rel=1e-8)


def test_trapezoid_tail_adds_exponential_remainder():
    # e^{-2x} on [0, 1] plus its tail beyond 1 integrates to 1/2
    xs = np.linspace(0.0, 1.0, 20001)
    density = np.exp(-2.0 * xs)
    assert trapezoid_with_tails(xs, density, right_rate=1.0) == pytest.approx(0.5, rel=1e-6)


def test_trapezoid_rejects_mismatched_arrays():
    with pytest.raises(ValidationError):
        trapezoid_with_tails([0.0, 1.0], [1.0])
