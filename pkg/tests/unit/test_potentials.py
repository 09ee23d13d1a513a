"""
test_potentials.py
Unit tests for uniwkb/services/potentials: the catalog, q selection,
the splitting g = 2m(V − E)/ħ² − q and the closed-form spectra.
"""
import math

import numpy as np
import pytest

from uniwkb.core.errors import (
    DegenerateExtremeError,
    DomainError,
    NoBoundStateError,
    UnsupportedPotentialError,
    ValidationError,
)
from uniwkb.services.potentials.catalog import (
    CATALOG_KINDS,
    HALF_LINE,
    PhysicalParams,
    eval_potential,
    langer_potential,
    make_potential,
    user_defined_potential,
)
from uniwkb.services.potentials.q_selection import QProvenance, q0_from_extreme, select_q, zero_q
from uniwkb.services.potentials.smooth import SmoothFunction
from uniwkb.services.potentials.spectra import (
    bound_state_count,
    exact_spectrum,
    wkb_spectrum_closed_form,
)
from uniwkb.services.potentials.splitting import (
    build_splitting,
    q_smallness_report,
    splitting_identity_residual,
    wkb_splitting,
)


# ── Parameters ────────────────────────────────────────────────────────────────

def test_params_from_strings():
    p = PhysicalParams.from_mapping({"l": "2", "alpha": "1.5"})
    assert p.l == 2
    assert p.alpha == 1.5


@pytest.mark.parametrize("mapping", [{"m": "0"}, {"hbar": "-1"}, {"l": "1.5"}, {"mass": "1"}, {"v0": "abc"}])
def test_params_rejected(mapping):
    with pytest.raises(ValidationError):
        PhysicalParams.from_mapping(mapping)


def test_centrifugal_strength_in_three_dimensions():
    assert PhysicalParams(l=3, D=3).centrifugal_strength == 12.0


# ── Catalog ───────────────────────────────────────────────────────────────────

def test_every_catalog_kind_builds():
    for kind in CATALOG_KINDS:
        spec = make_potential(kind)
        assert spec.is_catalog
        assert spec.length_scale > 0


def test_kind_defaults(pt_well, eckart):
    assert make_potential("morse").params.v1 == -2.0
    assert pt_well.params.v0 == -10.0
    assert make_potential("eckart").params.v1 == -20.0


@pytest.mark.parametrize("kind, params", [
    ("poschl-teller-well", {"v0": 1}),
    ("poschl-teller-barrier", {"v0": -1}),
    ("morse", {"v0": -1, "v1": -2}),
    ("oscillator-d", {"l": 0, "D": 1}),
])
def test_kind_specific_validity(kind, params):
    with pytest.raises(ValidationError):
        make_potential(kind, params)


def test_unknown_kind():
    with pytest.raises(ValidationError, match="must be one of"):
        make_potential("square-well")


def test_hydrogen_values_and_domain(hydrogen):
    assert hydrogen.domain == HALF_LINE
    assert hydrogen.threshold == 0.0
    assert eval_potential(hydrogen, 2.0) == pytest.approx(-0.5)
    with pytest.raises(DomainError):
        eval_potential(hydrogen, -1.0)


def test_exact_derivatives(morse):
    # V = e^{-2x} - 2e^{-x}: V'(0) = 0, V''(0) = 2
    assert morse.potential.derivative(0.0, 1) == pytest.approx(0.0, abs=1e-15)
    assert morse.potential.derivative(0.0, 2) == pytest.approx(2.0)


def test_pole_strength_from_catalog():
    spec = make_potential("hydrogen", {"l": 2})
    assert spec.pole_strength == 6.0


# ── User-defined potentials ───────────────────────────────────────────────────

def test_user_expression_has_exact_derivatives():
    spec = user_defined_potential("x**4 - 2*x**2", domain="full-line")
    assert spec.potential.derivative(1.0, 2) == pytest.approx(8.0)
    assert spec.potential.derivative(1.0, 4) == pytest.approx(24.0)


def test_user_callable_uses_finite_differences():
    spec = user_defined_potential(lambda x: np.cos(x), domain="full-line")
    assert spec.potential.derivative(0.3, 1) == pytest.approx(-math.sin(0.3), rel=1e-8)
    assert spec.potential.derivative(0.3, 2) == pytest.approx(-math.cos(0.3), rel=1e-6)


def test_user_pole_strength_derived():
    spec = user_defined_potential("-1/x + 3/x**2", domain="half-line", pole_order=2)
    assert spec.pole_strength == pytest.approx(6.0)


def test_user_pole_order_rejected():
    with pytest.raises(UnsupportedPotentialError):
        user_defined_potential("1/x", domain="half-line", pole_order=1)


def test_user_expression_with_stray_symbol():
    with pytest.raises(ValidationError):
        user_defined_potential("x**2 + y", domain="full-line")


def test_langer_potential_shifts_pole():
    spec = make_potential("hydrogen", {"l": 3})
    langer = langer_potential(spec)
    assert langer.pole_strength == pytest.approx(12.25)
    assert eval_potential(langer, 2.0) - eval_potential(spec, 2.0) == pytest.approx(1.0 / 32.0)


def test_langer_needs_pole(morse):
    with pytest.raises(ValidationError):
        langer_potential(morse)


# ── q selection ───────────────────────────────────────────────────────────────

def test_catalog_provenance(hydrogen, morse, eckart):
    assert select_q(hydrogen).provenance == QProvenance.POLE_RULE
    assert select_q(morse).provenance == QProvenance.EXTREME_RULE
    assert select_q(eckart).provenance == QProvenance.POLE_AND_EXTREME
    assert zero_q(morse).provenance == QProvenance.ZERO


def test_hydrogen_q_is_langer(hydrogen):
    q = select_q(hydrogen).q
    assert q(0.5) == pytest.approx(-1.0)


def test_extreme_rule_poschl_teller(pt_well, pt_barrier):
    for spec in (pt_well, pt_barrier):
        selection = select_q(spec)
        x_m = selection.extreme.x
        assert x_m == pytest.approx(0.0, abs=1e-10)
        assert q0_from_extreme(selection, x_m) == pytest.approx(0.25, rel=1e-9)


def test_extreme_rule_morse(morse):
    selection = select_q(morse)
    x_m = selection.extreme.x
    assert x_m == pytest.approx(0.0, abs=1e-10)
    assert q0_from_extreme(selection, x_m) == pytest.approx(0.0, abs=1e-9)


def test_extreme_kinds(pt_well, pt_barrier):
    assert select_q(pt_well).extreme.is_minimum
    assert not select_q(pt_barrier).extreme.is_minimum


def test_degenerate_extreme():
    g = SmoothFunction.from_expression("x**4")
    with pytest.raises(DegenerateExtremeError):
        q0_from_extreme(g, 0.0)


def test_user_q_satisfies_extreme_rule():
    spec = user_defined_potential("x**2/2 + x**4/10", domain="full-line", reference_energy=1.0)
    selection = select_q(spec)
    assert selection.provenance == QProvenance.USER
    x_m = selection.extreme.x
    assert q0_from_extreme(selection, x_m) == pytest.approx(float(selection.q(x_m)), rel=1e-8, abs=1e-12)


# ── Splitting ─────────────────────────────────────────────────────────────────

def test_splitting_identity(eckart):
    splitting = build_splitting(eckart, -5.0)
    xs = np.linspace(0.1, 10.0, 50)
    assert np.max(splitting_identity_residual(splitting, xs)) < 1e-13


def test_wkb_splitting_has_no_q(hydrogen):
    splitting = wkb_splitting(hydrogen, -0.1)
    assert splitting.q(1.0) == 0.0
    assert splitting(2.0) == pytest.approx(2.0 * (-0.5 + 0.1))


def test_splitting_rejects_nonfinite_energy(morse):
    with pytest.raises(ValidationError):
        build_splitting(morse, math.inf)


def test_q_small_away_from_turning_points(hydrogen):
    splitting = build_splitting(hydrogen, -0.125)
    report = q_smallness_report(splitting, [0.0, 8.0], distance=2.0)
    assert report.far_ratio < 1.0


# ── Closed-form spectra ───────────────────────────────────────────────────────

def test_hydrogen_spectrum():
    spec = make_potential("hydrogen", {"l": 1})
    assert exact_spectrum(spec, 0) == pytest.approx(-1.0 / 8.0)
    assert wkb_spectrum_closed_form(spec, 0) == pytest.approx(-0.5 / (0.5 + math.sqrt(2.0))**2)


def test_oscillator_d_spectrum():
    spec = make_potential("oscillator-d", {"l": 1, "D": 3})
    assert exact_spectrum(spec, 2) == pytest.approx(6.5)
    assert wkb_spectrum_closed_form(spec, 0) == pytest.approx(math.sqrt(2.0) + 1.0)


def test_morse_wkb_equals_exact(morse):
    for n in range(bound_state_count(morse)):
        assert wkb_spectrum_closed_form(morse, n) == exact_spectrum(morse, n)


def test_poschl_teller_counts(pt_well):
    # λ = 80: √81 = 9 so n ≤ 4 is bound
    assert bound_state_count(pt_well) == 5
    assert exact_spectrum(pt_well, 4) == pytest.approx(-0.125 * 0.0**2)
    with pytest.raises(NoBoundStateError):
        exact_spectrum(pt_well, 5)


def test_eckart_marginal_threshold_state():
    spec = make_potential("eckart", {"v0": 1, "v1": -4})
    assert exact_spectrum(spec, 0) == pytest.approx(-4.0)
    assert bound_state_count(spec) == 1
    with pytest.raises(NoBoundStateError):
        exact_spectrum(spec, 1)


def test_unbounded_spectrum_count(hydrogen, oscillator):
    assert bound_state_count(hydrogen) is None
    assert bound_state_count(oscillator) is None
