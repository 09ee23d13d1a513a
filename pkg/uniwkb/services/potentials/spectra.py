"""
spectra.py
----------
Closed-form spectra of the catalog potentials.

    kind                 exact E_n                                  WKB (q ≡ 0) E_n
    hydrogen             −me⁴/(2ħ²(n+l+1)²)                          −me⁴/(2ħ²(n+½+√(l(l+1)))²)
    oscillator-d         (2n + l + D/2)ħω                            (2n + √L² + 1)ħω
    morse                −(ħ²α²/2m)(κ − n − ½)²                      same as exact
    poschl-teller-well   −(ħ²α²/8m)(√(1+λ) − (2n+1))²                −(ħ²α²/8m)(√λ − (2n+1))²
    eckart               −mv1²/(2ħ²α²s) − ħ²α²s/(2m), s=(n+β)²       β → β_w
    pure-oscillator-1d   (n + ½)ħω                                   same as exact

with κ = √(2m)|v1|/(2αħ√v0), λ = −8mv0/(ħ²α²) for the well,
β = (1 + √(1 + 8mv0/(ħ²α²)))/2 and β_w = (1 + √(8mv0/(ħ²α²)))/2.

A state sitting exactly on the continuum threshold counts as bound (marginal).
"""
from __future__ import annotations

import math
from typing import Optional

from uniwkb.core.errors import NoBoundStateError, UnsupportedPotentialError, ValidationError
from uniwkb.services.potentials.catalog import PotentialSpec

_METHODS = ("exact", "wkb")
_MARGIN = 1e-12


def _check_n(n) -> int:
    if int(n) != n or n < 0:
        raise ValidationError(f"quantum number must be a non-negative integer, got {n!r}")
    return int(n)


def _no_state(spec: PotentialSpec, n: int) -> NoBoundStateError:
    return NoBoundStateError(f"{spec.kind} has no bound state with n={n} for {spec.params.as_dict()}")


def _morse(spec: PotentialSpec, n: int) -> float:
    p = spec.params
    if p.v1 >= 0:
        raise _no_state(spec, n)
    kappa = math.sqrt(2.0 * p.m) * abs(p.v1) / (2.0 * p.alpha * p.hbar * math.sqrt(p.v0))
    gap = kappa - n - 0.5
    if gap < -_MARGIN:
        raise _no_state(spec, n)
    return -(p.hbar**2 * p.alpha**2 / (2.0 * p.m)) * max(gap, 0.0)**2


def _poschl_teller(spec: PotentialSpec, n: int, wkb: bool) -> float:
    p = spec.params
    if spec.kind != "poschl-teller-well":
        raise _no_state(spec, n)
    lam = -8.0 * p.m * p.v0 / (p.alpha**2 * p.hbar**2)
    root = math.sqrt(lam) if wkb else math.sqrt(1.0 + lam)
    gap = root - (2 * n + 1)
    if gap < -_MARGIN:
        raise _no_state(spec, n)
    return -(p.alpha**2 * p.hbar**2 / (8.0 * p.m)) * max(gap, 0.0)**2


def _eckart(spec: PotentialSpec, n: int, wkb: bool) -> float:
    p = spec.params
    lam = 8.0 * p.m * p.v0 / (p.alpha**2 * p.hbar**2)
    beta = (1.0 + (math.sqrt(lam) if wkb else math.sqrt(1.0 + lam))) / 2.0
    s = (n + beta)**2
    depth = -p.m * p.v1 / (p.hbar**2 * p.alpha**2)
    if s > depth * (1.0 + _MARGIN):
        raise _no_state(spec, n)
    u = p.hbar**2 * p.alpha**2 * s / p.m
    return -p.v1**2 / (2.0 * u) - u / 2.0


def _spectrum(spec: PotentialSpec, n: int, wkb: bool) -> float:
    n = _check_n(n)
    p = spec.params
    kind = spec.kind
    if kind == "hydrogen":
        centrifugal = math.sqrt(p.l * (p.l + 1)) + 0.5 if wkb else p.l + 1.0
        return -p.m * p.e**4 / (2.0 * p.hbar**2 * (n + centrifugal)**2)
    if kind == "oscillator-d":
        level = 2 * n + math.sqrt(p.centrifugal_strength) + 1.0 if wkb else 2 * n + p.l + p.D / 2.0
        return level * p.hbar * p.omega
    if kind == "morse":
        return _morse(spec, n)
    if kind in ("poschl-teller-well", "poschl-teller-barrier"):
        return _poschl_teller(spec, n, wkb)
    if kind == "eckart":
        return _eckart(spec, n, wkb)
    if kind == "pure-oscillator-1d":
        return (n + 0.5) * p.hbar * p.omega
    raise UnsupportedPotentialError(f"no closed-form spectrum for {kind!r}")


def exact_spectrum(spec: PotentialSpec, n: int) -> float:
    """Exact E_n of a catalog potential."""
    return _spectrum(spec, n, wkb=False)


def wkb_spectrum_closed_form(spec: PotentialSpec, n: int) -> float:
    """Closed-form conventional WKB (q ≡ 0) E_n of a catalog potential."""
    return _spectrum(spec, n, wkb=True)


def closed_form(spec: PotentialSpec, n: int, method: str = "exact") -> float:
    if method not in _METHODS:
        raise ValidationError(f"closed-form method must be one of {list(_METHODS)}, got {method!r}")
    return _spectrum(spec, n, wkb=(method == "wkb"))


def bound_state_count(spec: PotentialSpec, method: str = "exact") -> Optional[int]:
    """Number of bound states, marginal threshold state included; None if infinite."""
    if method not in _METHODS:
        raise ValidationError(f"closed-form method must be one of {list(_METHODS)}, got {method!r}")
    if not spec.is_catalog:
        raise UnsupportedPotentialError(f"no closed-form spectrum for {spec.kind!r}")
    if math.isinf(spec.threshold):
        return None
    if spec.kind == "hydrogen":
        return None
    count = 0
    while True:
        try:
            closed_form(spec, count, method)
        except NoBoundStateError:
            return count
        count += 1
