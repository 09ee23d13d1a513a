"""
maps.py
-------
The Liouville-type maps of the uniform approximation.

    ξ(x):  √|ξ| dξ = √|g| dx,            ξ(x0) = 0, sign ξ = sign g
    ζ(x):  √|ζ² − ζ0²| dζ = √|g| dx,      ζ(x1) = −|ζ0|, ζ(x2) = +|ζ0|

ζ is found by inverting the elementary antiderivative of √|ζ² − ζ0²| against
the accumulated x-integral.  For a complex or coalesced pair the map is
anchored at the real center of the pair, ζ(Re x_i) = 0.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from uniwkb.core.errors import ClassificationError, ConvergenceError
from uniwkb.services.potentials.splitting import Splitting
from uniwkb.services.semiclassical.phase_integrals import abs_sqrt_integral, zeta0_squared
from uniwkb.services.semiclassical.turning_points import PairReal, TurningPointSet

_BRACKET_STEPS = 60


# ── ξ ──────────────────────────────────────────────────────────────────────────

def xi_from_integral(integral: float, g_value: float) -> float:
    """ξ from |∫_{x0}^{x} √|g||, signed like g."""
    magnitude = (1.5 * abs(integral)) ** (2.0 / 3.0)
    return math.copysign(magnitude, g_value) if g_value != 0.0 else 0.0


def xi_of_x(splitting: Splitting, x0: float, x: float) -> float:
    if x == x0:
        return 0.0
    integral, _ = abs_sqrt_integral(splitting, x0, x)
    return xi_from_integral(integral, float(splitting(x)))


# ── ζ ──────────────────────────────────────────────────────────────────────────

def zeta_antiderivative(zeta: float, z0sq: float) -> float:
    """∫ √|v² − ζ0²| dv, anchored at −|ζ0| for ζ0² > 0 and at 0 otherwise."""
    if z0sq > 0.0:
        c = math.sqrt(z0sq)
        if zeta <= -c:
            r = math.sqrt(zeta * zeta - z0sq)
            return -0.5 * (-zeta * r - z0sq * math.log((-zeta + r) / c))
        if zeta < c:
            r = math.sqrt(z0sq - zeta * zeta)
            return 0.5 * (zeta * r + z0sq * math.asin(zeta / c)) + 0.25 * math.pi * z0sq
        r = math.sqrt(zeta * zeta - z0sq)
        return 0.5 * math.pi * z0sq + 0.5 * (zeta * r - z0sq * math.log((zeta + r) / c))
    if z0sq == 0.0:
        return 0.5 * zeta * abs(zeta)
    c = math.sqrt(-z0sq)
    return 0.5 * (zeta * math.sqrt(zeta * zeta + c * c) + c * c * math.asinh(zeta / c))


def invert_zeta(target: float, z0sq: float) -> float:
    """ζ with zeta_antiderivative(ζ, ζ0²) = target."""
    c = math.sqrt(abs(z0sq))
    reach = c + math.sqrt(2.0 * abs(target)) + 1.0

    def defect(z):
        return zeta_antiderivative(z, z0sq) - target

    lo, hi = -reach, reach
    for _ in range(_BRACKET_STEPS):
        if defect(lo) <= 0.0 <= defect(hi):
            break
        lo, hi = 2.0 * lo, 2.0 * hi
    else:
        raise ConvergenceError(f"ζ inversion could not bracket target {target!r}")
    try:
        return float(brentq(defect, lo, hi, xtol=1e-15, rtol=4.0 * np.finfo(float).eps, maxiter=300))
    except RuntimeError as exc:
        raise ConvergenceError(f"ζ inversion failed for target {target!r}: {exc}") from exc


def _anchor(tps: TurningPointSet) -> float:
    if not tps.is_pair:
        raise ClassificationError(f"ζ map needs a pair of turning points, got {tps.kind!r}")
    cls = tps.classification
    if isinstance(cls, PairReal) and not tps.coalesced:
        return cls.x1
    return tps.extreme.x if tps.extreme is not None else tps.center


def zeta_target(splitting: Splitting, tps: TurningPointSet, x: float) -> float:
    """Accumulated ∫√|g| from the anchor of the ζ map to x."""
    anchor = _anchor(tps)
    value, _ = abs_sqrt_integral(splitting, anchor, x, zeros=tps.real_points)
    return value


def zeta_of_x(splitting: Splitting, tps: TurningPointSet, x: float, z0sq=None) -> float:
    if z0sq is None:
        z0sq = zeta0_squared(tps, splitting).value
    return invert_zeta(zeta_target(splitting, tps, x), float(z0sq))


def zeta_on_grid(splitting: Splitting, tps: TurningPointSet, xs: Sequence[float], z0sq=None) -> np.ndarray:
    """ζ at every grid point; the x-integral is accumulated between neighbours."""
    xs = np.asarray(xs, dtype=float)
    if z0sq is None:
        z0sq = zeta0_squared(tps, splitting).value
    z0sq = float(z0sq)
    anchor = _anchor(tps)
    zeros = tps.real_points
    order = np.argsort(xs)
    ordered = xs[order]

    targets = np.empty_like(ordered)
    start = int(np.searchsorted(ordered, anchor))
    running, previous = 0.0, anchor
    for i in range(start, len(ordered)):
        running += abs_sqrt_integral(splitting, previous, float(ordered[i]), zeros)[0]
        targets[i] = running
        previous = float(ordered[i])
    running, previous = 0.0, anchor
    for i in range(start - 1, -1, -1):
        running += abs_sqrt_integral(splitting, previous, float(ordered[i]), zeros)[0]
        targets[i] = running
        previous = float(ordered[i])

    zetas = np.array([invert_zeta(float(t), z0sq) for t in targets])
    result = np.empty_like(zetas)
    result[order] = zetas
    return result


def zeta_derivative(splitting: Splitting, zeta: float, z0sq: float, x: float) -> float:
    """dζ/dx = √|g| / √|ζ² − ζ0²| (positive)."""
    return math.sqrt(abs(float(splitting(x))) / abs(zeta * zeta - z0sq))
