"""
error_control.py
----------------
Error-control functions of the uniform approximation and the diagnostics
derived from them.

    Φ(x) = {q/g − 5g'²/(16g³) + g''/(4g²)}·√|g|

    ℋ(x) = 5/(24|ξ|^{3/2}) − ∫_{x0}^{x} Φ
    ℐ(x) = ∫_{±ζ0}^{ζ} [5ζ0²/(4|v²−ζ0²|^{5/2}) − 3/(4|v²−ζ0²|^{3/2})] dv − ∫_{x_i}^{x} Φ

Both terms of each function diverge at the turning point and only their sum
has a limit there.  The sum is taken in the finite-part sense and fixed by
ℋ(x0) = 0 and ℐ(x_i) = 0; a different finite part only shifts the function
by a constant.  Near the turning point the combined integrand is integrated
in s = √|x − x_i|, where it is bounded, and its last sliver is extrapolated
with a cubic fit.
"""
from __future__ import annotations

import math
import warnings
from typing import Callable, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from scipy.integrate import IntegrationWarning, quad

from uniwkb.core import config
from uniwkb.core.errors import ClassificationError, DomainError, ValidationError
from uniwkb.core.logging_config import get_logger
from uniwkb.services.potentials.catalog import PotentialSpec
from uniwkb.services.potentials.splitting import Splitting
from uniwkb.services.semiclassical.maps import zeta_of_x
from uniwkb.services.semiclassical.phase_integrals import abs_sqrt_integral, integrate, zeta0_squared
from uniwkb.services.semiclassical.turning_points import PairReal, TurningPointSet

logger = get_logger(__name__)

_NEAR_FRACTION = 0.1      # reach of the s-substitution, in length scales
_FIT_FRACTION = 1e-2      # extrapolated sliver, in length scales
_SERIES_SWITCH = 1e-6


# ── Integrands ────────────────────────────────────────────────────────────────

def braces_integrand(splitting: Splitting, x: float) -> float:
    """Φ(x) = {q/g − 5g'²/(16g³) + g''/(4g²)}·√|g|."""
    g = float(splitting(x))
    g1 = float(splitting.derivative(x, 1))
    g2 = float(splitting.derivative(x, 2))
    q = float(splitting.q(x))
    return (q / g - 5.0 * g1**2 / (16.0 * g**3) + g2 / (4.0 * g**2)) * math.sqrt(abs(g))


def _quad(func: Callable, a: float, b: float) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        value, _ = quad(func, a, b, epsabs=1e-13, epsrel=1e-10, limit=config.QUAD_LIMIT)
    return float(value)


def _near_part(kernel: Callable, anchor: float, side: int, reach: float, L: float) -> float:
    """∫_{anchor}^{anchor + side·reach} kernel dx in x = anchor + side·s²."""
    if reach <= 0.0:
        return 0.0
    t_min = min(_FIT_FRACTION * L, reach / 9.0)
    s_min, s_max = math.sqrt(t_min), math.sqrt(reach)

    def h(s):
        return kernel(anchor + side * s * s) * 2.0 * s * side

    outer = _quad(h, s_min, s_max) if s_max > s_min else 0.0
    samples = np.linspace(s_min, 3.0 * s_min, 9)
    fit = Polynomial.fit(samples, [h(s) for s in samples], 3).convert().integ()
    return outer + float(fit(s_min) - fit(0.0))


def _check_point(splitting: Splitting, x: float) -> None:
    spec = splitting.spec
    if not math.isfinite(x):
        raise ValidationError(f"x must be finite, got {x!r}")
    if spec.half_line and x < 0.0:
        raise DomainError(f"x={x!r} is outside the half-line domain of {spec.kind}")


def _pole_cured(splitting: Splitting) -> bool:
    spec = splitting.spec
    if spec.pole_order != 2:
        return True
    h = 1e-6 * spec.length_scale
    return abs(h * h * float(splitting.q(h)) + 0.25) < 1e-6


def _crosses_zero(splitting: Splitting, a: float, b: float) -> bool:
    if a == b:
        return False
    grid = np.linspace(a, b, 65)
    with np.errstate(all="ignore"):
        values = np.asarray(splitting(grid), dtype=float)
    signs = np.sign(values[np.isfinite(values)])
    return bool(np.any(signs[:-1] * signs[1:] < 0) or np.any(signs == 0.0))


# ── ℋ ────────────────────────────────────────────────────────────────────────

def error_control_H_parts(splitting: Splitting, x0: float, x: float) -> Tuple[float, float]:
    """(5/(24|ξ|^{3/2}), finite part of −∫_{x0}^{x} Φ); their sum is ℋ(x).

    At x = x0 the two parts diverge in opposite directions: (+inf, −inf).
    """
    _check_point(splitting, x)
    spec = splitting.spec
    L = spec.length_scale
    if x == x0:
        return math.inf, -math.inf
    if spec.half_line and x == 0.0:
        if not _pole_cured(splitting):
            logger.warning("ℋ diverges at the pole x=0: q does not cancel the 1/x² behavior of g")
            return 0.0, math.inf
        x = 1e-10 * L

    side = 1 if x > x0 else -1
    distance = abs(x - x0)
    reach = min(distance, _NEAR_FRACTION * L)
    if spec.half_line and side < 0:
        reach = min(reach, 0.5 * x0)
    x_r = x0 + side * reach

    if _crosses_zero(splitting, x_r, x):
        logger.warning("ℋ between x0=%r and x=%r crosses another zero of g", x0, x)
        return math.inf, math.inf

    def airy_term(t):
        integral, _ = abs_sqrt_integral(splitting, x0, t)
        return 5.0 / (36.0 * abs(integral))

    def kernel(t):
        integral, _ = abs_sqrt_integral(splitting, x0, t)
        xi_cubed = (1.5 * abs(integral))**2
        k_prime = -5.0 / 16.0 * side * math.sqrt(abs(float(splitting(t)))) / xi_cubed
        return k_prime - braces_integrand(splitting, t)

    near = _near_part(kernel, x0, side, reach, L)
    airy = airy_term(x)
    if x_r == x:
        integral = near - airy
    else:
        far, _ = integrate(lambda t: braces_integrand(splitting, t), x_r, x, L)
        integral = near - airy_term(x_r) - far
    if not math.isfinite(airy + integral):
        logger.warning("ℋ is not finite at x=%r", x)
    return airy, integral


def error_control_H(splitting: Splitting, x0: float, x: float) -> float:
    """ℋ(x) for the single turning point x0, normalised to ℋ(x0) = 0."""
    if x == x0:
        _check_point(splitting, x)
        return 0.0
    airy, integral = error_control_H_parts(splitting, x0, x)
    if math.isinf(integral) and integral > 0:
        return math.inf
    return airy + integral


# ── ℐ ────────────────────────────────────────────────────────────────────────

def zeta_kernel(v: float, z0sq: float) -> float:
    """5ζ0²/(4|v²−ζ0²|^{5/2}) − 3/(4|v²−ζ0²|^{3/2})."""
    s = abs(v * v - z0sq)
    return 5.0 * z0sq / (4.0 * s**2.5) - 3.0 / (4.0 * s**1.5)


def zeta_kernel_antiderivative(v: float, z0sq: float) -> float:
    """Antiderivative of ``zeta_kernel`` on the branch containing v.

    Branches are separated by v = ±ζ0; the additive constant differs per
    branch, which is harmless because ℐ only uses differences on one branch.
    """
    s = v * v - z0sq
    if s > 0.0:
        if z0sq < 0.0:
            return -5.0 / 12.0 * v * s**-1.5 + 19.0 / (12.0 * z0sq) * v * s**-0.5
        root = math.sqrt(s)
        return -5.0 / 12.0 * v * s**-1.5 + 19.0 / 12.0 * math.copysign(1.0, v) / (root * (abs(v) + root))
    u = -s
    return 5.0 / 12.0 * v * u**-1.5 + v * u**-0.5 / (12.0 * z0sq)


def error_control_I(splitting: Splitting, tps: TurningPointSet, x: float, z0sq=None) -> float:
    """ℐ(x) for a pair of turning points, anchored at the nearest one.

    For a real pair ℐ vanishes at x1 (x left of the midpoint) or x2;
    for a complex pair it vanishes at the real center of the pair.
    """
    _check_point(splitting, x)
    if not tps.is_pair:
        raise ClassificationError(f"ℐ needs a pair of turning points, got {tps.kind!r}")
    if tps.coalesced:
        raise ClassificationError("ℐ diverges like ln|x2 − x1| for coalesced turning points")
    spec = splitting.spec
    L = spec.length_scale
    if z0sq is None:
        z0sq = zeta0_squared(tps, splitting).value
    z0sq = float(z0sq)

    if spec.half_line and x == 0.0:
        if not _pole_cured(splitting):
            logger.warning("ℐ diverges at the pole x=0: q does not cancel the 1/x² behavior of g")
            return math.inf
        x = 1e-10 * L

    def zeta(t):
        return zeta_of_x(splitting, tps, t, z0sq)

    def phi(t):
        return braces_integrand(splitting, t)

    cls = tps.classification
    if not isinstance(cls, PairReal):
        anchor = tps.extreme.x if tps.extreme is not None else tps.center
        far, _ = integrate(phi, anchor, x, L)
        return zeta_kernel_antiderivative(zeta(x), z0sq) - far

    anchor = cls.x1 if x <= 0.5 * (cls.x1 + cls.x2) else cls.x2
    if x == anchor:
        return 0.0
    side = 1 if x > anchor else -1
    reach = min(abs(x - anchor), _NEAR_FRACTION * L, 0.25 * cls.separation)
    if spec.half_line and side < 0:
        reach = min(reach, 0.5 * anchor)
    x_r = anchor + side * reach

    def kernel(t):
        z = zeta(t)
        gap = abs(z * z - z0sq)
        return zeta_kernel(z, z0sq) * math.sqrt(abs(float(splitting(t))) / gap) - phi(t)

    near = _near_part(kernel, anchor, side, reach, L)
    if x_r == x:
        return near
    far, _ = integrate(phi, x_r, x, L)
    value = near + zeta_kernel_antiderivative(zeta(x), z0sq) - zeta_kernel_antiderivative(zeta(x_r), z0sq) - far
    if not math.isfinite(value):
        logger.warning("ℐ is not finite at x=%r", x)
    return value


# ── Extreme-point diagnostics ─────────────────────────────────────────────────

def _f_at_center(splitting: Splitting, tps: TurningPointSet) -> Tuple[float, float, float, float]:
    """(x_c, f, f', f'') for g = f(x)(x − x1)(x − x2) at the pair's real center x_c."""
    if not tps.is_pair:
        raise ClassificationError(f"pair diagnostics need a pair of turning points, got {tps.kind!r}")
    x1, x2 = (complex(p) for p in tps.points)
    x_c = tps.center
    p = float(np.real(-((x2 - x1) / 2.0)**2))
    g0, g1, g2, g3, g4 = (float(splitting.derivative(x_c, k)) for k in range(5))
    if g2 == 0.0:
        raise ClassificationError(f"g'' vanishes at the pair center x={x_c!r}")
    if abs(p * g4 / g2) < _SERIES_SWITCH:
        return x_c, g2 / 2.0 - p * g4 / 24.0, g3 / 6.0, g4 / 12.0
    f = g0 / p
    return x_c, f, g1 / p, (g2 - 2.0 * f) / p


def q0_from_turning_point(splitting: Splitting, tps: TurningPointSet) -> float:
    """(7f'² − 6ff'')/(32f²) at the real center of the pair."""
    _, f, f1, f2 = _f_at_center(splitting, tps)
    return (7.0 * f1**2 - 6.0 * f * f2) / (32.0 * f**2)


def extreme_log_coefficient(splitting: Splitting, tps: TurningPointSet) -> float:
    """Coefficient of ln|x2 − x1| in ℐ near the extreme point.

    (7f'² − 6ff'')/(32|f|^{5/2}) − q(x_c)/√|f|; a q obeying the extreme rule
    makes it vanish as the turning points coalesce.
    """
    x_c, f, f1, f2 = _f_at_center(splitting, tps)
    return (7.0 * f1**2 - 6.0 * f * f2) / (32.0 * abs(f)**2.5) - float(splitting.q(x_c)) / math.sqrt(abs(f))


def pole_coefficient(splitting: Splitting) -> float:
    """lim_{x→0} x²·g(x) by one Richardson step from h = 10⁻⁷·L."""
    spec = splitting.spec
    if not spec.half_line:
        raise ValidationError(f"{spec.kind} has no pole at the origin (domain {spec.domain})")
    h = 1e-7 * spec.length_scale

    def x2g(x):
        return x * x * float(splitting(x))

    return 2.0 * x2g(h) - x2g(2.0 * h)


# ── WKB validity ──────────────────────────────────────────────────────────────

def wkb_condition(spec: PotentialSpec, E: float, x):
    """𝒬 = ħ²|5P'²/(16P³) − P''/(4P²)| with P = 2m(E − V); +inf where P = 0."""
    xs = np.asarray(x, dtype=float)
    m, hbar = spec.params.m, spec.params.hbar
    with np.errstate(all="ignore"):
        P = 2.0 * m * (E - np.asarray(spec.potential(xs), dtype=float))
        P1 = -2.0 * m * np.asarray(spec.potential.derivative(xs, 1), dtype=float)
        P2 = -2.0 * m * np.asarray(spec.potential.derivative(xs, 2), dtype=float)
        value = hbar**2 * np.abs(5.0 * P1**2 / (16.0 * P**3) - P2 / (4.0 * P**2))
    value = np.where(P == 0.0, np.inf, value)
    if value.ndim == 0:
        return float(value)
    return value
