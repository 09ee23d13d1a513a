"""
phase_integrals.py
------------------
Integrals of √(±g) between turning points, and ζ0².

Square-root zeros at the ends are removed with x = a + (b − a)·sin²θ before
adaptive quadrature; integrands behaving like 1/x near the origin are taken
in ln x; half-infinite tails go to QUADPACK's infinite-range rule.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from scipy.integrate import quad

from uniwkb.core import config
from uniwkb.core.errors import ClassificationError, ConvergenceError, ValidationError
from uniwkb.core.logging_config import get_logger
from uniwkb.services.potentials.splitting import Splitting
from uniwkb.services.semiclassical.turning_points import (
    PairComplexConj,
    PairReal,
    TurningPointSet,
    WELL,
    g_scale,
)

logger = get_logger(__name__)

# Pieces with b/a beyond this ratio are integrated in ln x.
_LOG_SPAN = 16.0


@dataclass(frozen=True)
class PhaseIntegral:
    value: float
    error: float
    path: tuple     # ("real", a, b) or ("complex", x1, x2)

    @property
    def ok(self) -> bool:
        return self.error <= 1e-10 * (abs(self.value) + 1.0)


@dataclass(frozen=True)
class Zeta0Squared:
    value: float
    error: float = 0.0

    def __float__(self) -> float:
        return self.value


# ── Quadrature helpers ────────────────────────────────────────────────────────

def _quad(func: Callable, a: float, b: float) -> Tuple[float, float]:
    value, error = quad(func, a, b, epsabs=0.0, epsrel=config.QUAD_EPSREL, limit=config.QUAD_LIMIT)
    return float(value), float(error)


def _sin2(func: Callable, lo: float, hi: float) -> Tuple[float, float]:
    span = hi - lo

    def integrand(theta):
        s = math.sin(theta)
        return func(lo + span * s * s) * span * math.sin(2.0 * theta)

    return _quad(integrand, 0.0, 0.5 * math.pi)


def _log(func: Callable, lo: float, hi: float) -> Tuple[float, float]:
    def integrand(u):
        x = math.exp(u)
        return func(x) * x

    return _quad(integrand, math.log(lo), math.log(hi))


def integrate(func: Callable, a: float, b: float, length_scale: float = 1.0) -> Tuple[float, float]:
    """∫_a^b func dx for integrands with at worst square-root end behavior.

    Either end may be infinite.  Returns (value, error estimate); the sign
    follows the orientation of [a, b].
    """
    if a == b:
        return 0.0, 0.0
    if b < a:
        value, error = integrate(func, b, a, length_scale)
        return -value, error
    if math.isinf(a) and math.isinf(b):
        left = integrate(func, a, 0.0, length_scale)
        right = integrate(func, 0.0, b, length_scale)
        return left[0] + right[0], left[1] + right[1]
    if math.isinf(b):
        head = integrate(func, a, a + length_scale, length_scale)
        tail = _quad(func, a + length_scale, math.inf)
        return head[0] + tail[0], head[1] + tail[1]
    if math.isinf(a):
        head = integrate(func, b - length_scale, b, length_scale)
        tail = _quad(func, -math.inf, b - length_scale)
        return head[0] + tail[0], head[1] + tail[1]
    if a > 0.0 and b > _LOG_SPAN * a:
        pieces = (_sin2(func, a, 2.0 * a), _log(func, 2.0 * a, 0.5 * b), _sin2(func, 0.5 * b, b))
        return sum(p[0] for p in pieces), sum(p[1] for p in pieces)
    return _sin2(func, a, b)


def abs_sqrt_integral(splitting: Splitting, a: float, b: float, zeros=()) -> Tuple[float, float]:
    """∫_a^b √|g| dx, cut at any listed zeros of g inside [a, b]."""
    if a == b:
        return 0.0, 0.0
    if b < a:
        value, error = abs_sqrt_integral(splitting, b, a, zeros)
        return -value, error
    L = splitting.spec.length_scale

    def integrand(x):
        return math.sqrt(abs(float(splitting(x))))

    cuts = [a] + sorted(z for z in zeros if a < z < b) + [b]
    value = error = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        v, e = integrate(integrand, lo, hi, L)
        value += v
        error += e
    return value, error


# ── Phase integrals ───────────────────────────────────────────────────────────

def phase_integral_real(splitting: Splitting, x1: float, x2: float, sign: int) -> PhaseIntegral:
    """∫_{x1}^{x2} √(sign·g) dx; sign = −1 for a well, +1 for a barrier."""
    if sign not in (-1, 1):
        raise ValidationError(f"sign must be one of [-1, 1], got {sign!r}")
    if not x1 <= x2:
        raise ValidationError(f"phase integral needs x1 <= x2, got {x1!r} > {x2!r}")
    if x1 == x2:
        return PhaseIntegral(0.0, 0.0, ("real", x1, x2))

    tolerance = 1e-9 * g_scale(splitting)
    L = splitting.spec.length_scale
    if math.isfinite(x1) and math.isfinite(x2):
        probes = x1 + (x2 - x1) * np.sin(np.linspace(0.05, 0.5 * math.pi - 0.05, 9))**2
    elif math.isfinite(x1):
        probes = x1 + L * np.geomspace(0.1, 10.0, 9)
    elif math.isfinite(x2):
        probes = x2 - L * np.geomspace(0.1, 10.0, 9)
    else:
        probes = L * np.linspace(-10.0, 10.0, 9)
    worst = float(np.min(sign * np.asarray(splitting(probes), dtype=float)))
    if worst < -tolerance:
        raise ClassificationError(
            f"√({'+' if sign > 0 else '−'}g) is not real on ({x1!r}, {x2!r}): min value {worst:.6g}"
        )

    def integrand(x):
        return math.sqrt(max(sign * float(splitting(x)), 0.0))

    value, error = integrate(integrand, x1, x2, splitting.spec.length_scale)
    result = PhaseIntegral(value, error, ("real", x1, x2))
    if not result.ok:
        logger.warning("phase integral on [%r, %r] has error estimate %.3g", x1, x2, error)
    return result


def phase_integral_complex(splitting: Splitting, x1: complex, x2: complex) -> PhaseIntegral:
    """|∫ √g dx| along the straight segment from x1 to x2.

    The branch is √g = i·√(−g) with the principal root, continuous along the
    segment while −g stays off the negative real axis (g is negative where
    the segment crosses the real line of an above-top barrier).
    """
    span = complex(x2) - complex(x1)

    def point(theta):
        s = math.sin(theta)
        return complex(x1) + span * s * s

    def integrand(theta):
        g = complex(splitting(point(theta)))
        return 1j * np.sqrt(-g) * span * math.sin(2.0 * theta)

    re, re_err = _quad(lambda t: float(np.real(integrand(t))), 0.0, 0.5 * math.pi)
    im, im_err = _quad(lambda t: float(np.imag(integrand(t))), 0.0, 0.5 * math.pi)
    value = abs(complex(re, im))
    error = math.hypot(re_err, im_err)
    return PhaseIntegral(value, error, ("complex", complex(x1), complex(x2)))


def zeta0_squared(tps: TurningPointSet, splitting: Splitting) -> Zeta0Squared:
    """+(2/π)∫√|g| for a real pair, 0 when coalesced, −(2/π)|∫√g| for a complex pair."""
    cls = tps.classification
    if tps.coalesced:
        return Zeta0Squared(0.0)
    if isinstance(cls, PairReal):
        sign = -1 if tps.extreme_kind == WELL else 1
        phase = phase_integral_real(splitting, cls.x1, cls.x2, sign)
        return Zeta0Squared(2.0 / math.pi * phase.value, 2.0 / math.pi * phase.error)
    if isinstance(cls, PairComplexConj):
        phase = phase_integral_complex(splitting, cls.x1, cls.x2)
        if not math.isfinite(phase.value):
            raise ConvergenceError(f"complex phase integral did not converge between {cls.x1!r} and {cls.x2!r}")
        return Zeta0Squared(-2.0 / math.pi * phase.value, 2.0 / math.pi * phase.error)
    raise ClassificationError(f"ζ0² needs a pair of turning points, got {tps.kind!r}")
