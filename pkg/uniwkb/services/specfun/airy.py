"""
airy.py
-------
Ai, Bi and their derivatives for real arguments.

    |x| ≤ 4.5          Maclaurin series  Ai = c1·f − c2·g,  Bi = √3(c1·f + c2·g)
    4.5 < |x| ≤ 8.5    DOP853 continuation of w'' = xw (ode-continued); the
                       growing direction starts from the series, Ai on the
                       positive side is integrated back from the asymptotic
                       value at 8.5 so that it is always the dominant solution
    |x| > 8.5          asymptotic expansions in ζ = (2/3)|x|^{3/2}

For x > 0 the scaled forms are Ai·e^{ζ} and Bi·e^{−ζ} (log_scale = ∓ζ).
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.integrate import solve_ivp

from uniwkb.core import config
from uniwkb.core.errors import ConvergenceError, ValidationError
from uniwkb.core.logging_config import get_logger
from uniwkb.services.specfun.values import (
    ASYMPTOTIC,
    ODE_CONTINUED,
    SERIES,
    SpecFunValue,
)

logger = get_logger(__name__)

C1 = 0.355028053887817239   # Ai(0)
C2 = 0.258819403792806798   # −Ai'(0)
SQRT3 = math.sqrt(3.0)
SQRT_PI = math.sqrt(math.pi)
EPS = np.finfo(float).eps

_ODE_RTOL = 1e-13
_MAX_TERMS = 400

# Index order of every internal 4-tuple.
AI, AIP, BI, BIP = range(4)


# ── Maclaurin series ──────────────────────────────────────────────────────────

def _series(x: float):
    x3 = x**3
    f = fp = 0.0
    g = gp = 0.0
    tf, tg = 1.0, x          # f and g terms
    tfp, tgp = 0.0, 1.0      # f' and g' terms
    abs_sum = 0.0
    k = 0
    while True:
        f += tf
        g += tg
        fp += tfp
        gp += tgp
        abs_sum += abs(tf) + abs(tg) + abs(tfp) + abs(tgp)
        k += 1
        tf *= x3 / ((3 * k - 1) * (3 * k))
        tg *= x3 / ((3 * k) * (3 * k + 1))
        tfp = x**2 / 2.0 if k == 1 else tfp * x3 / ((3 * k - 1) * (3 * k - 3))
        tgp *= x3 / ((3 * k) * (3 * k - 2))
        tail = abs(tf) + abs(tg) + abs(tfp) + abs(tgp)
        if tail <= EPS * 1e-3 * (abs(f) + abs(g) + abs(fp) + abs(gp)) or k > _MAX_TERMS:
            break
    values = np.array([
        C1 * f - C2 * g,
        C1 * fp - C2 * gp,
        SQRT3 * (C1 * f + C2 * g),
        SQRT3 * (C1 * fp + C2 * gp),
    ])
    error = np.full(4, 2.0 * EPS * SQRT3 * abs_sum + tail)
    return values, error


# ── Asymptotic expansions ─────────────────────────────────────────────────────

@lru_cache(maxsize=1)
def _uv_coefficients(count: int = 80) -> Tuple[np.ndarray, np.ndarray]:
    u = np.empty(count)
    v = np.empty(count)
    u[0] = v[0] = 1.0
    for k in range(1, count):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k)
        v[k] = -(6 * k + 1) / (6 * k - 1) * u[k]
    return u, v


def _truncated(coeffs: np.ndarray, zeta: float, sign: float, parity=None):
    """Σ sign^k c_k ζ^{−k} up to the smallest term; returns (sum, last term)."""
    total = 0.0
    last = math.inf
    for k, c in enumerate(coeffs):
        if parity is not None and k % 2 != parity:
            continue
        j = k // 2 if parity is not None else k
        term = (sign**j) * c / zeta**k
        if abs(term) > abs(last):
            break
        total += term
        last = term
        if abs(term) <= EPS * 1e-2 * abs(total):
            break
    return total, abs(last)


def _asymptotic_scaled(x: float):
    """Scaled asymptotic values; log scales are (−ζ, −ζ, ζ, ζ) for x > 0, zero for x < 0."""
    u, v = _uv_coefficients()
    t = abs(x)
    zeta = 2.0 / 3.0 * t**1.5
    q = t**0.25
    if x > 0:
        su_m, eu_m = _truncated(u, zeta, -1.0)
        sv_m, ev_m = _truncated(v, zeta, -1.0)
        su_p, eu_p = _truncated(u, zeta, 1.0)
        sv_p, ev_p = _truncated(v, zeta, 1.0)
        values = np.array([
            su_m / (2.0 * SQRT_PI * q),
            -q * sv_m / (2.0 * SQRT_PI),
            su_p / (SQRT_PI * q),
            q * sv_p / SQRT_PI,
        ])
        error = np.array([
            eu_m / (2.0 * SQRT_PI * q),
            q * ev_m / (2.0 * SQRT_PI),
            eu_p / (SQRT_PI * q),
            q * ev_p / SQRT_PI,
        ]) + EPS * np.abs(values)
        logs = np.array([-zeta, -zeta, zeta, zeta])
        return values, error, logs

    ue, eue = _truncated(u, zeta, -1.0, parity=0)
    uo, euo = _truncated(u, zeta, -1.0, parity=1)
    ve, eve = _truncated(v, zeta, -1.0, parity=0)
    vo, evo = _truncated(v, zeta, -1.0, parity=1)
    c = math.cos(zeta - math.pi / 4.0)
    s = math.sin(zeta - math.pi / 4.0)
    values = np.array([
        (c * ue + s * uo) / (SQRT_PI * q),
        q * (s * ve - c * vo) / SQRT_PI,
        (-s * ue + c * uo) / (SQRT_PI * q),
        q * (c * ve + s * vo) / SQRT_PI,
    ])
    eu = (eue + euo) / (SQRT_PI * q)
    ev = q * (eve + evo) / SQRT_PI
    error = np.array([eu, ev, eu, ev]) + 4.0 * EPS * np.abs(values)
    return values, error, np.zeros(4)


# ── ODE continuation ──────────────────────────────────────────────────────────

def _continue(x0: float, w0: float, w0p: float, x1: float) -> Tuple[float, float]:
    if x1 == x0:
        return w0, w0p
    atol = 1e-16 * max(abs(w0), abs(w0p))
    sol = solve_ivp(lambda t, y: [y[1], t * y[0]], (x0, x1), [w0, w0p],
                    method="DOP853", rtol=_ODE_RTOL, atol=atol)
    if not sol.success:
        raise ConvergenceError(f"Airy continuation from {x0} to {x1} failed: {sol.message}")
    return float(sol.y[0, -1]), float(sol.y[1, -1])


def _ode_continued(x: float):
    lo, hi = config.AIRY_SERIES_LIMIT, config.AIRY_ASYMPTOTIC_LIMIT
    values = np.empty(4)
    if x > 0:
        start, _ = _series(lo)
        values[BI], values[BIP] = _continue(lo, start[BI], start[BIP], x)
        anchor, _, logs = _asymptotic_scaled(hi)
        ai, aip = anchor[AI] * math.exp(logs[AI]), anchor[AIP] * math.exp(logs[AIP])
        values[AI], values[AIP] = _continue(hi, ai, aip, x)
    else:
        start, _ = _series(-lo)
        values[AI], values[AIP] = _continue(-lo, start[AI], start[AIP], x)
        values[BI], values[BIP] = _continue(-lo, start[BI], start[BIP], x)
    ai_size = max(abs(values[AI]), abs(values[AIP]))
    bi_size = max(abs(values[BI]), abs(values[BIP]))
    error = 10.0 * _ODE_RTOL * np.array([ai_size, ai_size, bi_size, bi_size])
    return values, error


# ── Dispatcher ────────────────────────────────────────────────────────────────

@lru_cache(maxsize=8192)
def _airy_scaled(x: float):
    """(values, errors, log_scales, regime) with the scaled convention for x > 0."""
    t = abs(x)
    if t > config.AIRY_ASYMPTOTIC_LIMIT:
        values, error, logs = _asymptotic_scaled(x)
        return values, error, logs, ASYMPTOTIC
    if t <= config.AIRY_SERIES_LIMIT:
        values, error = _series(x)
        regime = SERIES
    else:
        values, error = _ode_continued(x)
        regime = ODE_CONTINUED
    if x > 0:
        zeta = 2.0 / 3.0 * t**1.5
        logs = np.array([-zeta, -zeta, zeta, zeta])
        factor = np.exp(-logs)
        return values * factor, error * factor, logs, regime
    return values, error, np.zeros(4), regime


def _check(x) -> float:
    if isinstance(x, complex) or np.iscomplexobj(x):
        raise ValidationError(f"Airy functions take real arguments, got {x!r}")
    x = float(x)
    if not math.isfinite(x):
        raise ValidationError(f"Airy argument must be finite, got {x!r}")
    return x


def _pick(x, index: int, scaled: bool) -> SpecFunValue:
    values, errors, logs, regime = _airy_scaled(_check(x))
    result = SpecFunValue(float(values[index]), float(errors[index]), regime, float(logs[index]))
    if scaled:
        return result
    if logs[index] < 0:
        factor = math.exp(logs[index])
        return SpecFunValue(result.value * factor, result.error * factor, regime)
    if logs[index] > 0:
        return SpecFunValue(result.unscaled(), result.error * math.exp(logs[index]), regime)
    return result


def airy_ai(x: float, scaled: bool = False) -> SpecFunValue:
    return _pick(x, AI, scaled)


def airy_ai_prime(x: float, scaled: bool = False) -> SpecFunValue:
    return _pick(x, AIP, scaled)


def airy_bi(x: float, scaled: bool = False) -> SpecFunValue:
    """Bi(x); unscaled values beyond exp(700) raise SpecialFunctionOverflowError."""
    return _pick(x, BI, scaled)


def airy_bi_prime(x: float, scaled: bool = False) -> SpecFunValue:
    return _pick(x, BIP, scaled)


def airy_all(x: float, scaled: bool = False) -> Tuple[SpecFunValue, SpecFunValue, SpecFunValue, SpecFunValue]:
    """(Ai, Ai', Bi, Bi') in one call."""
    return tuple(_pick(x, i, scaled) for i in (AI, AIP, BI, BIP))


def airy_series(x: float) -> np.ndarray:
    """Raw Maclaurin values (Ai, Ai', Bi, Bi'), any x; accuracy degrades past |x| ≈ 5."""
    return _series(_check(x))[0]


def airy_asymptotic(x: float) -> np.ndarray:
    """Raw unscaled asymptotic values (Ai, Ai', Bi, Bi'); meant for |x| ≳ 8."""
    values, _, logs = _asymptotic_scaled(_check(x))
    return values * np.exp(logs)
