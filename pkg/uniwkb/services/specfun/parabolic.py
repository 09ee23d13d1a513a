"""
parabolic.py
------------
Parabolic cylinder functions of real order a and real argument z.

    U(a, z), V(a, z), Ū(a, z) = Γ(½ − a)·V(a, z)     w'' = (z²/4 + a)·w
    W(a, z), W(a, −z)                                 w'' = (a − z²/4)·w

Evaluation paths, with Z_s = min(4, 4/√|a|):

    |z| ≤ Z_s        even/odd power series from the values at z = 0
    recessive side   asymptotic expansion from an anchor z_a where it has
                     converged to machine precision, then DOP853 back to z
    dominant side    DOP853 forward from the series at ±Z_s
    negative z (U/V) connection formulas through U(a, |z|) and V(a, |z|)

Every value carries a log scale (true value = value·e^{log_scale}).  The
W pair has Wronskian W(a,z)·d/dz W(a,−z) − W(a,−z)·d/dz W(a,z) = +1.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import gammaln, gammasgn, loggamma

from uniwkb.core import config
from uniwkb.core.errors import (
    ConvergenceError,
    SpecialFunctionOverflowError,
    SpecialFunctionRangeError,
    ValidationError,
)
from uniwkb.core.logging_config import get_logger
from uniwkb.services.specfun.ode_oracle import comparison_rhs
from uniwkb.services.specfun.values import (
    ASYMPTOTIC,
    ODE_CONTINUED,
    SERIES,
    SpecFunValue,
)

logger = get_logger(__name__)

EPS = np.finfo(float).eps
LOG_SQRT_PI = 0.5 * math.log(math.pi)
LN2 = math.log(2.0)
WRONSKIAN_UV = math.sqrt(2.0 / math.pi)

_SERIES_MAX_TERMS = 4000
_ASYMPTOTIC_MAX_TERMS = 400
_ASYMPTOTIC_TOL = 1e-15
_SEGMENT = 2.0
_MAX_LOG = 700.0


@dataclass(frozen=True)
class _Scaled:
    """(w, w', error)·e^{log}."""

    w: float
    wp: float
    err: float
    log: float
    regime: str

    @property
    def size(self) -> float:
        return max(abs(self.w), abs(self.wp))

    def flipped(self) -> "_Scaled":
        """Same solution seen through z → −z: derivative changes sign."""
        return _Scaled(self.w, -self.wp, self.err, self.log, self.regime)


# ── Signed logarithms ─────────────────────────────────────────────────────────

def _signed_log(x: float) -> Tuple[float, float]:
    if x == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, x), math.log(abs(x))


def _log_rgamma(x: float) -> Tuple[float, float]:
    """1/Γ(x) as (sign, log|·|); exactly zero at the poles of Γ."""
    if x <= 0.0 and x == math.floor(x):
        return 0.0, -math.inf
    return float(gammasgn(x)), -float(gammaln(x))


def _combine(terms: Iterable[Tuple[float, float, _Scaled]]) -> _Scaled:
    """Σ sign_i·e^{log_i}·s_i, rescaled to the largest contribution."""
    live = [(sg, lc, s) for sg, lc, s in terms if sg != 0.0 and s.size > 0.0]
    if not live:
        return _Scaled(0.0, 0.0, 0.0, 0.0, SERIES)
    ref = max(lc + s.log + math.log(s.size) for _, lc, s in live)
    w = wp = err = 0.0
    regime, weight = SERIES, -math.inf
    for sg, lc, s in live:
        factor = math.exp(lc + s.log - ref)
        w += sg * factor * s.w
        wp += sg * factor * s.wp
        err += factor * (s.err + EPS * s.size)
        contribution = lc + s.log + math.log(s.size)
        if contribution > weight:
            regime, weight = s.regime, contribution
    return _Scaled(w, wp, err, ref, regime)


# ── Values at the origin ──────────────────────────────────────────────────────

def _u_origin(a: float):
    s0, l0 = _log_rgamma(0.75 + a / 2.0)
    s1, l1 = _log_rgamma(0.25 + a / 2.0)
    return ((s0, LOG_SQRT_PI - (a / 2.0 + 0.25) * LN2 + l0),
            (-s1, LOG_SQRT_PI + (0.25 - a / 2.0) * LN2 + l1))


def _v_origin(a: float):
    s0, l0 = _log_rgamma(0.75 - a / 2.0)
    s1, l1 = _log_rgamma(0.25 + a / 2.0)
    s2, l2 = _log_rgamma(0.25 - a / 2.0)
    s3, l3 = _log_rgamma(0.75 + a / 2.0)
    log_pi = math.log(math.pi)
    return ((s0 * s0 * s1, log_pi + (a / 2.0 + 0.25) * LN2 + 2.0 * l0 + l1),
            (s2 * s2 * s3, log_pi + (a / 2.0 + 0.75) * LN2 + 2.0 * l2 + l3))


def _w_origin(a: float):
    log_g1 = float(np.real(loggamma(0.25 + 0.5j * a)))
    log_g3 = float(np.real(loggamma(0.75 + 0.5j * a)))
    return ((1.0, -0.75 * LN2 + 0.5 * (log_g1 - log_g3)),
            (-1.0, -0.25 * LN2 + 0.5 * (log_g3 - log_g1)))


def transmission_k(a: float) -> float:
    """k = √(1 + e^{2πa}) − e^{πa}, computed without cancellation."""
    if a > 0:
        t = math.exp(-math.pi * a)
        return t / (math.sqrt(1.0 + t * t) + 1.0)
    t = math.exp(math.pi * a)
    return 1.0 / (math.sqrt(1.0 + t * t) + t)


# ── Power series ──────────────────────────────────────────────────────────────

def series_limit(a: float) -> float:
    if a == 0.0:
        return config.PCF_SERIES_LIMIT
    return min(config.PCF_SERIES_LIMIT, 4.0 / math.sqrt(abs(a)))


def series_solutions(a: float, z: float, equation: str = "u"):
    """Even (1, 0 at z=0) and odd (0, 1 at z=0) solutions by power series.

    Returns ``(y1, y1', y2, y2', sum1, sum2)`` with sum* the absolute sums of
    the terms, used for the rounding-error estimate.
    """
    sigma = 1.0 if equation == "u" else -1.0
    if z == 0.0:
        return 1.0, 0.0, 0.0, 1.0, 1.0, 1.0
    coef = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
    val = np.zeros(2)
    der = np.zeros(2)
    abs_sum = np.zeros(2)
    zk, zkm1 = 1.0, 0.0
    quiet = 0
    for k in range(_SERIES_MAX_TERMS):
        term = coef[k] * zk
        dterm = k * coef[k] * zkm1
        val += term
        der += dterm
        abs_sum += np.abs(term) + np.abs(dterm)
        small = np.all(np.abs(term) <= 1e-2 * EPS * np.abs(val) + 1e-300) and \
            np.all(np.abs(dterm) <= 1e-2 * EPS * np.abs(der) + 1e-300)
        quiet = quiet + 1 if small else 0
        if quiet >= 4 and k > 4:
            break
        previous = coef[k - 2] if k >= 2 else np.zeros(2)
        coef.append((a * coef[k] + sigma * previous / 4.0) / ((k + 2) * (k + 1)))
        zkm1, zk = zk, zk * z
    else:
        raise ConvergenceError(f"power series did not converge at a={a!r}, z={z!r}")
    return val[0], der[0], val[1], der[1], abs_sum[0], abs_sum[1]


def _series_value(a: float, z: float, equation: str, origin) -> _Scaled:
    y1, y1p, y2, y2p, sum1, sum2 = series_solutions(a, z, equation)
    (s0, l0), (s1, l1) = origin
    even = _Scaled(y1, y1p, 2.0 * EPS * sum1, 0.0, SERIES)
    odd = _Scaled(y2, y2p, 2.0 * EPS * sum2, 0.0, SERIES)
    return _combine([(s0, l0, even), (s1, l1, odd)])


# ── Asymptotic expansions ─────────────────────────────────────────────────────

def _u_asymptotic(a: float, x: float) -> Tuple[_Scaled, bool]:
    """U(a, x) ~ e^{−x²/4}x^{−a−½} Σ (−1)^s (½+a)_{2s}/(s!(2x²)^s), x > 0."""
    b = 1.0
    total = dtotal = 0.0
    last = math.inf
    converged = False
    for s in range(_ASYMPTOTIC_MAX_TERMS):
        term = b / x**(2 * s)
        if abs(term) > abs(last):
            break
        total += term
        dtotal += -2.0 * s * term / x
        last = term
        if abs(term) <= _ASYMPTOTIC_TOL * abs(total):
            converged = True
            break
        b *= -(0.5 + a + 2 * s) * (1.5 + a + 2 * s) / (2.0 * (s + 1))
    w = total
    wp = (-x / 2.0 - (a + 0.5) / x) * total + dtotal
    log = -x * x / 4.0 - (a + 0.5) * math.log(x)
    err = abs(last) * (1.0 + x) + EPS * max(abs(w), abs(wp))
    return _Scaled(w, wp, err, log, ASYMPTOTIC), converged


def _e_asymptotic(a: float, x: float) -> Tuple[complex, complex, float, bool]:
    """E(a, x) = k^{−½}W(a, x) + i k^{½}W(a, −x) and E'(a, x) for x > 0."""
    c = 1.0 + 0.0j
    total = dtotal = 0.0j
    last = math.inf
    converged = False
    for s in range(_ASYMPTOTIC_MAX_TERMS):
        term = c / x**(2 * s)
        if abs(term) > last:
            break
        total += term
        dtotal += -2.0 * s * term / x
        last = abs(term)
        if last <= _ASYMPTOTIC_TOL * abs(total):
            converged = True
            break
        c *= (2 * s + 0.5 + 1j * a) * (2 * s + 1.5 + 1j * a) / (2j * (s + 1))
    phi2 = float(np.imag(loggamma(0.5 + 1j * a)))
    theta = x * x / 4.0 - a * math.log(x) + math.pi / 4.0 + phi2 / 2.0
    front = math.sqrt(2.0 / x) * cmath.exp(1j * theta)
    dphase = 1j * (x / 2.0 - a / x) - 1.0 / (2.0 * x)
    E = front * total
    Ep = front * (dphase * total + dtotal)
    err = math.sqrt(2.0 / x) * last * (1.0 + x)
    return E, Ep, err, converged


def _w_asymptotic(a: float, z: float) -> Tuple[_Scaled, bool]:
    x = abs(z)
    E, Ep, err, converged = _e_asymptotic(a, x)
    root_k = math.sqrt(transmission_k(a))
    if z > 0:
        s = _Scaled(root_k * E.real, root_k * Ep.real, root_k * err, 0.0, ASYMPTOTIC)
    else:
        s = _Scaled(E.imag / root_k, -Ep.imag / root_k, err / root_k, 0.0, ASYMPTOTIC)
    return s, converged


@lru_cache(maxsize=512)
def _anchor(a: float, equation: str) -> float:
    """Smallest z ≥ 6 (integer steps) where the asymptotic expansion has converged."""
    z = max(6.0, math.ceil(series_limit(a)) + 1.0)
    limit = 2.0 * config.PCF_MAX_ABS_Z
    while z <= limit:
        converged = _u_asymptotic(a, z)[1] if equation == "u" else _w_asymptotic(a, z)[1]
        if converged:
            return z
        z += 1.0
    raise SpecialFunctionRangeError(
        f"a={a!r} lies outside the computable envelope of the recessive {equation.upper()} solution"
    )


# ── ODE continuation ──────────────────────────────────────────────────────────

def _propagate(a: float, equation: str, z0: float, start: _Scaled, targets: np.ndarray) -> List[_Scaled]:
    """Carry ``start`` from z0 to every target (sorted in the direction of travel)."""
    rhs = comparison_rhs(a, equation)
    y = np.array([start.w, start.wp], dtype=float)
    log = start.log
    rel = start.err / max(start.size, 1e-300)
    z = z0
    out: List[_Scaled] = []
    i = 0
    while i < len(targets):
        goal = float(targets[-1])
        z_end = goal if abs(goal - z) <= _SEGMENT else z + math.copysign(_SEGMENT, goal - z)
        seg = []
        while i < len(targets) and (targets[i] - z) * (z_end - targets[i]) >= 0:
            seg.append(float(targets[i]))
            i += 1
        t_eval = sorted(set(seg) | {z_end}, reverse=z_end < z)
        if z_end == z:
            states = np.tile(y[:, None], len(t_eval))
        else:
            scale = max(abs(y[0]), abs(y[1]), 1e-300)
            sol = solve_ivp(rhs, (z, z_end), y, method="DOP853", t_eval=t_eval,
                            rtol=config.ODE_RTOL, atol=config.ODE_ATOL * scale)
            if not sol.success:
                raise ConvergenceError(f"comparison-equation continuation failed: {sol.message}")
            states = sol.y
        rel += 10.0 * config.ODE_RTOL
        lookup = {t: states[:, k] for k, t in enumerate(t_eval)}
        for t in seg:
            w, wp = lookup[t]
            out.append(_Scaled(float(w), float(wp), rel * max(abs(w), abs(wp)), log, ODE_CONTINUED))
        y = np.array(lookup[z_end], dtype=float)
        size = max(abs(y[0]), abs(y[1]))
        if size > 1e50 or 0.0 < size < 1e-50:
            y /= size
            log += math.log(size)
        z = z_end
    return out


# ── Solutions on the positive axis ────────────────────────────────────────────

def _recessive(a: float, equation: str, xs: np.ndarray, origin, asymptotic) -> List[_Scaled]:
    """Solution decaying towards +∞ at points xs ≥ 0."""
    zs_lim = series_limit(a)
    out: List[_Scaled] = [None] * len(xs)
    middle = []
    for idx, x in enumerate(xs):
        if x <= zs_lim:
            out[idx] = _series_value(a, x, equation, origin)
        else:
            middle.append(idx)
    if not middle:
        return out
    z_a = _anchor(a, equation)
    inner = []
    for idx in middle:
        if xs[idx] >= z_a:
            out[idx] = asymptotic(a, float(xs[idx]))[0]
        else:
            inner.append(idx)
    if inner:
        order = sorted(inner, key=lambda j: -xs[j])
        start = asymptotic(a, z_a)[0]
        values = _propagate(a, equation, z_a, start, np.array([xs[j] for j in order]))
        for j, v in zip(order, values):
            out[j] = v
    return out


def _dominant(a: float, equation: str, xs: np.ndarray, origin, sign: float = 1.0) -> List[_Scaled]:
    """Solution fixed by its origin data, carried outward along sign·x."""
    zs_lim = series_limit(a)
    out: List[_Scaled] = [None] * len(xs)
    outer = []
    for idx, x in enumerate(xs):
        if x <= zs_lim:
            out[idx] = _series_value(a, sign * x, equation, origin)
        else:
            outer.append(idx)
    if outer:
        order = sorted(outer, key=lambda j: xs[j])
        start = _series_value(a, sign * zs_lim, equation, origin)
        values = _propagate(a, equation, sign * zs_lim, start, np.array([sign * xs[j] for j in order]))
        for j, v in zip(order, values):
            out[j] = v
    return out


# ── Solutions on the real line ────────────────────────────────────────────────

def _u_line(a: float, zs: np.ndarray) -> List[_Scaled]:
    xs = np.abs(zs)
    u_pos = _recessive(a, "u", xs, _u_origin(a), _u_asymptotic)
    if np.all(zs >= 0):
        return u_pos
    v_pos = _dominant(a, "u", xs, _v_origin(a))
    # U(a, −x) = −sin(πa)·U(a, x) + π/Γ(½ + a)·V(a, x)
    s_sin, l_sin = _signed_log(-math.sin(math.pi * a))
    s_rg, l_rg = _log_rgamma(0.5 + a)
    out = []
    for z, u, v in zip(zs, u_pos, v_pos):
        if z >= 0 or abs(z) <= series_limit(a):
            out.append(u if z >= 0 else _series_value(a, float(z), "u", _u_origin(a)))
            continue
        reflected = _combine([(s_sin, l_sin, u), (s_rg, math.log(math.pi) + l_rg, v)])
        out.append(reflected.flipped())
    return out


def _v_line(a: float, zs: np.ndarray) -> List[_Scaled]:
    xs = np.abs(zs)
    v_pos = _dominant(a, "u", xs, _v_origin(a))
    if np.all(zs >= 0):
        return v_pos
    (sv0, lv0), (sv1, lv1) = _v_origin(a)
    (su0, lu0), (su1, lu1) = _u_origin(a)
    log_wr = math.log(WRONSKIAN_UV)
    # V(a, −x) = α·U(a, x) + β·V(a, x)
    alpha = (sv0 * sv1, LN2 + lv0 + lv1 - log_wr)
    beta = _signed_log_sum([(-su0 * sv1, lu0 + lv1), (-su1 * sv0, lu1 + lv0)])
    beta = (beta[0], beta[1] - log_wr)
    u_pos = _recessive(a, "u", xs, _u_origin(a), _u_asymptotic)
    out = []
    for z, u, v in zip(zs, u_pos, v_pos):
        if z >= 0:
            out.append(v)
        elif abs(z) <= series_limit(a):
            out.append(_series_value(a, float(z), "u", _v_origin(a)))
        else:
            out.append(_combine([(alpha[0], alpha[1], u), (beta[0], beta[1], v)]).flipped())
    return out


def _signed_log_sum(parts: Sequence[Tuple[float, float]]) -> Tuple[float, float]:
    live = [(s, l) for s, l in parts if s != 0.0]
    if not live:
        return 0.0, -math.inf
    ref = max(l for _, l in live)
    total = sum(s * math.exp(l - ref) for s, l in live)
    sign, log = _signed_log(total)
    return sign, log + ref


def _w_line(a: float, zs: np.ndarray) -> List[_Scaled]:
    origin = _w_origin(a)
    out: List[_Scaled] = [None] * len(zs)
    pos = [i for i, z in enumerate(zs) if z >= 0]
    neg = [i for i, z in enumerate(zs) if z < 0]
    if pos:
        xs = np.array([zs[i] for i in pos])
        for i, v in zip(pos, _recessive(a, "w", xs, origin, _w_asymptotic)):
            out[i] = v
    if neg:
        xs = np.array([-zs[i] for i in neg])
        z_a = None
        rest = []
        for i, x in zip(neg, xs):
            if x > series_limit(a):
                z_a = z_a if z_a is not None else _anchor(a, "w")
                if x >= z_a:
                    out[i] = _w_asymptotic(a, -float(x))[0]
                    continue
            rest.append(i)
        if rest:
            xs_rest = np.array([-zs[i] for i in rest])
            for i, v in zip(rest, _dominant(a, "w", xs_rest, origin, sign=-1.0)):
                out[i] = v
    return out


# ── Public API ────────────────────────────────────────────────────────────────

def _check(a: float, zs) -> Tuple[float, np.ndarray]:
    if isinstance(a, complex) or np.iscomplexobj(zs):
        raise ValidationError("parabolic cylinder functions take real a and z")
    a = float(a)
    zs = np.atleast_1d(np.asarray(zs, dtype=float))
    if not math.isfinite(a) or not np.all(np.isfinite(zs)):
        raise ValidationError(f"a and z must be finite, got a={a!r}")
    if abs(a) > config.PCF_MAX_ABS_A:
        raise SpecialFunctionRangeError(f"|a| must be at most {config.PCF_MAX_ABS_A:g}, got {a!r}")
    if np.any(np.abs(zs) > config.PCF_MAX_ABS_Z):
        raise SpecialFunctionRangeError(f"|z| must be at most {config.PCF_MAX_ABS_Z:g}")
    return a, zs


def _ubar_factor(a: float) -> Tuple[float, float]:
    x = 0.5 - a
    if x <= 0.0 and x == math.floor(x):
        raise SpecialFunctionRangeError(f"Ū(a, z) is undefined at a={a!r} (Γ(½ − a) has a pole)")
    return float(gammasgn(x)), float(gammaln(x))


_LINES = {"u": _u_line, "v": _v_line, "w": _w_line}


def pcf_grid(name: str, a: float, zs) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(values, derivatives, log scales, errors) of one function on a grid.

    ``name`` is one of "u", "v", "ubar", "w", "w_neg"; derivatives are with
    respect to z.
    """
    valid = ("u", "v", "ubar", "w", "w_neg")
    if name not in valid:
        raise ValidationError(f"function must be one of {list(valid)}, got {name!r}")
    a, zs = _check(a, zs)
    if name == "w_neg":
        states = [s.flipped() for s in _w_line(a, -zs)]
    elif name == "ubar":
        sign, log = _ubar_factor(a)
        states = [_combine([(sign, log, s)]) for s in _v_line(a, zs)]
    else:
        states = _LINES[name](a, zs)
    w = np.array([s.w for s in states])
    wp = np.array([s.wp for s in states])
    logs = np.array([s.log for s in states])
    errs = np.array([s.err for s in states])
    return w, wp, logs, errs


def pcf_hermite_tail(n: int, z: float) -> Tuple[float, float]:
    """U(−n−½, z) = e^{−z²/4}·He_n(z) as (mantissa, log scale), |z| past the range included.

    h_k = He_k(z)/z^k obeys h_{k+1} = h_k − k·h_{k−1}/z²; the scale is z^n e^{−z²/4}.
    """
    if int(n) != n or n < 0:
        raise ValidationError(f"n must be a non-negative integer, got {n!r}")
    z = float(z)
    if not math.isfinite(z) or z == 0.0:
        raise ValidationError(f"z must be finite and non-zero, got {z!r}")
    n = int(n)
    h_prev, h = 0.0, 1.0
    for k in range(n):
        h_prev, h = h, h - k * h_prev / (z * z)
    sign = -1.0 if z < 0 and n % 2 else 1.0
    return sign * h, n * math.log(abs(z)) - z * z / 4.0


@lru_cache(maxsize=8192)
def _state(name: str, a: float, z: float) -> _Scaled:
    if name == "w_neg":
        return _w_line(a, np.array([-z]))[0].flipped()
    if name == "ubar":
        sign, log = _ubar_factor(a)
        return _combine([(sign, log, _v_line(a, np.array([z]))[0])])
    return _LINES[name](a, np.array([z]))[0]


def _value(name: str, a, z, derivative: bool, scaled: bool) -> SpecFunValue:
    a, zs = _check(a, z)
    s = _state(name, a, float(zs[0]))
    value = s.wp if derivative else s.w
    result = SpecFunValue(float(value), float(s.err), s.regime, float(s.log))
    if scaled or s.log == 0.0:
        return result
    if value == 0.0:
        return SpecFunValue(0.0, 0.0, s.regime)
    magnitude = math.log(abs(value)) + s.log
    if magnitude > _MAX_LOG:
        raise SpecialFunctionOverflowError(
            f"{name}({a!r}, {z!r}) overflows a double", scaled_value=float(value),
            log_scale=float(s.log), error=float(s.err),
        )
    factor = math.exp(s.log)
    return SpecFunValue(float(value) * factor, float(s.err) * factor, s.regime)


def pcf_u(a: float, z: float, scaled: bool = False) -> SpecFunValue:
    return _value("u", a, z, False, scaled)


def pcf_u_prime(a: float, z: float, scaled: bool = False) -> SpecFunValue:
    return _value("u", a, z, True, scaled)


def pcf_v(a: float, z: float, scaled: bool = False) -> SpecFunValue:
    return _value("v", a, z, False, scaled)


def pcf_v_prime(a: float, z: float, scaled: bool = False) -> SpecFunValue:
    return _value("v", a, z, True, scaled)


def pcf_ubar(a: float, z: float, scaled: bool = False) -> SpecFunValue:
    """Ū(a, z) = Γ(½ − a)·V(a, z)."""
    return _value("ubar", a, z, False, scaled)


def pcf_ubar_prime(a: float, z: float, scaled: bool = False) -> SpecFunValue:
    return _value("ubar", a, z, True, scaled)


def pcf_w(a: float, z: float, scaled: bool = False) -> SpecFunValue:
    return _value("w", a, z, False, scaled)


def pcf_w_prime(a: float, z: float, scaled: bool = False) -> SpecFunValue:
    return _value("w", a, z, True, scaled)


def pcf_w_neg(a: float, z: float, scaled: bool = False) -> SpecFunValue:
    """W(a, −z) as a function of z."""
    return _value("w_neg", a, z, False, scaled)


def pcf_w_neg_prime(a: float, z: float, scaled: bool = False) -> SpecFunValue:
    """d/dz W(a, −z)."""
    return _value("w_neg", a, z, True, scaled)
