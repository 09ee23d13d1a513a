"""
uniform.py
----------
Uniform approximate wave functions sampled on a grid.

    single turning point   ψ = (ξ/g)^{1/4}·(a0 Ai(ξ) + b0 Bi(ξ))
    well                   ψ = |(ζ² − ζ0²)/g|^{1/4}·U(−n − ½, √2ζ)
    barrier                ψ = |(ζ² − ζ0²)/g|^{1/4}·(a2 W(ζ0²/2, √2ζ) + b2 W(ζ0²/2, −√2ζ))

The prefactors have removable singularities at the turning points.  Within
δ = 10⁻³·L of one they are replaced by the quadratic through the analytic
limit and the direct values at δ and 2δ on the sample's side.

A barrier wave incident from the left is the outgoing-only combination
E(a, z) = k^{−½}W(a, z) + i·k^{½}W(a, −z), whose incident part on the far
left has amplitude (i/2)(k + 1/k).  Dividing by it gives unit incident flux
and a transmitted flux of 1/(1 + e^{πζ0²}).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from uniwkb.core import config
from uniwkb.core.errors import (
    BoundaryError,
    ClassificationError,
    DomainError,
    MethodInapplicableError,
    OffShellError,
    ValidationError,
)
from uniwkb.core.logging_config import get_logger
from uniwkb.services.potentials.catalog import PotentialSpec
from uniwkb.services.potentials.splitting import Splitting
from uniwkb.services.semiclassical.maps import xi_from_integral, xi_of_x, zeta_of_x, zeta_on_grid
from uniwkb.services.semiclassical.phase_integrals import abs_sqrt_integral, zeta0_squared
from uniwkb.services.semiclassical.turning_points import (
    BARRIER,
    WELL,
    PairReal,
    TurningPointSet,
)
from uniwkb.services.specfun.airy import airy_all
from uniwkb.services.specfun.parabolic import pcf_grid, pcf_hermite_tail, transmission_k
from uniwkb.utils.grids import trapezoid_with_tails

logger = get_logger(__name__)

ALLOWED = "allowed"
FORBIDDEN = "forbidden"
TURNING = "turning-neighborhood"
REGIONS = (ALLOWED, FORBIDDEN, TURNING)

DECAY_AT_INFINITY = "decay-at-+inf"
DECAY_AT_ORIGIN = "decay-at-origin"
INCIDENT_FROM_LEFT = "incident-from-left"
COEFFICIENTS = "coefficients"
BC_KINDS = (DECAY_AT_INFINITY, DECAY_AT_ORIGIN, INCIDENT_FROM_LEFT, COEFFICIENTS)

UNIT_L2 = "unit-L2"
UNIT_INCIDENT_FLUX = "unit-incident-flux"
RAW = "raw"
NORMALIZATIONS = (UNIT_L2, UNIT_INCIDENT_FLUX, RAW)

SQRT_PI = math.sqrt(math.pi)
_DELTA = 1e-3
_MAX_LOG = 700.0


@dataclass(frozen=True)
class WaveSample:
    """ψ(x) = psi·e^{log_scale}; ``map_value`` is ξ or ζ at x (None for oracle samples)."""

    x: float
    psi: Union[float, complex]
    log_scale: float
    region: str
    map_value: Optional[float]

    @property
    def value(self) -> Union[float, complex]:
        if self.log_scale == 0.0 or self.psi == 0:
            return self.psi
        return self.psi * math.exp(self.log_scale)


@dataclass(frozen=True)
class BoundaryCondition:
    kind: str
    normalization: str = RAW
    a: Optional[float] = None
    b: Optional[float] = None

    def __post_init__(self):
        if self.kind not in BC_KINDS:
            raise ValidationError(f"boundary condition must be one of {list(BC_KINDS)}, got {self.kind!r}")
        if self.normalization not in NORMALIZATIONS:
            raise ValidationError(f"normalization must be one of {list(NORMALIZATIONS)}, got {self.normalization!r}")
        if self.kind == COEFFICIENTS:
            if self.a is None or self.b is None:
                raise ValidationError("a coefficients boundary condition needs both a and b")
            if self.normalization != RAW:
                raise ValidationError("explicit coefficients take the raw normalization")
        elif self.a is not None or self.b is not None:
            raise ValidationError(f"coefficients are only accepted with kind {COEFFICIENTS!r}")


# ── Helpers ───────────────────────────────────────────────────────────────────

def _fold(value, log_scale: float):
    """(value, log) with the exponent folded in whenever the result is representable."""
    if value == 0 or log_scale == 0.0:
        return value, 0.0
    magnitude = math.log(abs(value)) + log_scale
    if -_MAX_LOG <= magnitude <= _MAX_LOG:
        return value / abs(value) * math.exp(magnitude), 0.0
    return value, log_scale


def _combine(terms) -> Tuple[Union[float, complex], float]:
    """Σ c·v·e^{l} over (c, v, l) as (value, common log)."""
    live = [(c * v, l) for c, v, l in terms if c != 0 and v != 0]
    if not live:
        return 0.0, 0.0
    ref = max(l for _, l in live)
    return sum(v * math.exp(l - ref) for v, l in live), ref


def _grid(spec: PotentialSpec, grid) -> np.ndarray:
    xs = np.atleast_1d(np.asarray(grid, dtype=float))
    if xs.ndim != 1 or xs.size == 0:
        raise ValidationError("grid must be a non-empty 1-D sequence")
    for x in xs:
        if not spec.contains(float(x)):
            raise DomainError(f"x={float(x)!r} lies outside the {spec.domain} domain of {spec.kind}")
    return xs


def _region(g_value: float, near_turning_point: bool) -> str:
    if near_turning_point:
        return TURNING
    return FORBIDDEN if g_value > 0 else ALLOWED


class _Prefactor:
    """Direct prefactor with quadratic patches over its removable singularities."""

    def __init__(self, direct: Callable[[float], float], limits: Dict[float, float], delta: float):
        self.direct = direct
        self.limits = limits
        self.delta = delta
        self._anchors: Dict[Tuple[float, int], Tuple[float, float]] = {}

    def singular_point(self, x: float) -> Optional[float]:
        near = [s for s in self.limits if abs(x - s) < self.delta]
        return min(near, key=lambda s: abs(x - s)) if near else None

    def patched(self, x: float, s: float) -> float:
        t = x - s
        p0 = self.limits[s]
        if t == 0.0:
            return p0
        side = 1 if t > 0 else -1
        key = (s, side)
        if key not in self._anchors:
            self._anchors[key] = (self.direct(s + side * self.delta), self.direct(s + 2 * side * self.delta))
        p1, p2 = self._anchors[key]
        u = abs(t) / self.delta
        return p0 + u * (-1.5 * p0 + 2.0 * p1 - 0.5 * p2) + u * u * (0.5 * p0 - p1 + 0.5 * p2)


def _pair_limit(splitting: Splitting, x_i: float, z0sq: float) -> float:
    """lim |(ζ² − ζ0²)/g|^{1/4} at a simple turning point of a pair."""
    g1 = abs(float(splitting.derivative(x_i, 1)))
    return (2.0 * math.sqrt(abs(z0sq))) ** (1.0 / 6.0) * g1 ** (-1.0 / 6.0)


def _xi_on_grid(splitting: Splitting, x0: float, xs: np.ndarray) -> np.ndarray:
    order = np.argsort(xs)
    ordered = xs[order]
    integrals = np.empty_like(ordered)
    start = int(np.searchsorted(ordered, x0))
    running, previous = 0.0, x0
    for i in range(start, len(ordered)):
        running += abs_sqrt_integral(splitting, previous, float(ordered[i]))[0]
        integrals[i], previous = running, float(ordered[i])
    running, previous = 0.0, x0
    for i in range(start - 1, -1, -1):
        running += abs_sqrt_integral(splitting, previous, float(ordered[i]))[0]
        integrals[i], previous = running, float(ordered[i])
    xis = np.array([xi_from_integral(I, float(splitting(x))) for I, x in zip(integrals, ordered)])
    result = np.empty_like(xis)
    result[order] = xis
    return result


# ── Single turning point ──────────────────────────────────────────────────────

def _forbidden_side(splitting: Splitting, x0: float, delta: float) -> int:
    spec = splitting.spec
    if float(splitting(x0 + delta)) > 0:
        return 1
    if spec.contains(x0 - delta) and float(splitting(x0 - delta)) > 0:
        return -1
    raise BoundaryError(f"g does not change sign at x0={x0!r}; it is not a simple turning point")


def _single_coefficients(bc: BoundaryCondition, side: int, spec: PotentialSpec) -> Tuple[float, float]:
    if bc.kind == COEFFICIENTS:
        return float(bc.a), float(bc.b)
    if bc.kind == INCIDENT_FROM_LEFT:
        raise BoundaryError("an incident wave needs a barrier; a single turning point has one allowed side")
    if bc.kind == DECAY_AT_INFINITY and side != 1:
        raise BoundaryError("decay at +∞ needs the forbidden region to the right of the turning point")
    if bc.kind == DECAY_AT_ORIGIN and not (spec.half_line and side == -1):
        raise BoundaryError("decay at the origin needs a half-line problem forbidden between 0 and x0")
    if bc.normalization == UNIT_L2:
        raise BoundaryError("a single-turning-point solution oscillates without decay; it is not square integrable")
    # Ai(−ξ) carries a standing wave of two unit-flux waves divided by 2√π.
    return (2.0 * SQRT_PI if bc.normalization == UNIT_INCIDENT_FLUX else 1.0), 0.0


def psi_single_tp(splitting: Splitting, x0: float, bc: BoundaryCondition, grid) -> List[WaveSample]:
    """(ξ/g)^{1/4}(a0 Ai(ξ) + b0 Bi(ξ)); decaying conditions set b0 = 0."""
    spec = splitting.spec
    xs = _grid(spec, grid)
    x0 = float(x0)
    delta = _DELTA * spec.length_scale
    side = _forbidden_side(splitting, x0, delta)
    a0, b0 = _single_coefficients(bc, side, spec)

    limit = abs(float(splitting.derivative(x0, 1))) ** (-1.0 / 6.0)

    def direct(x: float) -> float:
        return (abs(xi_of_x(splitting, x0, x)) / abs(float(splitting(x)))) ** 0.25

    prefactor = _Prefactor(direct, {x0: limit}, delta)
    xis = _xi_on_grid(splitting, x0, xs)
    samples = []
    for x, xi in zip(xs, xis):
        x, xi = float(x), float(xi)
        g = float(splitting(x))
        s = prefactor.singular_point(x)
        P = prefactor.patched(x, s) if s is not None else (abs(xi) / abs(g)) ** 0.25
        ai, _, bi, _ = airy_all(xi, scaled=True)
        value, log = _combine([(a0, ai.value, ai.log_scale), (b0, bi.value, bi.log_scale)])
        value, log = _fold(P * value, log)
        samples.append(WaveSample(x, float(value), log, _region(g, s is not None), xi))
    return samples


# ── Well ──────────────────────────────────────────────────────────────────────

def _magnitudes(samples: Sequence[WaveSample]) -> np.ndarray:
    with np.errstate(all="ignore"):
        return np.array([abs(s.psi) * math.exp(min(s.log_scale, _MAX_LOG)) for s in samples])


def _decay_rate(splitting: Splitting, x: float) -> Optional[float]:
    g = float(splitting(x))
    return math.sqrt(g) if g > 0 else None


def psi_well(splitting: Splitting, tps: TurningPointSet, n: int, grid,
             normalization: str = UNIT_L2) -> List[WaveSample]:
    """Level-n bound state; the largest sample is made positive.

    Raises OffShellError unless ζ0² = 2n + 1 within 2·OFF_SHELL_TOL.
    """
    if int(n) != n or n < 0:
        raise ValidationError(f"n must be a non-negative integer, got {n!r}")
    if normalization not in (UNIT_L2, RAW):
        raise ValidationError(f"normalization must be one of {[UNIT_L2, RAW]}, got {normalization!r}")
    cls = tps.classification
    if not isinstance(cls, PairReal) or tps.extreme_kind != WELL or tps.coalesced:
        raise ClassificationError(f"a bound state needs a well with two real turning points, got {tps.kind!r}")
    spec = splitting.spec
    xs = _grid(spec, grid)
    z0sq = zeta0_squared(tps, splitting).value
    if abs(z0sq - (2 * n + 1)) > 2.0 * config.OFF_SHELL_TOL:
        raise OffShellError(f"E={splitting.energy!r} is off shell for n={n}: ζ0² = {z0sq!r}, expected {2 * n + 1}")

    delta = _DELTA * spec.length_scale
    limits = {cls.x1: _pair_limit(splitting, cls.x1, z0sq), cls.x2: _pair_limit(splitting, cls.x2, z0sq)}

    def direct(x: float) -> float:
        z = zeta_of_x(splitting, tps, x, z0sq)
        return (abs(z * z - z0sq) / abs(float(splitting(x)))) ** 0.25

    prefactor = _Prefactor(direct, limits, delta)
    zetas = zeta_on_grid(splitting, tps, xs, z0sq)
    zs = math.sqrt(2.0) * zetas
    inside = np.abs(zs) <= config.PCF_MAX_ABS_Z
    u = np.zeros_like(zs)
    logs = np.zeros_like(zs)
    if inside.any():
        u[inside], _, logs[inside], _ = pcf_grid("u", -(n + 0.5), zs[inside])
    for i in np.flatnonzero(~inside):
        u[i], logs[i] = pcf_hermite_tail(n, zs[i])

    samples = []
    for x, zeta, w, log in zip(xs, zetas, u, logs):
        x = float(x)
        g = float(splitting(x))
        s = prefactor.singular_point(x)
        P = prefactor.patched(x, s) if s is not None else (abs(zeta * zeta - z0sq) / abs(g)) ** 0.25
        value, scale = _fold(P * float(w), float(log))
        samples.append(WaveSample(x, float(value), scale, _region(g, s is not None), float(zeta)))

    if normalization == UNIT_L2:
        order = np.argsort(xs)
        density = _magnitudes(samples) ** 2
        norm = math.sqrt(trapezoid_with_tails(
            xs, density,
            left_rate=_decay_rate(splitting, float(xs[order[0]])),
            right_rate=_decay_rate(splitting, float(xs[order[-1]])),
        ))
        if not norm > 0:
            raise ValidationError("the grid does not cover the classically allowed region")
        samples = [_rescale(s, 1.0 / norm) for s in samples]
    peak = samples[int(np.argmax(_magnitudes(samples)))]
    if peak.psi < 0:
        samples = [_rescale(s, -1.0) for s in samples]
    return samples


def _rescale(sample: WaveSample, factor: float) -> WaveSample:
    value, log = _fold(sample.psi * factor, sample.log_scale)
    return WaveSample(sample.x, value, log, sample.region, sample.map_value)


# ── Barrier ───────────────────────────────────────────────────────────────────

def _barrier_setup(splitting: Splitting, tps: TurningPointSet):
    if not tps.is_pair or tps.extreme_kind != BARRIER:
        raise ClassificationError(f"a barrier wave needs a pair around a maximum of g, got {tps.kind!r}")
    z0sq = zeta0_squared(tps, splitting).value
    cls = tps.classification
    if tps.coalesced:
        g2 = abs(float(splitting.derivative(tps.extreme.x, 2)))
        limits = {tps.extreme.x: (0.5 * g2) ** (-0.125)}
    elif isinstance(cls, PairReal):
        limits = {cls.x1: _pair_limit(splitting, cls.x1, z0sq), cls.x2: _pair_limit(splitting, cls.x2, z0sq)}
    else:
        limits = {}
    return z0sq, limits


def psi_barrier(splitting: Splitting, tps: TurningPointSet, bc: BoundaryCondition, grid) -> List[WaveSample]:
    """Barrier wave; complex for an incident wave, real for explicit coefficients."""
    if bc.kind not in (INCIDENT_FROM_LEFT, COEFFICIENTS):
        raise BoundaryError(f"a barrier wave takes {INCIDENT_FROM_LEFT!r} or {COEFFICIENTS!r}, got {bc.kind!r}")
    if bc.kind == INCIDENT_FROM_LEFT and bc.normalization == UNIT_L2:
        raise BoundaryError("a scattering state is not square integrable")
    spec = splitting.spec
    xs = _grid(spec, grid)
    z0sq, limits = _barrier_setup(splitting, tps)
    a = 0.5 * z0sq

    def direct(x: float) -> float:
        z = zeta_of_x(splitting, tps, x, z0sq)
        return (abs(z * z - z0sq) / abs(float(splitting(x)))) ** 0.25

    prefactor = _Prefactor(direct, limits, _DELTA * spec.length_scale)
    zetas = zeta_on_grid(splitting, tps, xs, z0sq)
    zs = math.sqrt(2.0) * zetas
    w1, _, l1, _ = pcf_grid("w", a, zs)
    w2, _, l2, _ = pcf_grid("w_neg", a, zs)

    offset = 0.0
    if bc.kind == COEFFICIENTS:
        c1, c2, shift = float(bc.a), float(bc.b), (0.0, 0.0)
    else:
        k = transmission_k(a)
        log_k = math.log(k)
        c1, c2, shift = 1.0, 1j, (-0.5 * log_k, 0.5 * log_k)
        if bc.normalization == UNIT_INCIDENT_FLUX:
            # 2^{−1/4}/A_in with A_in = i·|A_in|
            c1, c2 = -1j * 2.0 ** -0.25, 2.0 ** -0.25
            offset = log_k - math.log1p(k * k) + math.log(2.0)

    samples = []
    for x, zeta, v1, g1_log, v2, g2_log in zip(xs, zetas, w1, l1, w2, l2):
        x = float(x)
        g = float(splitting(x))
        s = prefactor.singular_point(x)
        P = prefactor.patched(x, s) if s is not None else (abs(zeta * zeta - z0sq) / abs(g)) ** 0.25
        value, log = _combine([(c1, float(v1), float(g1_log) + shift[0]), (c2, float(v2), float(g2_log) + shift[1])])
        value, log = _fold(P * value, log + offset)
        if bc.kind == COEFFICIENTS:
            value = float(np.real(value))
        samples.append(WaveSample(x, value, log, _region(g, s is not None), float(zeta)))
    return samples


def barrier_flux_ratio(splitting: Splitting, tps: TurningPointSet, grid) -> float:
    """Transmitted over incident flux of the incident-from-left barrier wave.

    The wave is decomposed at the left grid end on the exact pair E(a, −z),
    conj E(a, −z) and its flux taken from the W Wronskian at the right end.
    """
    spec = splitting.spec
    xs = np.sort(_grid(spec, grid))
    z0sq, _ = _barrier_setup(splitting, tps)
    a = 0.5 * z0sq
    k = transmission_k(a)
    ends = math.sqrt(2.0) * zeta_on_grid(splitting, tps, [float(xs[0]), float(xs[-1])], z0sq)
    w1, w1p, l1, _ = pcf_grid("w", a, ends)
    w2, w2p, l2, _ = pcf_grid("w_neg", a, ends)
    W1, W1p = w1 * np.exp(l1), w1p * np.exp(l1)
    W2, W2p = w2 * np.exp(l2), w2p * np.exp(l2)
    rk = math.sqrt(k)

    def outgoing(i):
        return W1[i] / rk + 1j * rk * W2[i], W1p[i] / rk + 1j * rk * W2p[i]

    def reflected(i):
        return W2[i] / rk + 1j * rk * W1[i], W2p[i] / rk + 1j * rk * W1p[i]

    def wronskian(f, h):
        return f[0] * h[1] - f[1] * h[0]

    psi_right = outgoing(1)
    transmitted = float(np.imag(np.conj(psi_right[0]) * psi_right[1]))
    psi_left = outgoing(0)
    G = reflected(0)
    F = (np.conj(G[0]), np.conj(G[1]))
    alpha = wronskian(psi_left, G) / wronskian(F, G)
    incident = abs(alpha) ** 2 * float(np.imag(np.conj(F[0]) * F[1]))
    return transmitted / incident


# ── WKB comparison and diagnostics ────────────────────────────────────────────

def wkb_wavefunction(splitting: Splitting, x0: float, x: float) -> float:
    """WKB continuation of the decaying Airy solution with a0 = 1."""
    g = float(splitting(x))
    if g == 0.0:
        raise MethodInapplicableError(f"the WKB form diverges at the turning point x={x!r}")
    phase = abs(abs_sqrt_integral(splitting, float(x0), float(x))[0])
    if g > 0:
        return abs(g) ** -0.25 * math.exp(-phase) / (2.0 * SQRT_PI)
    return abs(g) ** -0.25 * math.cos(phase - 0.25 * math.pi) / SQRT_PI


def node_count(samples: Sequence[WaveSample], threshold: float = 1e-8) -> int:
    """Sign changes in x order, ignoring samples below ``threshold``·max|ψ|."""
    ordered = sorted(samples, key=lambda s: s.x)
    logs = []
    for s in ordered:
        magnitude = abs(np.real(s.psi))
        logs.append(math.log(magnitude) + s.log_scale if magnitude > 0 else -math.inf)
    if not ordered or max(logs) == -math.inf:
        return 0
    cutoff = max(logs) + math.log(threshold)
    signs = [np.sign(np.real(s.psi)) for s, l in zip(ordered, logs) if l >= cutoff]
    return int(sum(1 for p, q in zip(signs[:-1], signs[1:]) if p != q))
