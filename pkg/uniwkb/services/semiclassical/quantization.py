"""
quantization.py
---------------
Bound-state spectra from the quantization conditions

    ∫_{x1}^{x2} √(−g) dx = (n + ½)π        two turning points, or one turning
                                            point and an open end (origin or
                                            a threshold-level infinity)
    ∫_{x_b}^{x0} √(−g) dx = (n + ¾)π        hard wall at x_b, particle at x > x_b

The improved solver uses the selected q; the WKB solver uses q ≡ 0.  Each
E_n is bracketed from the monotonicity of the phase in E and polished with
brentq.  A level that can only sit on the continuum threshold is reported
there and flagged marginal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from uniwkb.core import config
from uniwkb.core.errors import (
    BoundaryError,
    ClassificationError,
    ConvergenceError,
    NoBoundStateError,
    UnsupportedPotentialError,
    ValidationError,
)
from uniwkb.core.logging_config import get_logger
from uniwkb.services.potentials.catalog import PotentialSpec
from uniwkb.services.potentials.q_selection import QSelection, select_q, zero_q
from uniwkb.services.potentials.spectra import closed_form
from uniwkb.services.potentials.splitting import Splitting, build_splitting
from uniwkb.services.semiclassical.phase_integrals import phase_integral_real
from uniwkb.services.semiclassical.turning_points import (
    PairReal,
    SingleReal,
    WELL,
    find_turning_points,
)

logger = get_logger(__name__)

METHODS = ("exact", "wkb", "improved", "numerov")
SOLVER_METHODS = ("improved", "wkb")

_MAX_EXPANSIONS = 200
_MARGINAL_TOL = 1e-7


# ── Results ───────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class SpectrumEntry:
    n: int
    energy: float
    iterations: int = 0
    residual: float = 0.0
    convergence: Optional[float] = None
    marginal: bool = False


@dataclass(frozen=True)
class SpectrumResult:
    method: str
    kind: str
    entries: Tuple[SpectrumEntry, ...]
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValidationError(f"method must be one of {list(METHODS)}, got {self.method!r}")

    @property
    def energies(self) -> List[float]:
        return [e.energy for e in self.entries]

    @property
    def quantum_numbers(self) -> List[int]:
        return [e.n for e in self.entries]

    def energy(self, n: int) -> float:
        for entry in self.entries:
            if entry.n == n:
                return entry.energy
        raise KeyError(n)


@dataclass(frozen=True)
class QuantizationPhase:
    value: float
    offset: float
    interval: Tuple[float, float]

    def residual(self, n: int) -> float:
        return self.value - (n + self.offset) * math.pi


# ── Phase of the quantization condition ───────────────────────────────────────

def _tail_decays(splitting: Splitting, direction: float) -> bool:
    """True when |g| falls off faster than 1/x² towards ``direction``·∞."""
    L = splitting.spec.length_scale
    near, far = direction * 1e3 * L, direction * 1e4 * L
    lo = near * near * abs(float(splitting(near)))
    hi = far * far * abs(float(splitting(far)))
    if not (math.isfinite(lo) and math.isfinite(hi)):
        return False
    return hi <= 0.1 * lo


def _boundary_phase(splitting: Splitting, boundary: float) -> QuantizationPhase:
    spec = splitting.spec
    if not spec.contains(boundary):
        raise BoundaryError(f"boundary x_b={boundary!r} is outside the {spec.domain} domain")
    if float(splitting(boundary)) >= 0.0:
        raise BoundaryError(f"boundary x_b={boundary!r} must lie in the classically allowed region")
    tps = find_turning_points(splitting)
    beyond = [x for x in tps.real_points if x > boundary]
    if not beyond:
        raise BoundaryError(f"no turning point beyond x_b={boundary!r} at E={splitting.energy!r}")
    x0 = min(beyond)
    phase = phase_integral_real(splitting, boundary, x0, -1)
    return QuantizationPhase(phase.value, 0.75, (boundary, x0))


def quantization_phase(splitting: Splitting, boundary: Optional[float] = None) -> QuantizationPhase:
    """∫√(−g) over the classically allowed region and the matching offset."""
    if boundary is not None:
        return _boundary_phase(splitting, boundary)

    spec = splitting.spec
    tps = find_turning_points(splitting)
    cls = tps.classification

    if isinstance(cls, PairReal):
        if tps.extreme_kind != WELL:
            raise ClassificationError(f"{spec.kind} has a barrier, not a well, at E={splitting.energy!r}")
        if tps.coalesced:
            return QuantizationPhase(0.0, 0.5, (cls.x1, cls.x2))
        return QuantizationPhase(phase_integral_real(splitting, cls.x1, cls.x2, -1).value, 0.5, (cls.x1, cls.x2))

    if isinstance(cls, SingleReal):
        if tps.open_to_origin:
            lo, hi = 0.0, cls.x0
        elif tps.open_to_infinity and _tail_decays(splitting, 1.0):
            lo, hi = cls.x0, math.inf
        elif tps.open_to_negative_infinity and _tail_decays(splitting, -1.0):
            lo, hi = -math.inf, cls.x0
        else:
            raise BoundaryError(
                f"one turning point at x0={cls.x0!r} and an unbounded allowed region; supply a boundary x_b"
            )
        return QuantizationPhase(phase_integral_real(splitting, lo, hi, -1).value, 0.5, (lo, hi))

    if cls is None:
        lo = 0.0 if spec.half_line else -math.inf
        for direction, is_open in ((1.0, tps.open_to_infinity), (-1.0, tps.open_to_negative_infinity)):
            if is_open and not _tail_decays(splitting, direction):
                raise BoundaryError(f"{spec.kind} has no turning point at E={splitting.energy!r}")
        return QuantizationPhase(phase_integral_real(splitting, lo, math.inf, -1).value, 0.5, (lo, math.inf))

    raise ClassificationError(f"no classically allowed well for {spec.kind} at E={splitting.energy!r}")


# ── Bracketing ────────────────────────────────────────────────────────────────

def energy_scale(spec: PotentialSpec) -> float:
    """ħ²/(mL²)."""
    return spec.params.hbar**2 / (spec.params.m * spec.length_scale**2)


def _lowest_energy(spec: PotentialSpec, selection: QSelection, boundary: Optional[float]) -> Optional[float]:
    """Energy at which the allowed region shrinks to a point, when known."""
    if boundary is not None:
        return float(selection.derivative(boundary, 0)) / spec.coupling
    extreme = selection.extreme
    if extreme is not None and extreme.is_minimum:
        return float(selection.derivative(extreme.x, 0)) / spec.coupling
    return None


def _seed(spec: PotentialSpec, n: int, method: str) -> Optional[float]:
    if not spec.is_catalog:
        return None
    try:
        return closed_form(spec, n, "exact" if method == "improved" else "wkb")
    except (NoBoundStateError, UnsupportedPotentialError):
        return None


class _Condition:
    """F(E) = phase(E) − (n + offset)π for one quantum number."""

    def __init__(self, spec: PotentialSpec, selection: QSelection, n: int,
                 boundary: Optional[float], floor: Optional[float]):
        self.spec = spec
        self.selection = selection
        self.n = n
        self.boundary = boundary
        self.floor = floor
        self.offset = 0.75 if boundary is not None else 0.5

    def __call__(self, E: float) -> float:
        if self.floor is not None and E <= self.floor:
            return -(self.n + self.offset) * math.pi
        splitting = build_splitting(self.spec, E, self.selection)
        phase = quantization_phase(splitting, self.boundary)
        return phase.residual(self.n)


def _bracket(F: _Condition, seed: Optional[float], cap: float, scale: float) -> Tuple[float, float, Optional[float]]:
    """(E_lo, E_hi) with F(E_lo) < 0 < F(E_hi); E_hi may be the threshold cap.

    The third element is F(cap) when the bracket ended on the threshold.
    """
    lo = F.floor
    if lo is None:
        lo = (seed if seed is not None else 0.0) - scale
        step = scale
        for _ in range(_MAX_EXPANSIONS):
            if F(lo) < 0.0:
                break
            lo -= step
            step *= 2.0
        else:
            raise ConvergenceError(f"could not bracket E_{F.n} from below for {F.spec.kind}")

    start = lo
    if seed is not None and seed > lo:
        probe = seed - 1e-3 * max(abs(seed), scale)
        if probe > lo and F(probe) < 0.0:
            start = probe
    lo = start
    step = max(1e-3 * max(abs(start), scale), 1e-2 * scale)
    E = start + step
    for _ in range(_MAX_EXPANSIONS):
        if E >= cap:
            E = lo + 0.5 * (cap - lo)
            if cap - E <= 1e-12 * (abs(cap) + scale):
                break
        value = F(E)
        logger.debug("bracket n=%d: F(%.16g) = %.6g", F.n, E, value)
        if value > 0.0:
            return lo, E, None
        lo = E
        step *= 2.0
        E = lo + step
    else:
        raise ConvergenceError(f"could not bracket E_{F.n} from above for {F.spec.kind}")

    try:
        return lo, cap, F(cap)
    except BoundaryError as exc:
        raise NoBoundStateError(
            f"{F.spec.kind} has no bound state with n={F.n} below the threshold {cap!r}"
        ) from exc


# ── Solvers ───────────────────────────────────────────────────────────────────

def _check_range(n_range: Iterable[int]) -> List[int]:
    ns = list(n_range)
    if not ns:
        raise ValidationError("quantum-number range must not be empty")
    for n in ns:
        if int(n) != n or n < 0:
            raise ValidationError(f"quantum numbers must be non-negative integers, got {n!r}")
    return sorted(int(n) for n in ns)


def _solve_one(F: _Condition, seed: Optional[float], cap: float, scale: float) -> SpectrumEntry:
    lo, hi, at_cap = _bracket(F, seed, cap, scale)
    if at_cap is not None:
        if abs(at_cap) <= _MARGINAL_TOL:
            logger.warning("%s n=%d sits on the continuum threshold E=%r (residual %.3g)",
                           F.spec.kind, F.n, cap, at_cap)
            return SpectrumEntry(F.n, float(cap), 0, abs(at_cap), marginal=True)
        if at_cap < 0.0:
            raise NoBoundStateError(f"{F.spec.kind} has no bound state with n={F.n} below the threshold {cap!r}")
    xtol = config.ENERGY_RTOL * max(abs(lo), abs(hi), scale)
    try:
        root, info = brentq(F, lo, hi, xtol=xtol, rtol=4.0 * np.finfo(float).eps,
                            maxiter=200, full_output=True)
    except (RuntimeError, ValueError) as exc:
        raise ConvergenceError(f"root finding for n={F.n} in [{lo!r}, {hi!r}] failed: {exc}") from exc
    if not info.converged:
        raise ConvergenceError(f"root finding for n={F.n} did not converge: {info.flag}")
    residual = abs(F(root))
    if residual > config.RESIDUAL_TOL:
        logger.warning("%s n=%d: quantization residual %.3g exceeds %.1g",
                       F.spec.kind, F.n, residual, config.RESIDUAL_TOL)
    return SpectrumEntry(F.n, float(root), int(info.iterations), float(residual))


def _solve(spec: PotentialSpec, n_range: Iterable[int], method: str,
           boundary: Optional[float]) -> SpectrumResult:
    ns = _check_range(n_range)
    if boundary is not None and not math.isfinite(boundary):
        raise ValidationError(f"boundary must be finite, got {boundary!r}")
    selection = select_q(spec) if method == "improved" else zero_q(spec)
    floor = _lowest_energy(spec, selection, boundary)
    scale = energy_scale(spec)
    cap = spec.threshold

    entries = []
    for n in ns:
        F = _Condition(spec, selection, n, boundary, floor)
        seed = None if boundary is not None else _seed(spec, n, method)
        entry = _solve_one(F, seed, cap, scale)
        logger.debug("%s %s n=%d E=%.16g (%d iterations)", method, spec.kind, n, entry.energy, entry.iterations)
        entries.append(entry)

    for previous, current in zip(entries[:-1], entries[1:]):
        if not current.energy > previous.energy:
            raise ConvergenceError(
                f"{method} energies are not increasing: E_{previous.n}={previous.energy!r}, "
                f"E_{current.n}={current.energy!r}"
            )
    params = spec.params.as_dict()
    if boundary is not None:
        params["boundary"] = boundary
    return SpectrumResult(method, spec.kind, tuple(entries), params)


def solve_spectrum_improved(spec: PotentialSpec, n_range: Iterable[int],
                            boundary: Optional[float] = None) -> SpectrumResult:
    """E_n from ∫√(−g) = (n+½)π with the selected q, or (n+¾)π against a wall at x_b."""
    return _solve(spec, n_range, "improved", boundary)


def solve_spectrum_wkb(spec: PotentialSpec, n_range: Iterable[int],
                       boundary: Optional[float] = None) -> SpectrumResult:
    """Same conditions with q ≡ 0: the conventional WKB spectrum."""
    return _solve(spec, n_range, "wkb", boundary)


def closed_form_spectrum(spec: PotentialSpec, n_range: Iterable[int], method: str = "exact") -> SpectrumResult:
    """Catalog closed forms packaged like the solver output."""
    ns = _check_range(n_range)
    entries = tuple(SpectrumEntry(n, closed_form(spec, n, method)) for n in ns)
    return SpectrumResult(method, spec.kind, entries, spec.params.as_dict())
