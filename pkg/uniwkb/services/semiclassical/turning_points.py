"""
turning_points.py
-----------------
Zeros of g(x) at one energy and their classification.

    SingleReal        one simple real zero x0
    PairReal          x1 < x2; g < 0 between them (well) or g > 0 (barrier)
    PairComplexConj   x1 = conj(x2), Im x1 < 0 (barrier above its effective top)

Real zeros are bracketed on a scan grid, the grid being pushed outward while
an end stays classically allowed, and refined with brentq.  A complex pair is
polished with Newton's method started from x_m ± i·√(2g(x_m)/g''(x_m)).

When g < 0 on the whole domain (a state sitting on the continuum threshold of
a full-line well, or V ≡ 0) the set has no classification and only the
``open_*`` flags describe the allowed region.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy.optimize import brentq, newton

from uniwkb.core import config
from uniwkb.core.errors import (
    ClassificationError,
    ConvergenceError,
    MethodInapplicableError,
    UnsupportedTopologyError,
)
from uniwkb.core.logging_config import get_logger
from uniwkb.services.potentials.catalog import PotentialSpec
from uniwkb.services.potentials.q_selection import ExtremePoint, search_grid
from uniwkb.services.potentials.splitting import Splitting

logger = get_logger(__name__)

WELL = "well"
BARRIER = "barrier"

# Each outward extension multiplies the reach of the scan by this factor.
_GROWTH = 4.0
_MAX_EXTENSIONS = 12


# ── Classifications ───────────────────────────────────────────────────────────

@dataclass(frozen=True)
class SingleReal:
    x0: float
    kind = "single"

    @property
    def points(self) -> Tuple[float, ...]:
        return (self.x0,)


@dataclass(frozen=True)
class PairReal:
    x1: float
    x2: float
    kind = "pair-real"

    @property
    def points(self) -> Tuple[float, ...]:
        return (self.x1, self.x2)

    @property
    def separation(self) -> float:
        return self.x2 - self.x1


@dataclass(frozen=True)
class PairComplexConj:
    x1: complex
    x2: complex
    kind = "pair-complex"

    @property
    def points(self) -> Tuple[complex, ...]:
        return (self.x1, self.x2)

    @property
    def separation(self) -> float:
        return abs(self.x2 - self.x1)


Classification = Union[SingleReal, PairReal, PairComplexConj]


@dataclass(frozen=True)
class TurningPointSet:
    classification: Optional[Classification]
    energy: float
    extreme: Optional[ExtremePoint] = None
    extreme_kind: Optional[str] = None
    coalesced: bool = False
    open_to_origin: bool = False
    open_to_infinity: bool = False
    open_to_negative_infinity: bool = False

    @property
    def kind(self) -> str:
        return self.classification.kind if self.classification is not None else "none"

    @property
    def points(self) -> tuple:
        return self.classification.points if self.classification is not None else ()

    @property
    def real_points(self) -> Tuple[float, ...]:
        if isinstance(self.classification, (SingleReal, PairReal)):
            return tuple(float(p) for p in self.classification.points)
        return ()

    @property
    def is_pair(self) -> bool:
        return isinstance(self.classification, (PairReal, PairComplexConj))

    @property
    def center(self) -> float:
        """Real anchor of a pair: Re x_i, i.e. the midpoint of x1 and x2."""
        if not self.is_pair:
            raise ClassificationError(f"turning-point set of kind {self.kind!r} has no pair center")
        x1, x2 = self.classification.points
        return float(np.real(x1 + x2) / 2.0)


# ── Scanning ──────────────────────────────────────────────────────────────────

def g_scale(splitting: Splitting) -> float:
    """Magnitude against which |g| is judged to vanish."""
    spec = splitting.spec
    L = spec.length_scale
    extreme = splitting.extreme
    curvature = abs(extreme.g2) * L**2 if extreme is not None else 0.0
    return abs(spec.coupling * splitting.energy) + curvature + 1.0 / L**2


def _values(splitting: Splitting, grid: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        return np.asarray(splitting(grid), dtype=float)


def _refine(splitting: Splitting, a: float, b: float) -> float:
    scale = splitting.spec.length_scale
    try:
        return float(brentq(splitting, a, b, xtol=config.ROOT_XTOL * scale,
                            rtol=4.0 * np.finfo(float).eps, maxiter=200))
    except (RuntimeError, ValueError) as exc:
        raise ConvergenceError(f"turning point refinement in [{a!r}, {b!r}] failed: {exc}") from exc


def _roots_on(splitting: Splitting, grid: np.ndarray, values: np.ndarray):
    """Simple zeros from sign changes, plus tangent zeros sitting on grid points."""
    roots, tangents = [], []
    signs = np.sign(values)
    for i in range(len(grid)):
        if not np.isfinite(values[i]):
            continue
        if signs[i] == 0.0:
            left = signs[i - 1] if i > 0 else 0.0
            right = signs[i + 1] if i + 1 < len(grid) else 0.0
            if left != 0.0 and left == right:
                tangents.append(float(grid[i]))
            else:
                roots.append(float(grid[i]))
            continue
        if i + 1 < len(grid) and np.isfinite(values[i + 1]) and signs[i] * signs[i + 1] < 0:
            roots.append(_refine(splitting, float(grid[i]), float(grid[i + 1])))
    return roots, tangents


def _extend(splitting: Splitting, start: float, direction: float):
    """Push the scan past ``start`` while g stays negative; (root or None, open flag)."""
    L = splitting.spec.length_scale
    reach = max(abs(start), L)
    previous = start
    for _ in range(_MAX_EXTENSIONS):
        reach *= _GROWTH
        edge = direction * reach
        grid = np.linspace(previous, edge, 257)
        values = _values(splitting, grid)
        if np.any(values == 0.0) and np.all(values <= 0.0):
            # g has underflowed: the allowed region runs to infinity
            return None, True
        crossing = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)
        if crossing.size:
            i = int(crossing[0])
            return _refine(splitting, float(min(grid[i], grid[i + 1])), float(max(grid[i], grid[i + 1]))), False
        previous = edge
    return None, True


def _scan(splitting: Splitting, spec: PotentialSpec):
    grid = search_grid(spec)
    extreme = splitting.extreme
    if extreme is not None:
        grid = np.union1d(grid, [extreme.x])
    values = _values(splitting, grid)
    roots, tangents = _roots_on(splitting, grid, values)

    open_origin = open_right = open_left = False
    if spec.half_line and values[0] < 0:
        open_origin = True
    if values[-1] < 0:
        root, open_right = _extend(splitting, float(grid[-1]), 1.0)
        if root is not None:
            roots.append(root)
    if not spec.half_line and values[0] < 0:
        root, open_left = _extend(splitting, float(grid[0]), -1.0)
        if root is not None:
            roots.append(root)
    return sorted(roots), tangents, values, (open_origin, open_right, open_left)


# ── Complex pair ──────────────────────────────────────────────────────────────

def _complex_pair(splitting: Splitting, extreme: ExtremePoint) -> PairComplexConj:
    g0 = float(splitting(extreme.x))
    g2 = float(splitting.derivative(extreme.x, 2))
    guess = complex(extreme.x, -math.sqrt(2.0 * g0 / g2))
    scale = g_scale(splitting)
    try:
        root = newton(splitting, guess, fprime=lambda z: splitting.derivative(z, 1),
                      tol=config.ROOT_XTOL * splitting.spec.length_scale, maxiter=100)
    except (TypeError, ValueError) as exc:
        raise MethodInapplicableError(
            "complex turning points need a potential that accepts complex arguments"
        ) from exc
    except RuntimeError as exc:
        raise ConvergenceError(f"complex turning point polishing failed from {guess!r}: {exc}") from exc
    root = complex(root)
    if root.imag > 0:
        root = root.conjugate()
    residual = abs(splitting(root))
    if not math.isfinite(residual) or residual > 1e-8 * scale or root.imag == 0.0:
        raise ConvergenceError(f"complex turning point polishing ended at {root!r} with |g|={residual:.3g}")
    logger.debug("complex pair %r, %r at E=%.16g", root, root.conjugate(), splitting.energy)
    return PairComplexConj(root, root.conjugate())


# ── Classification ────────────────────────────────────────────────────────────

def find_turning_points(splitting: Splitting, spec: Optional[PotentialSpec] = None) -> TurningPointSet:
    """Locate and classify the turning points of ``splitting`` at its energy."""
    spec = spec or splitting.spec
    extreme = splitting.extreme
    roots, tangents, _, (open_origin, open_right, open_left) = _scan(splitting, spec)
    common = dict(energy=splitting.energy, extreme=extreme,
                  open_to_origin=open_origin, open_to_infinity=open_right,
                  open_to_negative_infinity=open_left)
    L = spec.length_scale

    if len(roots) > 2:
        raise UnsupportedTopologyError(
            f"{len(roots)} turning points at E={splitting.energy!r}; at most two are supported"
        )

    if len(roots) == 2:
        x1, x2 = roots
        middle = extreme.x if extreme is not None and x1 < extreme.x < x2 else 0.5 * (x1 + x2)
        g_mid = float(splitting(middle))
        kind = WELL if g_mid < 0 else BARRIER
        coalesced = (x2 - x1) < config.COALESCENCE_TOL * L
        return TurningPointSet(PairReal(x1, x2), extreme_kind=kind, coalesced=coalesced, **common)

    if len(roots) == 1:
        kind = None
        if extreme is not None:
            kind = WELL if extreme.is_minimum else BARRIER
        return TurningPointSet(SingleReal(roots[0]), extreme_kind=kind, **common)

    if tangents:
        x = tangents[0]
        kind = WELL if float(splitting.derivative(x, 2)) > 0 else BARRIER
        return TurningPointSet(PairReal(x, x), extreme_kind=kind, coalesced=True, **common)

    if extreme is not None:
        g_m = float(splitting(extreme.x))
        kind = WELL if extreme.is_minimum else BARRIER
        if abs(g_m) <= 1e-12 * g_scale(splitting):
            return TurningPointSet(PairReal(extreme.x, extreme.x), extreme_kind=kind, coalesced=True, **common)
        if not extreme.is_minimum and g_m < 0:
            return TurningPointSet(_complex_pair(splitting, extreme), extreme_kind=BARRIER, **common)

    if open_origin or open_right or open_left:
        logger.debug("g < 0 on the whole domain at E=%.16g", splitting.energy)
        kind = None if extreme is None else (WELL if extreme.is_minimum else BARRIER)
        return TurningPointSet(None, extreme_kind=kind, **common)

    raise ClassificationError(f"no turning points of {spec.kind} at E={splitting.energy!r}")
