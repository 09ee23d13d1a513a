"""
q_selection.py
--------------
Choice of q(x) in the splitting g(x) + q(x) = −2m(E − V(x))/ħ².

Two constraints fix q:

* pole rule     — at a second-order pole of V, q → −1/(4x²) (Langer);
* extreme rule  — at the extreme point x_m of g,
                  q(x_m) = 7g'''²/(288g''²) − g''''/(32g'').

Catalog kinds carry closed forms that satisfy both.  User-defined potentials
get  q = q_pole + (q0 − q_pole(x_m))·exp(−((x − x_m)/w)²)  with the bump
amplitude solved self-consistently (the bump itself changes g'' and g'''').
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from typing import Optional

import numpy as np
import sympy as sp
from scipy.optimize import brentq

from uniwkb.core import config
from uniwkb.core.errors import (
    DegenerateExtremeError,
    SelectionFailureError,
    UnsupportedPotentialError,
)
from uniwkb.core.logging_config import get_logger
from uniwkb.services.potentials.catalog import USER_DEFINED, PotentialSpec
from uniwkb.services.potentials.smooth import X, SmoothFunction

logger = get_logger(__name__)


class QProvenance(str, Enum):
    POLE_RULE = "pole-rule"
    EXTREME_RULE = "extreme-rule"
    POLE_AND_EXTREME = "pole-and-extreme"
    ZERO = "zero"
    USER = "user"


@dataclass(frozen=True)
class ExtremePoint:
    x: float
    kind: str           # "minimum" (well) or "maximum" (barrier)
    g2: float

    @property
    def is_minimum(self) -> bool:
        return self.kind == "minimum"


@dataclass(frozen=True)
class QSelection:
    """q(x) for one potential together with how it was chosen.

    ``derivative(x, k)`` gives the k-th derivative of g at E = 0; every order
    k ≥ 1 is independent of E, so the extreme point is a property of the
    selection alone.
    """

    spec: PotentialSpec
    q: SmoothFunction
    provenance: QProvenance
    q0: Optional[float] = None
    bump_width: Optional[float] = field(default=None, compare=False)

    def derivative(self, x, order: int = 0):
        return self.spec.coupling * self.spec.potential.derivative(x, order) - self.q.derivative(x, order)

    @cached_property
    def extreme(self) -> Optional[ExtremePoint]:
        return locate_extreme(self)


# ── Extreme point ─────────────────────────────────────────────────────────────

def search_grid(spec: PotentialSpec) -> np.ndarray:
    L = spec.length_scale
    if spec.half_line:
        return np.geomspace(1e-6 * L, 200.0 * L, config.SCAN_POINTS)
    return np.linspace(-60.0 * L, 60.0 * L, config.SCAN_POINTS)


def _stationary_points(g, grid: np.ndarray) -> list:
    """Roots of g' on ``grid``; flat stretches where g' underflows to 0 are skipped."""
    slope = np.array([g.derivative(float(x), 1) for x in grid], dtype=float)
    roots = []
    nonzero = np.flatnonzero(np.isfinite(slope) & (slope != 0.0))
    for i, j in zip(nonzero[:-1], nonzero[1:]):
        if np.sign(slope[i]) == np.sign(slope[j]):
            continue
        if j == i + 1:
            roots.append(brentq(lambda x: g.derivative(x, 1), grid[i], grid[j],
                                xtol=config.ROOT_XTOL, rtol=4 * np.finfo(float).eps))
        elif j == i + 2:
            roots.append(float(grid[i + 1]))
    return roots


def locate_extreme(g, spec: Optional[PotentialSpec] = None) -> Optional[ExtremePoint]:
    """Extreme point of g: the lowest minimum if any, else the highest maximum."""
    spec = spec or g.spec
    if spec.extreme_point is not None and spec.kind == USER_DEFINED:
        x_m = _polish_extreme(g, spec.extreme_point, spec.length_scale)
        candidates = [x_m]
    else:
        candidates = _stationary_points(g, search_grid(spec))
    points = []
    for x_m in candidates:
        g2 = float(g.derivative(x_m, 2))
        if not math.isfinite(g2) or g2 == 0.0:
            continue
        points.append(ExtremePoint(float(x_m), "minimum" if g2 > 0 else "maximum", g2))
    if not points:
        logger.debug("no extreme point of g for %s", spec.kind)
        return None
    minima = [p for p in points if p.is_minimum]
    if minima:
        return min(minima, key=lambda p: float(g.derivative(p.x, 0)))
    return max(points, key=lambda p: float(g.derivative(p.x, 0)))


def _polish_extreme(g, guess: float, scale: float) -> float:
    width = 0.05 * scale
    for _ in range(20):
        a, b = guess - width, guess + width
        fa, fb = g.derivative(a, 1), g.derivative(b, 1)
        if fa == 0.0:
            return a
        if fa * fb < 0:
            return brentq(lambda x: g.derivative(x, 1), a, b, xtol=config.ROOT_XTOL)
        width *= 2.0
    raise SelectionFailureError(f"no stationary point of g near the supplied extreme point {guess!r}")


def q0_from_extreme(g, x_m: float, scale: float = 1.0) -> float:
    """7g'''²/(288g''²) − g''''/(32g'') at the extreme point x_m."""
    g2 = float(g.derivative(x_m, 2))
    g3 = float(g.derivative(x_m, 3))
    g4 = float(g.derivative(x_m, 4))
    if not math.isfinite(g2) or abs(g2) <= 1e-12 / scale**4:
        raise DegenerateExtremeError(f"g''(x_m) vanishes at x_m={x_m!r} (g''={g2!r})")
    return 7.0 * g3**2 / (288.0 * g2**2) - g4 / (32.0 * g2)


# ── Catalog closed forms ──────────────────────────────────────────────────────

def _catalog_q(spec: PotentialSpec):
    a = spec.params.alpha
    kind = spec.kind
    if kind in ("hydrogen", "oscillator-d"):
        return -sp.Rational(1, 4) / X**2, QProvenance.POLE_RULE
    if kind in ("morse", "pure-oscillator-1d"):
        return sp.Integer(0), QProvenance.EXTREME_RULE
    if kind in ("poschl-teller-well", "poschl-teller-barrier"):
        return a**2 / (4 * sp.cosh(a * X)**2), QProvenance.EXTREME_RULE
    if kind == "eckart":
        return -a**2 / (4 * sp.sinh(a * X)**2), QProvenance.POLE_AND_EXTREME
    raise UnsupportedPotentialError(f"no closed-form q for {kind!r}")


@lru_cache(maxsize=128)
def select_q(spec: PotentialSpec) -> QSelection:
    """q(x) for ``spec`` with its provenance."""
    if spec.pole_order not in (0, 2):
        raise UnsupportedPotentialError(f"pole order at the origin must be 0 or 2, got {spec.pole_order!r}")
    if spec.is_catalog:
        expr, provenance = _catalog_q(spec)
        q = SmoothFunction.from_expression(expr, label=f"q[{spec.kind}]")
        selection = QSelection(spec, q, provenance)
        if selection.extreme is not None:
            return QSelection(spec, q, provenance, q0=float(q(selection.extreme.x)))
        return selection
    return _user_q(spec)


@lru_cache(maxsize=128)
def zero_q(spec: PotentialSpec) -> QSelection:
    """q ≡ 0, the conventional WKB splitting."""
    return QSelection(spec, SmoothFunction.zero(), QProvenance.ZERO)


def _user_q(spec: PotentialSpec) -> QSelection:
    q_pole_expr = -sp.Rational(1, 4) / X**2 if spec.pole_order == 2 else sp.Integer(0)
    q_pole = SmoothFunction.from_expression(q_pole_expr, label="q_pole")
    base = QSelection(spec, q_pole, QProvenance.USER)
    extreme = base.extreme
    if extreme is None:
        logger.warning("no extreme point of g for the user potential; q carries the pole rule only")
        return base

    x_m = extreme.x
    w = _bump_width(spec, x_m)
    amplitude = _bump_amplitude(base, x_m, w)
    q0 = float(q_pole(x_m)) + amplitude
    logger.debug("user q: x_m=%.16g width=%.6g q0=%.16g", x_m, w, q0)

    expr = q_pole_expr + amplitude * sp.exp(-((X - x_m) / w)**2)
    q = SmoothFunction.from_expression(expr, label="q[user]")
    return QSelection(spec, q, QProvenance.USER, q0=q0, bump_width=w)


def _bump_amplitude(base: QSelection, x_m: float, w: float) -> float:
    """Amplitude A of the bump so that q(x_m) satisfies the extreme rule.

    The bump shifts g'' by 2A/w² and g'''' by −12A/w⁴, so the condition
    288g''²(q_pole(x_m) + A) = 7g'''² − 9g''g'''' is a cubic in A.  The root
    of smallest size that keeps the sign of g'' is taken.
    """
    G2, G3, G4 = (float(base.derivative(x_m, k)) for k in (2, 3, 4))
    qp = float(base.q(x_m))
    g2 = np.polynomial.Polynomial([G2, 2.0 / w**2])
    g4 = np.polynomial.Polynomial([G4, -12.0 / w**4])
    lhs = 288.0 * g2**2 * np.polynomial.Polynomial([qp, 1.0])
    residual = lhs - (7.0 * G3**2 - 9.0 * g2 * g4)
    candidates = []
    for root in residual.roots():
        if abs(root.imag) > 1e-9 * (abs(root.real) + 1.0):
            continue
        A = float(root.real)
        if np.sign(g2(A)) == np.sign(G2) and abs(g2(A)) > 1e-12 * abs(G2):
            candidates.append(A)
    if not candidates:
        raise SelectionFailureError(
            f"pole and extreme constraints admit no consistent bump of width {w:.6g} at x_m={x_m:.6g}"
        )
    return min(candidates, key=abs)


def _bump_width(spec: PotentialSpec, x_m: float) -> float:
    """Distance from x_m to the nearest classical turning point at the reference energy."""
    E = spec.reference_energy
    if E is None:
        return spec.length_scale
    grid = search_grid(spec)
    values = spec.coupling * (np.asarray(spec.potential(grid), dtype=float) - E)
    crossings = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)
    if crossings.size == 0:
        return spec.length_scale
    distances = np.abs(grid[crossings] - x_m)
    width = float(distances.min())
    return width if width > 1e-3 * spec.length_scale else spec.length_scale
