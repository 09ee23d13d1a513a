"""
splitting.py
------------
g(x) at a fixed energy:  g(x) = 2m(V(x) − E)/ħ² − q(x),  so that
g + q = −p²/ħ² holds identically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from uniwkb.core.errors import ValidationError
from uniwkb.services.potentials.catalog import PotentialSpec
from uniwkb.services.potentials.q_selection import (
    ExtremePoint,
    QProvenance,
    QSelection,
    select_q,
    zero_q,
)


@dataclass(frozen=True)
class Splitting:
    energy: float
    selection: QSelection

    @property
    def spec(self) -> PotentialSpec:
        return self.selection.spec

    @property
    def provenance(self) -> QProvenance:
        return self.selection.provenance

    @property
    def extreme(self) -> Optional[ExtremePoint]:
        return self.selection.extreme

    def q(self, x):
        return self.selection.q(x)

    def derivative(self, x, order: int = 0):
        value = self.selection.derivative(x, order)
        if order == 0:
            value = value - self.spec.coupling * self.energy
        return value

    def __call__(self, x):
        return self.derivative(x, 0)

    def momentum_squared(self, x):
        """2m(E − V)/ħ², i.e. −(g + q)."""
        return self.spec.coupling * (self.energy - self.spec.potential(x))

    def at_energy(self, energy: float) -> "Splitting":
        return Splitting(float(energy), self.selection)


def build_splitting(spec: PotentialSpec, E: float,
                    selection: Optional[QSelection] = None) -> Splitting:
    """Splitting with the selected q (or the one passed in)."""
    if not math.isfinite(E):
        raise ValidationError(f"energy must be finite, got {E!r}")
    if selection is None:
        selection = select_q(spec)
    elif selection.spec is not spec and selection.spec != spec:
        raise ValidationError("q selection belongs to a different potential")
    return Splitting(float(E), selection)


def wkb_splitting(spec: PotentialSpec, E: float) -> Splitting:
    """Splitting with q ≡ 0."""
    return build_splitting(spec, E, zero_q(spec))


def splitting_identity_residual(splitting: Splitting, x) -> np.ndarray:
    """|g + q + 2m(E − V)/ħ²| / (|g| + |q| + 1); zero up to round-off."""
    g = np.asarray(splitting(x), dtype=float)
    q = np.asarray(splitting.q(x), dtype=float)
    p2 = np.asarray(splitting.momentum_squared(x), dtype=float)
    return np.abs(g + q + p2) / (np.abs(g) + np.abs(q) + 1.0)


@dataclass(frozen=True)
class QSmallnessReport:
    far_ratio: float          # max |q|/|g| at distance > ``distance`` from every turning point
    near_ratio: float         # max |q|·|x − x_i|/|g| inside that distance
    samples: int


def q_smallness_report(splitting: Splitting, turning_points, distance: float,
                       grid: Optional[np.ndarray] = None) -> QSmallnessReport:
    """How small q is against g away from, and close to, the real turning points."""
    spec = splitting.spec
    if grid is None:
        L = spec.length_scale
        grid = np.linspace(1e-3 * L, 40.0 * L, 4001) if spec.half_line else np.linspace(-40.0 * L, 40.0 * L, 4001)
    grid = np.asarray(grid, dtype=float)
    points = np.array([float(np.real(t)) for t in turning_points if abs(np.imag(t)) == 0.0])
    g = np.abs(np.asarray(splitting(grid), dtype=float))
    q = np.abs(np.asarray(splitting.q(grid), dtype=float))
    if points.size:
        gap = np.min(np.abs(grid[:, None] - points[None, :]), axis=1)
    else:
        gap = np.full(grid.shape, np.inf)
    far = gap > distance
    near = ~far & (gap > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        far_ratio = float(np.max(q[far] / g[far])) if far.any() else 0.0
        near_ratio = float(np.max(q[near] * gap[near] / g[near])) if near.any() else 0.0
    return QSmallnessReport(far_ratio, near_ratio, int(grid.size))
