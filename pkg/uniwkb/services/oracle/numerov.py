"""
numerov.py
----------
Bound states by Numerov shooting, used as an independent check on the
semiclassical solvers.

    u'' = f(x)·u,   f = 2m(V − E)/ħ²

Full-line problems use a uniform x grid with u = 0 at both ends.  Half-line
problems use t = ln x, where u = e^{t/2}φ turns the equation into
φ'' = (x²f + ¼)·φ on a uniform t grid; integration starts at x_min = 10⁻⁶·L
from the regular solution u ∝ x^s, s(s − 1) = pole strength.

The grid ends where the decaying tail has fallen by e^{-36} beyond the
outermost turning point.  Each level is isolated by bisection on the node
count of the outward solution and polished with brentq on the normalised
Wronskian of the outward and inward solutions at the matching point.
Reported energies are the Richardson combination (16E_h − E_2h)/15.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from uniwkb.core import config as settings
from uniwkb.core.errors import ConvergenceError, ExtentError, NoBoundStateError, ValidationError
from uniwkb.core.logging_config import get_logger
from uniwkb.services.potentials.catalog import PotentialSpec
from uniwkb.services.semiclassical.quantization import SpectrumEntry, SpectrumResult
from uniwkb.services.wavefunction.uniform import ALLOWED, FORBIDDEN, WaveSample

logger = get_logger(__name__)

_RESCALE = 1e150
_MAX_EXTENT = 1e4          # in length scales
_CHUNK = 200.0             # decay-extent search chunk, in length scales
_WARN_CONVERGENCE = 1e-7


@dataclass(frozen=True)
class OracleConfig:
    x_min: Optional[float] = None
    x_max: Optional[float] = None
    step: Optional[float] = None
    tolerance: float = 1e-13
    matching_point: Optional[float] = None
    max_nodes: int = 64
    decay_exponent: float = settings.NUMEROV_DECAY_EXPONENT

    def __post_init__(self):
        if self.step is not None and not self.step > 0:
            raise ValidationError(f"step must be positive, got {self.step!r}")
        if not self.tolerance > 0:
            raise ValidationError(f"tolerance must be positive, got {self.tolerance!r}")
        if int(self.max_nodes) != self.max_nodes or self.max_nodes < 1:
            raise ValidationError(f"max_nodes must be a positive integer, got {self.max_nodes!r}")
        if not self.decay_exponent > 0:
            raise ValidationError(f"decay_exponent must be positive, got {self.decay_exponent!r}")
        if self.x_min is not None and self.x_max is not None and not self.x_min < self.x_max:
            raise ValidationError(f"x_min must be below x_max, got {self.x_min!r} >= {self.x_max!r}")


# ── Grids ─────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class _Grid:
    x: np.ndarray
    h: float
    log: bool
    scaled_potential: np.ndarray     # 2mV/ħ² (× x² on the log grid)
    weight: np.ndarray               # 1, or 2m/ħ²·x² on the log grid
    start_exponent: float            # φ ∝ e^{(s − ½)t} at the left end (log grid)

    def coefficient(self, E: float) -> np.ndarray:
        F = self.scaled_potential - self.weight * E
        return F + 0.25 if self.log else F

    @property
    def size(self) -> int:
        return self.x.size


def _make_grid(spec: PotentialSpec, lo: float, hi: float, step: float) -> _Grid:
    coupling = spec.coupling
    if spec.half_line:
        count = int(math.ceil((math.log(hi) - math.log(lo)) / step)) + 1
        t = np.linspace(math.log(lo), math.log(hi), count)
        x = np.exp(t)
        V = np.asarray(spec.potential(x), dtype=float)
        h = float(t[1] - t[0])
        s = 0.5 + math.sqrt(0.25 + spec.pole_strength)
        return _Grid(x, h, True, coupling * x * x * V, coupling * x * x, s - 0.5)
    count = int(math.ceil((hi - lo) / step)) + 1
    x = np.linspace(lo, hi, count)
    V = np.asarray(spec.potential(x), dtype=float)
    return _Grid(x, float(x[1] - x[0]), False, coupling * V, np.ones_like(x), 0.0)


def _march(F: np.ndarray, h: float, y0: float, y1: float) -> np.ndarray:
    """Numerov recurrence for y'' = F·y; rescaled on the way, zeros unaffected."""
    w = 1.0 - h * h * F / 12.0
    y = np.empty(F.size)
    y[0], y[1] = y0, y1
    for i in range(1, F.size - 1):
        y[i + 1] = ((12.0 - 10.0 * w[i]) * y[i] - w[i - 1] * y[i - 1]) / w[i + 1]
        if abs(y[i + 1]) > _RESCALE:
            y[: i + 2] /= _RESCALE
    return y


def _outward(grid: _Grid, F: np.ndarray, stop: Optional[int] = None) -> np.ndarray:
    stop = grid.size if stop is None else stop
    if grid.log:
        return _march(F[:stop], grid.h, 1.0, math.exp(grid.start_exponent * grid.h))
    return _march(F[:stop], grid.h, 0.0, 1.0)


def _inward(grid: _Grid, F: np.ndarray, start: int) -> np.ndarray:
    """Solution on indices start..N−1 with u = 0 at the right end."""
    return _march(F[start:][::-1], grid.h, 0.0, 1.0)[::-1]


def _sign_changes(y: np.ndarray) -> int:
    signs = np.sign(y[1:])
    signs = signs[signs != 0.0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


# ── Extent ────────────────────────────────────────────────────────────────────

def _provisional_extent(spec: PotentialSpec) -> Tuple[float, float]:
    L = spec.length_scale
    if spec.half_line:
        return settings.NUMEROV_X_MIN * L, 200.0 * L
    return -60.0 * L, 60.0 * L


def _decay_edge(spec: PotentialSpec, E: float, direction: float, exponent: float) -> float:
    """Point beyond the outermost turning point where ∫√(2m(V − E))/ħ reaches ``exponent``."""
    L = spec.length_scale
    lo, hi = _provisional_extent(spec)
    probe = np.geomspace(lo, hi, 4001) if spec.half_line else np.linspace(lo, hi, 4001)
    with np.errstate(all="ignore"):
        allowed = np.asarray(spec.potential(probe), dtype=float) < E
    if not allowed.any():
        raise ExtentError(f"E={E!r} lies below the potential everywhere on the search grid")
    start = float(probe[allowed].max() if direction > 0 else probe[allowed].min())
    total = 0.0
    offset = 0.0
    while offset < _MAX_EXTENT * L:
        xs = start + direction * (offset + np.linspace(0.0, _CHUNK * L, 4001))
        with np.errstate(all="ignore"):
            kappa = np.sqrt(np.clip(spec.coupling * (np.asarray(spec.potential(xs), dtype=float) - E), 0.0, None))
        kappa = np.where(np.isfinite(kappa), kappa, 1e300)
        steps = 0.5 * (kappa[1:] + kappa[:-1]) * np.abs(np.diff(xs))
        running = total + np.cumsum(steps)
        reached = np.flatnonzero(running >= exponent)
        if reached.size:
            return float(xs[reached[0] + 1])
        total = float(running[-1])
        offset += _CHUNK * L
    raise ExtentError(f"the tail at E={E!r} does not decay within {_MAX_EXTENT:g} length scales")


def _extent(spec: PotentialSpec, E: float, cfg: OracleConfig) -> Tuple[float, float]:
    L = spec.length_scale
    if spec.half_line:
        lo = cfg.x_min if cfg.x_min is not None else settings.NUMEROV_X_MIN * L
        if not lo > 0:
            raise ValidationError(f"x_min must be positive on the half line, got {lo!r}")
    else:
        lo = cfg.x_min if cfg.x_min is not None else _decay_edge(spec, E, -1.0, cfg.decay_exponent)
    hi = cfg.x_max if cfg.x_max is not None else _decay_edge(spec, E, 1.0, cfg.decay_exponent)
    return lo, hi


# ── Shooting ──────────────────────────────────────────────────────────────────

class _Shooter:
    """Node counts and matching defects on one grid, with a node-count cache."""

    def __init__(self, spec: PotentialSpec, grid: _Grid, cfg: OracleConfig):
        self.spec = spec
        self.grid = grid
        self.cfg = cfg
        self.counts: Dict[float, int] = {}

    def nodes(self, E: float) -> int:
        if E not in self.counts:
            self.counts[E] = _sign_changes(_outward(self.grid, self.grid.coefficient(E)))
        return self.counts[E]

    def matching_index(self, E: float) -> int:
        grid = self.grid
        if self.cfg.matching_point is not None:
            index = int(np.argmin(np.abs(grid.x - self.cfg.matching_point)))
        else:
            allowed = np.flatnonzero(grid.coefficient(E) - (0.25 if grid.log else 0.0) < 0.0)
            index = int(allowed[-1]) if allowed.size else grid.size // 2
        return min(max(index, 2), grid.size - 3)

    def defect(self, E: float, c: int) -> float:
        F = self.grid.coefficient(E)
        out = _outward(self.grid, F, c + 2)
        inn = _inward(self.grid, F, c)
        a0, a1 = out[c], out[c + 1]
        b0, b1 = inn[0], inn[1]
        return (a0 * b1 - a1 * b0) / (math.hypot(a0, a1) * math.hypot(b0, b1))

    def matched(self, E: float) -> np.ndarray:
        c = self.matching_index(E)
        F = self.grid.coefficient(E)
        out = _outward(self.grid, F, c + 2)
        inn = _inward(self.grid, F, c)
        k = 0 if abs(inn[0]) >= abs(inn[1]) else 1
        u = np.concatenate([out[: c + 1], inn[1:] * (out[c + k] / inn[k])])
        if self.grid.log:
            u = u * np.sqrt(self.grid.x)
        return u

    def bracket(self, n: int, floor: float, cap: float, scale: float) -> Tuple[float, float]:
        """(a, b) with exactly n nodes at a and n + 1 at b."""
        lo = max([E for E, k in self.counts.items() if k <= n] + [floor])
        above = [E for E, k in self.counts.items() if k > n]
        if above:
            hi = min(above)
        elif math.isfinite(cap):
            hi = cap
            if self.nodes(hi) <= n:
                raise NoBoundStateError(f"{self.spec.kind} has no bound state with n={n} below {cap!r}")
        else:
            hi = lo + scale
            for _ in range(200):
                if self.nodes(hi) > n:
                    break
                hi = lo + 2.0 * (hi - lo)
            else:
                raise ConvergenceError(f"could not bracket level n={n} from above")
        for _ in range(200):
            if self.nodes(lo) == n and self.nodes(hi) == n + 1:
                return lo, hi
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            if self.nodes(mid) <= n:
                lo = mid
            else:
                hi = mid
        raise ConvergenceError(f"could not isolate level n={n} for {self.spec.kind}")

    def eigenvalue(self, n: int, floor: float, cap: float, scale: float) -> Tuple[float, int]:
        a, b = self.bracket(n, floor, cap, scale)
        c = self.matching_index(0.5 * (a + b))
        try:
            root, info = brentq(self.defect, a, b, args=(c,), xtol=self.cfg.tolerance * max(abs(a), abs(b), scale),
                                rtol=4.0 * np.finfo(float).eps, maxiter=200, full_output=True)
        except (RuntimeError, ValueError) as exc:
            raise ConvergenceError(f"matching defect for n={n} has no root in [{a!r}, {b!r}]: {exc}") from exc
        return float(root), int(info.iterations)


def _step(spec: PotentialSpec, cfg: OracleConfig) -> float:
    if cfg.step is not None:
        return cfg.step
    return settings.NUMEROV_STEP if spec.half_line else settings.NUMEROV_STEP * spec.length_scale


def _floor(grid: _Grid, spec: PotentialSpec) -> float:
    with np.errstate(all="ignore"):
        V = np.asarray(spec.potential(grid.x), dtype=float)
    return float(np.min(V[np.isfinite(V)]))


def _energy_scale(spec: PotentialSpec) -> float:
    return spec.params.hbar**2 / (spec.params.m * spec.length_scale**2)


def _prepare(spec: PotentialSpec, n_max: int, cfg: OracleConfig):
    if int(n_max) != n_max or n_max < 0:
        raise ValidationError(f"n_max must be a non-negative integer, got {n_max!r}")
    if n_max >= cfg.max_nodes:
        raise ValidationError(f"n_max must be below max_nodes={cfg.max_nodes}, got {n_max!r}")
    step = _step(spec, cfg)
    scale = _energy_scale(spec)
    cap = spec.threshold
    lo, hi = _provisional_extent(spec)
    rough = _Shooter(spec, _make_grid(spec, lo, hi, 2.0 * step), cfg)
    floor = _floor(rough.grid, spec)
    _, reference = rough.bracket(int(n_max), floor, cap, scale)
    x_lo, x_hi = _extent(spec, reference, cfg)
    logger.debug("numerov grid for %s: [%.6g, %.6g], step %.3g", spec.kind, x_lo, x_hi, step)
    return step, scale, cap, floor, x_lo, x_hi


# ── Public API ────────────────────────────────────────────────────────────────

def numerov_eigenvalues(spec: PotentialSpec, n_max: int, config: Optional[OracleConfig] = None) -> SpectrumResult:
    """E_0..E_{n_max} with per-level |E_h − E_2h| convergence diagnostics."""
    cfg = config or OracleConfig()
    step, scale, cap, floor, x_lo, x_hi = _prepare(spec, n_max, cfg)
    fine = _Shooter(spec, _make_grid(spec, x_lo, x_hi, step), cfg)
    coarse = _Shooter(spec, _make_grid(spec, x_lo, x_hi, 2.0 * step), cfg)

    entries: List[SpectrumEntry] = []
    for n in range(int(n_max) + 1):
        e_fine, iterations = fine.eigenvalue(n, floor, cap, scale)
        e_coarse, _ = coarse.eigenvalue(n, floor, cap, scale)
        energy = (16.0 * e_fine - e_coarse) / 15.0
        convergence = abs(e_fine - e_coarse)
        if convergence > _WARN_CONVERGENCE * max(abs(energy), scale):
            logger.warning("numerov %s n=%d: step doubling moves E by %.3g", spec.kind, n, convergence)
        entries.append(SpectrumEntry(n, energy, iterations, 0.0, convergence))

    for previous, current in zip(entries[:-1], entries[1:]):
        if not current.energy > previous.energy:
            raise ConvergenceError(f"numerov energies are not increasing at n={current.n}")
    params = spec.params.as_dict()
    params.update(x_min=x_lo, x_max=x_hi, step=step)
    return SpectrumResult("numerov", spec.kind, tuple(entries), params)


def numerov_eigenfunction(spec: PotentialSpec, n: int, config: Optional[OracleConfig] = None,
                          grid: Optional[Sequence[float]] = None) -> List[WaveSample]:
    """Normalised level-n eigenfunction (u = rψ on the half line).

    Sampled on the shooting grid, or interpolated onto ``grid`` (zero outside
    the integration extent).  The sign is fixed so that the first lobe is
    positive.
    """
    cfg = config or OracleConfig()
    step, scale, cap, floor, x_lo, x_hi = _prepare(spec, n, cfg)
    shooter = _Shooter(spec, _make_grid(spec, x_lo, x_hi, step), cfg)
    energy, _ = shooter.eigenvalue(int(n), floor, cap, scale)
    xs = shooter.grid.x
    u = shooter.matched(energy)
    norm = math.sqrt(float(np.trapz(u * u, xs)))
    u = u / norm
    significant = np.flatnonzero(np.abs(u) > 1e-3 * np.max(np.abs(u)))
    if significant.size and u[significant[0]] < 0:
        u = -u

    if grid is not None:
        targets = np.asarray(grid, dtype=float)
        values = np.interp(targets, xs, u, left=0.0, right=0.0)
    else:
        targets, values = xs, u
    with np.errstate(all="ignore"):
        V = np.asarray(spec.potential(targets), dtype=float)
    return [
        WaveSample(float(x), float(v), 0.0, ALLOWED if V_x < energy else FORBIDDEN, None)
        for x, v, V_x in zip(targets, values, V)
    ]
