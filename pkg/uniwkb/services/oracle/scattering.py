"""
scattering.py
-------------
Reference transmission and reflection coefficients for full-line barriers.

ψ'' = 2m(V − E)ψ/ħ² is integrated with DOP853 from the transmitted side,
where ψ = e^{ik_R x}, back to the incident side, where ψ is split into
A e^{ik_L x} + B e^{−ik_L x}:

    T = (k_R/k_L)/|A|²      R = |B/A|²

The integration is repeated with half the maximum step; the difference is
the reported convergence.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import expit

from uniwkb.core import config as settings
from uniwkb.core.errors import (
    ConvergenceError,
    ExtentError,
    MethodInapplicableError,
    NoScatteringError,
    ValidationError,
)
from uniwkb.core.logging_config import get_logger
from uniwkb.services.potentials.catalog import PhysicalParams, PotentialSpec

logger = get_logger(__name__)

_FAR = 1e3                 # asymptotic probe, in length scales
_EDGE_SCAN = 200.0
_EDGE_RTOL = 1e-14
_WARN_CONVERGENCE = 1e-8
_FAIL_CONVERGENCE = 1e-6


@dataclass(frozen=True)
class ScatteringConfig:
    x_left: Optional[float] = None
    x_right: Optional[float] = None
    max_step: Optional[float] = None
    rtol: float = settings.ODE_RTOL
    atol: float = settings.ODE_ATOL

    def __post_init__(self):
        if self.max_step is not None and not self.max_step > 0:
            raise ValidationError(f"max_step must be positive, got {self.max_step!r}")
        if self.x_left is not None and self.x_right is not None and not self.x_left < self.x_right:
            raise ValidationError("x_left must be below x_right")


@dataclass(frozen=True)
class ScatteringResult:
    energy: float
    transmission: float
    reflection: float
    convergence: float

    @property
    def flux_defect(self) -> float:
        return abs(self.transmission + self.reflection - 1.0)


def _potential(spec: PotentialSpec, x) -> np.ndarray:
    with np.errstate(all="ignore"):
        return np.asarray(spec.potential(x), dtype=float)


def asymptotic_levels(spec: PotentialSpec) -> Tuple[float, float]:
    far = _FAR * spec.length_scale
    left, right = (float(v) for v in _potential(spec, np.array([-far, far])))
    if not (math.isfinite(left) and math.isfinite(right)):
        raise NoScatteringError(f"{spec.kind} does not level off at ±∞; there is no scattering")
    return left, right


def _edge(spec: PotentialSpec, level: float, direction: float, E: float) -> float:
    """First point past which V stays within a relative 1e-14 of its asymptotic level."""
    L = spec.length_scale
    xs = direction * np.linspace(0.0, _EDGE_SCAN * L, 4001)
    deviation = np.abs(_potential(spec, xs) - level)
    tolerance = _EDGE_RTOL * max(abs(E - level), abs(level), 1.0)
    outside = np.flatnonzero(~(deviation <= tolerance))
    if outside.size == 0:
        return float(xs[1])
    if outside[-1] == xs.size - 1:
        raise ExtentError(f"{spec.kind} has not levelled off within {_EDGE_SCAN:g} length scales")
    return float(xs[outside[-1] + 1])


def _integrate(spec: PotentialSpec, E: float, x_left: float, x_right: float,
               k_left: float, k_right: float, max_step: float, cfg: ScatteringConfig) -> Tuple[float, float]:
    coupling = spec.coupling

    def rhs(x, y):
        V = float(spec.potential(x))
        return [y[1], coupling * (V - E) * y[0]]

    start = np.exp(1j * k_right * x_right)
    solution = solve_ivp(rhs, (x_right, x_left), [start, 1j * k_right * start], method="DOP853",
                         rtol=cfg.rtol, atol=cfg.atol, max_step=max_step)
    if not solution.success:
        raise ConvergenceError(f"scattering integration failed at E={E!r}: {solution.message}")
    psi, dpsi = solution.y[0, -1], solution.y[1, -1]
    A = (1j * k_left * psi + dpsi) / (2j * k_left) * np.exp(-1j * k_left * x_left)
    B = (1j * k_left * psi - dpsi) / (2j * k_left) * np.exp(1j * k_left * x_left)
    return (k_right / k_left) / abs(A) ** 2, abs(B / A) ** 2


def scattering_coefficients(spec: PotentialSpec, E: float, config: Optional[ScatteringConfig] = None) -> ScatteringResult:
    """T and R at energy E, for a wave incident from the left."""
    cfg = config or ScatteringConfig()
    if spec.half_line:
        raise MethodInapplicableError(f"{spec.kind} lives on the half line; transmission needs the full line")
    if not math.isfinite(E):
        raise ValidationError(f"energy must be finite, got {E!r}")
    level_left, level_right = asymptotic_levels(spec)
    if E <= max(level_left, level_right):
        raise NoScatteringError(f"E={E!r} is not above both asymptotic levels ({level_left!r}, {level_right!r})")

    coupling = spec.coupling
    k_left = math.sqrt(coupling * (E - level_left))
    k_right = math.sqrt(coupling * (E - level_right))
    x_left = cfg.x_left if cfg.x_left is not None else _edge(spec, level_left, -1.0, E)
    x_right = cfg.x_right if cfg.x_right is not None else _edge(spec, level_right, 1.0, E)
    step = cfg.max_step or min(0.1 * spec.length_scale, 0.5 / max(k_left, k_right))

    coarse_T, _ = _integrate(spec, E, x_left, x_right, k_left, k_right, step, cfg)
    T, R = _integrate(spec, E, x_left, x_right, k_left, k_right, 0.5 * step, cfg)
    convergence = abs(T - coarse_T)
    if convergence > _FAIL_CONVERGENCE:
        raise ConvergenceError(f"transmission at E={E!r} moved by {convergence:.3g} under step halving")
    if convergence > _WARN_CONVERGENCE:
        logger.warning("transmission at E=%r moved by %.3g under step halving", E, convergence)
    return ScatteringResult(float(E), float(T), float(R), float(convergence))


def numerical_transmission(spec: PotentialSpec, E: float, config: Optional[ScatteringConfig] = None) -> float:
    return scattering_coefficients(spec, E, config).transmission


def poschl_teller_transmission_exact(params: PhysicalParams, E: float) -> float:
    """Exact T for v0/cosh²(αx):

        sinh²(π√ε/2) / (sinh²(π√ε/2) + cosh²(π√(λ−1)/2))

    with λ = 8mv0/(ħ²α²), ε = 8mE/(ħ²α²); cos(π√(1−λ)/2) replaces the cosh
    for λ < 1.
    """
    if params.v0 is None or params.alpha is None:
        raise ValidationError("the Pöschl–Teller barrier needs v0 and alpha")
    if not E > 0:
        raise NoScatteringError(f"scattering needs E above the asymptotic level 0, got {E!r}")
    unit = params.hbar**2 * params.alpha**2 / (8.0 * params.m)
    lam, eps = params.v0 / unit, E / unit
    a = 0.5 * math.pi * math.sqrt(eps)
    log_sinh = a + math.log1p(-math.exp(-2.0 * a)) - math.log(2.0)
    if lam >= 1.0:
        b = 0.5 * math.pi * math.sqrt(lam - 1.0)
        log_cosh = b + math.log1p(math.exp(-2.0 * b)) - math.log(2.0)
    else:
        cosine = abs(math.cos(0.5 * math.pi * math.sqrt(1.0 - lam)))
        if cosine == 0.0:
            return 1.0
        log_cosh = math.log(cosine)
    # T = 1/(1 + cosh²/sinh²)
    return float(expit(2.0 * (log_sinh - log_cosh)))
