"""
transmission.py
---------------
Barrier transmission coefficients.

    improved   T = 1/(1 + e^{πζ0²})          ζ0² from the selected q; valid
                                             below, at and above the top
    wkb        T = exp(−2∫_{x1}^{x2} √g)     q ≡ 0, real turning points only

Pöschl–Teller closed forms, with λ = 8mv0/(ħ²α²) and ε = 8mE/(ħ²α²):

    improved   1/(1 + e^{π(√(λ−1) − √ε)})    needs λ > 1
    wkb        e^{−π(√λ − √ε)}               needs E < v0
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, List, Tuple, Union

import numpy as np
from scipy.special import expit

from uniwkb.core.errors import (
    ClassificationError,
    MethodInapplicableError,
    NoScatteringError,
    ValidationError,
)
from uniwkb.core.logging_config import get_logger
from uniwkb.services.oracle.scattering import numerical_transmission, poschl_teller_transmission_exact
from uniwkb.services.potentials.catalog import PhysicalParams, PotentialSpec
from uniwkb.services.potentials.splitting import build_splitting, wkb_splitting
from uniwkb.services.semiclassical.phase_integrals import phase_integral_real, zeta0_squared
from uniwkb.services.semiclassical.turning_points import (
    BARRIER,
    PairComplexConj,
    PairReal,
    find_turning_points,
)

logger = get_logger(__name__)

TRANSMISSION_METHODS = ("improved", "wkb", "exact-numeric", "closed-form")
POSCHL_TELLER_BARRIER = "poschl-teller-barrier"


@dataclass(frozen=True)
class TransmissionCurve:
    method: str
    kind: str
    samples: Tuple[Tuple[float, float], ...]
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in TRANSMISSION_METHODS:
            raise ValidationError(f"method must be one of {list(TRANSMISSION_METHODS)}, got {self.method!r}")

    @property
    def energies(self) -> List[float]:
        return [e for e, _ in self.samples]

    @property
    def transmissions(self) -> List[float]:
        return [t for _, t in self.samples]


# ── Pöschl–Teller closed forms ────────────────────────────────────────────────

def _pt_ratios(params: Union[PhysicalParams, PotentialSpec], E: float) -> Tuple[float, float, float]:
    if isinstance(params, PotentialSpec):
        params = params.params
    if params.v0 is None or params.v0 <= 0:
        raise ValidationError(f"the Pöschl–Teller barrier needs v0 > 0, got {params.v0!r}")
    if not E > 0:
        raise NoScatteringError(f"scattering needs E above the asymptotic level 0, got {E!r}")
    unit = params.hbar**2 * params.alpha**2 / (8.0 * params.m)
    return params.v0 / unit, E / unit, params.v0


def poschl_teller_improved_closed_form(params, E: float) -> float:
    lam, eps, _ = _pt_ratios(params, E)
    if lam <= 1.0:
        raise MethodInapplicableError(f"the improved form needs 8mv0/(ħ²α²) > 1, got {lam!r}")
    return float(expit(-math.pi * (math.sqrt(lam - 1.0) - math.sqrt(eps))))


def poschl_teller_wkb_closed_form(params, E: float) -> float:
    lam, eps, v0 = _pt_ratios(params, E)
    if E >= v0:
        raise MethodInapplicableError(f"the WKB form needs E below the peak {v0!r}, got {E!r}")
    return math.exp(-math.pi * (math.sqrt(lam) - math.sqrt(eps)))


# ── Generic barriers ──────────────────────────────────────────────────────────

def _check_scattering(spec: PotentialSpec, E: float) -> None:
    if not math.isfinite(E):
        raise ValidationError(f"energy must be finite, got {E!r}")
    if spec.half_line:
        raise MethodInapplicableError(f"{spec.kind} lives on the half line; transmission needs the full line")
    if math.isinf(spec.threshold):
        raise NoScatteringError(f"{spec.kind} confines at every energy; there is no scattering")
    if E <= spec.threshold:
        raise NoScatteringError(f"scattering needs E above the asymptotic level {spec.threshold!r}, got {E!r}")


def transmission_improved(spec: PotentialSpec, E: float) -> float:
    """1/(1 + e^{πζ0²}) with ζ0² from the pair around the maximum of g."""
    if spec.kind == POSCHL_TELLER_BARRIER:
        p = spec.params
        lam = 8.0 * p.m * p.v0 / (p.hbar**2 * p.alpha**2)
        if lam <= 1.0:
            raise MethodInapplicableError(f"the improved transmission needs 8mv0/ħ² > α² (ratio {lam!r})")
    _check_scattering(spec, E)
    splitting = build_splitting(spec, E)
    tps = find_turning_points(splitting)
    if not tps.is_pair or tps.extreme_kind != BARRIER:
        raise ClassificationError(f"{spec.kind} at E={E!r} is not a barrier (turning points: {tps.kind})")
    z0sq = zeta0_squared(tps, splitting).value
    return float(expit(-math.pi * z0sq))


def transmission_wkb(spec: PotentialSpec, E: float) -> float:
    """exp(−2∫√g) between the classical turning points; 1 with no barrier at all."""
    _check_scattering(spec, E)
    splitting = wkb_splitting(spec, E)
    tps = find_turning_points(splitting)
    cls = tps.classification
    if isinstance(cls, PairReal) and tps.extreme_kind == BARRIER:
        if tps.coalesced:
            raise MethodInapplicableError(f"E={E!r} is at the barrier peak; the WKB form has no tunneling region")
        phase = phase_integral_real(splitting, cls.x1, cls.x2, 1)
        return math.exp(-2.0 * phase.value)
    if isinstance(cls, PairComplexConj) or (cls is None and tps.extreme is not None and not tps.extreme.is_minimum):
        raise MethodInapplicableError(f"E={E!r} is above the barrier peak; the WKB form has no real turning points")
    if cls is None:
        return 1.0
    raise ClassificationError(f"{spec.kind} at E={E!r} is not a barrier (turning points: {tps.kind})")


def _closed_form_exact(spec: PotentialSpec, E: float) -> float:
    if spec.kind != POSCHL_TELLER_BARRIER:
        raise MethodInapplicableError(f"closed-form transmission is only known for {POSCHL_TELLER_BARRIER}")
    return poschl_teller_transmission_exact(spec.params, E)


_EVALUATORS = {
    "improved": transmission_improved,
    "wkb": transmission_wkb,
    "exact-numeric": numerical_transmission,
    "closed-form": _closed_form_exact,
}


def transmission_curve(spec: PotentialSpec, energies: Iterable[float], method: str) -> TransmissionCurve:
    """T(E) on a grid.  WKB points at or above the peak are NaN."""
    if method not in TRANSMISSION_METHODS:
        raise ValidationError(f"method must be one of {list(TRANSMISSION_METHODS)}, got {method!r}")
    energies = [float(E) for E in np.atleast_1d(np.asarray(list(energies), dtype=float))]
    if not energies:
        raise ValidationError("energy grid must not be empty")
    if spec.half_line:
        raise MethodInapplicableError(f"{spec.kind} lives on the half line; transmission needs the full line")
    evaluate = _EVALUATORS[method]
    samples = []
    for E in energies:
        try:
            T = evaluate(spec, E)
        except MethodInapplicableError:
            if method != "wkb":
                raise
            logger.debug("wkb transmission undefined at E=%r (above the peak)", E)
            T = math.nan
        samples.append((E, float(T)))
    return TransmissionCurve(method, spec.kind, tuple(samples), spec.params.as_dict())


def barrier_top_energy(spec: PotentialSpec) -> float:
    """Energy at which the improved turning points coalesce (g(x_m) = 0)."""
    splitting = build_splitting(spec, 0.0)
    extreme = splitting.extreme
    if extreme is None or extreme.is_minimum:
        raise ClassificationError(f"{spec.kind} has no barrier maximum")
    return float(splitting.selection.derivative(extreme.x, 0)) / spec.coupling


def transmission_errors(curve: TransmissionCurve, reference: TransmissionCurve) -> np.ndarray:
    """|T − T_ref| pointwise on a shared energy grid."""
    if curve.energies != reference.energies:
        raise ValidationError("curves must share the same energy grid")
    return np.abs(np.array(curve.transmissions) - np.array(reference.transmissions))
