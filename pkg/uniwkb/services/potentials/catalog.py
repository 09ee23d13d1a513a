"""
catalog.py
----------
Potential catalog: the exactly solvable radial / 1-D potentials plus
user-defined ones.

    kind                   V(x)                                   domain      pole
    hydrogen               −e²/x + ħ²l(l+1)/(2mx²)                 (0, ∞)      2
    oscillator-d           ½mω²x² + ħ²L²/(2mx²)                    (0, ∞)      2
    morse                  v0·e^{−2αx} + v1·e^{−αx}                (−∞, ∞)     0
    poschl-teller-well     v0/cosh²(αx),  v0 < 0                    (−∞, ∞)     0
    poschl-teller-barrier  v0/cosh²(αx),  v0 > 0                    (−∞, ∞)     0
    eckart                 v0/sinh²(αx) + v1/tanh(αx)              (0, ∞)      2
    pure-oscillator-1d     ½mω²x²                                  (−∞, ∞)     0

with L² = l(D+l−2) + (D−1)(D−3)/4 for the D-dimensional oscillator.

Every spec carries a sympy expression, so V and its first four derivatives
are exact.  Specs are cached per (kind, params).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from functools import lru_cache
from typing import Callable, Mapping, Optional, Sequence, Union

import numpy as np
import sympy as sp

from uniwkb.core.errors import DomainError, UnsupportedPotentialError, ValidationError
from uniwkb.core.logging_config import get_logger
from uniwkb.services.potentials.smooth import X, SmoothFunction, parse_expression

logger = get_logger(__name__)

CATALOG_KINDS = (
    "hydrogen",
    "oscillator-d",
    "morse",
    "poschl-teller-well",
    "poschl-teller-barrier",
    "eckart",
    "pure-oscillator-1d",
)
USER_DEFINED = "user-defined"
HALF_LINE = "half-line"
FULL_LINE = "full-line"
DOMAINS = (HALF_LINE, FULL_LINE)

# Kind-specific defaults for the parameters that have no universal value.
_KIND_DEFAULTS = {
    "morse": {"v0": 1.0, "v1": -2.0},
    "poschl-teller-well": {"v0": -10.0},
    "poschl-teller-barrier": {"v0": 2.5},
    "eckart": {"v0": 1.0, "v1": -20.0},
}


# ── Parameters ────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class PhysicalParams:
    """Mass, ħ and the potential constants; unused fields are simply ignored."""

    m: float = 1.0
    hbar: float = 1.0
    e: float = 1.0
    omega: float = 1.0
    l: int = 0
    D: int = 3
    v0: Optional[float] = None
    v1: Optional[float] = None
    alpha: float = 1.0

    def __post_init__(self):
        for name in ("m", "hbar", "e", "omega", "alpha"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be a finite positive number, got {value!r}")
        if int(self.l) != self.l or self.l < 0:
            raise ValidationError(f"l must be a non-negative integer, got {self.l!r}")
        if int(self.D) != self.D or self.D < 1:
            raise ValidationError(f"D must be an integer >= 1, got {self.D!r}")
        for name in ("v0", "v1"):
            value = getattr(self, name)
            if value is not None and not math.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value!r}")

    @classmethod
    def from_mapping(cls, mapping: Optional[Mapping[str, object]]) -> "PhysicalParams":
        """Build from ``{"l": "2", "alpha": 1.5, ...}``; strings are converted."""
        valid = {f.name for f in fields(cls)}
        values = {}
        for key, raw in (mapping or {}).items():
            if key not in valid:
                raise ValidationError(f"parameter must be one of {sorted(valid)}, got {key!r}")
            values[key] = _coerce(key, raw)
        return cls(**values)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if getattr(self, f.name) is not None}

    @property
    def centrifugal_strength(self) -> float:
        """L² = l(D+l−2) + (D−1)(D−3)/4; equals l(l+1) for D = 3."""
        return self.l * (self.D + self.l - 2) + (self.D - 1) * (self.D - 3) / 4.0


def _coerce(key: str, raw) -> Union[int, float]:
    try:
        value = float(raw)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"parameter {key!r} must be numeric, got {raw!r}") from exc
    if key in ("l", "D"):
        if not value.is_integer():
            raise ValidationError(f"parameter {key!r} must be an integer, got {raw!r}")
        return int(value)
    return value


# ── Spec ──────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class PotentialSpec:
    kind: str
    params: PhysicalParams
    domain: str
    pole_order: int
    potential: SmoothFunction
    length_scale: float
    threshold: float
    pole_strength: float = 0.0
    barrier_top: Optional[float] = None
    expression: str = ""
    extreme_point: Optional[float] = None
    reference_energy: Optional[float] = None

    @property
    def is_catalog(self) -> bool:
        return self.kind in CATALOG_KINDS

    @property
    def half_line(self) -> bool:
        return self.domain == HALF_LINE

    @property
    def coupling(self) -> float:
        """2m/ħ², the factor turning energies into g-units."""
        return 2.0 * self.params.m / self.params.hbar**2

    def contains(self, x) -> bool:
        if not np.isfinite(x):
            return False
        return x > 0.0 if self.half_line else True


def _expression(kind: str, p: PhysicalParams) -> sp.Expr:
    x = X
    if kind == "hydrogen":
        return -p.e**2 / x + p.hbar**2 * p.l * (p.l + 1) / (2 * p.m * x**2)
    if kind == "oscillator-d":
        return p.m * p.omega**2 * x**2 / 2 + p.hbar**2 * p.centrifugal_strength / (2 * p.m * x**2)
    if kind == "morse":
        return p.v0 * sp.exp(-2 * p.alpha * x) + p.v1 * sp.exp(-p.alpha * x)
    if kind in ("poschl-teller-well", "poschl-teller-barrier"):
        return p.v0 / sp.cosh(p.alpha * x)**2
    if kind == "eckart":
        return p.v0 / sp.sinh(p.alpha * x)**2 + p.v1 / sp.tanh(p.alpha * x)
    if kind == "pure-oscillator-1d":
        return p.m * p.omega**2 * x**2 / 2
    raise ValidationError(f"potential kind must be one of {list(CATALOG_KINDS)}, got {kind!r}")


def _check_kind_params(kind: str, p: PhysicalParams) -> None:
    if kind in ("morse", "poschl-teller-well", "poschl-teller-barrier", "eckart") and p.v0 is None:
        raise ValidationError(f"{kind} requires v0")
    if kind in ("morse", "eckart") and p.v1 is None:
        raise ValidationError(f"{kind} requires v1")
    if kind == "morse" and p.v0 <= 0:
        raise ValidationError(f"morse requires v0 > 0, got {p.v0!r}")
    if kind == "poschl-teller-well" and p.v0 >= 0:
        raise ValidationError(f"poschl-teller-well requires v0 < 0, got {p.v0!r}")
    if kind == "poschl-teller-barrier" and p.v0 <= 0:
        raise ValidationError(f"poschl-teller-barrier requires v0 > 0, got {p.v0!r}")
    if kind == "eckart" and p.v0 <= 0:
        raise ValidationError(f"eckart requires v0 > 0, got {p.v0!r}")
    if kind == "oscillator-d" and p.l + (p.D - 2) / 2.0 <= 0:
        raise ValidationError(
            f"oscillator-d needs a repulsive centrifugal pole (l + (D-2)/2 > 0), got l={p.l}, D={p.D}"
        )


def make_potential(kind: str, params: Union[PhysicalParams, Mapping, None] = None,
                   **overrides) -> PotentialSpec:
    """Catalog spec for ``kind``; ``overrides`` replace individual parameters."""
    if kind not in CATALOG_KINDS:
        raise ValidationError(f"potential kind must be one of {list(CATALOG_KINDS)}, got {kind!r}")
    if params is None or isinstance(params, Mapping):
        params = PhysicalParams.from_mapping(params)
    if overrides:
        params = replace(params, **{k: _coerce(k, v) for k, v in overrides.items()})
    defaults = {k: v for k, v in _KIND_DEFAULTS.get(kind, {}).items() if getattr(params, k) is None}
    if defaults:
        params = replace(params, **defaults)
    _check_kind_params(kind, params)
    return _build_catalog_spec(kind, params)


@lru_cache(maxsize=256)
def _build_catalog_spec(kind: str, p: PhysicalParams) -> PotentialSpec:
    expr = _expression(kind, p)
    potential = SmoothFunction.from_expression(expr, label=kind)
    coupling = 2.0 * p.m / p.hbar**2
    oscillator_length = math.sqrt(p.hbar / (p.m * p.omega))

    if kind == "hydrogen":
        return PotentialSpec(kind, p, HALF_LINE, 2, potential,
                             length_scale=p.hbar**2 / (p.m * p.e**2), threshold=0.0,
                             pole_strength=float(p.l * (p.l + 1)), expression=str(expr))
    if kind == "oscillator-d":
        return PotentialSpec(kind, p, HALF_LINE, 2, potential,
                             length_scale=oscillator_length, threshold=math.inf,
                             pole_strength=p.centrifugal_strength, expression=str(expr))
    if kind == "morse":
        return PotentialSpec(kind, p, FULL_LINE, 0, potential,
                             length_scale=1.0 / p.alpha, threshold=0.0, expression=str(expr))
    if kind == "poschl-teller-well":
        return PotentialSpec(kind, p, FULL_LINE, 0, potential,
                             length_scale=1.0 / p.alpha, threshold=0.0, expression=str(expr))
    if kind == "poschl-teller-barrier":
        return PotentialSpec(kind, p, FULL_LINE, 0, potential,
                             length_scale=1.0 / p.alpha, threshold=0.0,
                             barrier_top=p.v0, expression=str(expr))
    if kind == "eckart":
        return PotentialSpec(kind, p, HALF_LINE, 2, potential,
                             length_scale=1.0 / p.alpha, threshold=p.v1,
                             pole_strength=coupling * p.v0 / p.alpha**2, expression=str(expr))
    return PotentialSpec(kind, p, FULL_LINE, 0, potential,
                         length_scale=oscillator_length, threshold=math.inf, expression=str(expr))


# ── User-defined potentials ───────────────────────────────────────────────────

def user_defined_potential(
    V: Union[str, sp.Expr, Callable],
    *,
    domain: str = FULL_LINE,
    pole_order: int = 0,
    params: Union[PhysicalParams, Mapping, None] = None,
    derivatives: Sequence[Callable] = (),
    extreme_point: Optional[float] = None,
    reference_energy: Optional[float] = None,
    length_scale: float = 1.0,
    threshold: float = math.inf,
    pole_strength: Optional[float] = None,
    barrier_top: Optional[float] = None,
) -> PotentialSpec:
    """Spec for a potential given as a sympy expression string or a callable.

    Only ``m`` and ``hbar`` of ``params`` matter here.  ``pole_strength`` is
    the coefficient c of c/x² in 2mV/ħ²; it is derived from the expression
    when not given.
    """
    if pole_order not in (0, 2):
        raise UnsupportedPotentialError(f"pole order at the origin must be 0 or 2, got {pole_order!r}")
    if domain not in DOMAINS:
        raise ValidationError(f"domain must be one of {list(DOMAINS)}, got {domain!r}")
    if pole_order == 2 and domain != HALF_LINE:
        raise ValidationError("a pole at the origin requires the half-line domain")
    if not (length_scale > 0 and math.isfinite(length_scale)):
        raise ValidationError(f"length_scale must be positive, got {length_scale!r}")
    if params is None or isinstance(params, Mapping):
        params = PhysicalParams.from_mapping(params)

    if callable(V) and not isinstance(V, sp.Expr):
        potential = SmoothFunction.from_callable(V, derivatives, label=USER_DEFINED)
        expression = getattr(V, "__name__", "callable")
    else:
        expr = parse_expression(V)
        potential = SmoothFunction.from_expression(expr, label=USER_DEFINED)
        expression = str(expr)

    coupling = 2.0 * params.m / params.hbar**2
    if pole_order == 2 and pole_strength is None:
        pole_strength = _estimate_pole_strength(potential, coupling, length_scale)
    if pole_order == 2 and pole_strength < -0.25:
        raise UnsupportedPotentialError(
            f"attractive pole stronger than the -1/(4x^2) limit (strength {pole_strength:.6g})"
        )

    return PotentialSpec(
        kind=USER_DEFINED,
        params=params,
        domain=domain,
        pole_order=pole_order,
        potential=potential,
        length_scale=float(length_scale),
        threshold=float(threshold),
        pole_strength=float(pole_strength or 0.0),
        barrier_top=barrier_top,
        expression=expression,
        extreme_point=extreme_point,
        reference_energy=reference_energy,
    )


def _estimate_pole_strength(potential: SmoothFunction, coupling: float, length_scale: float) -> float:
    if potential.expression is not None:
        limit = sp.limit(X**2 * potential.expression, X, 0, dir="+")
        if limit.is_finite:
            return coupling * float(limit)
        raise UnsupportedPotentialError("potential has a pole of order higher than 2 at the origin")
    x_small = 1e-6 * length_scale
    return coupling * x_small**2 * float(potential(x_small))


def langer_potential(spec: PotentialSpec) -> PotentialSpec:
    """V + ħ²/(8mx²): the centrifugal strength l(l+1) becomes (l+½)².

    Only meaningful for a half-line problem with a second-order pole.
    """
    if spec.pole_order != 2:
        raise ValidationError(f"Langer potential needs a second-order pole, {spec.kind} has none")
    p = spec.params
    if spec.potential.expression is not None:
        expr = spec.potential.expression + p.hbar**2 / (8 * p.m * X**2)
        potential = SmoothFunction.from_expression(expr, label=f"{spec.kind}-langer")
        expression = str(expr)
    else:
        base = spec.potential
        shift = p.hbar**2 / (8 * p.m)
        potential = SmoothFunction.from_callable(lambda x: base(x) + shift / np.asarray(x)**2,
                                                 label=f"{spec.kind}-langer")
        expression = f"{spec.expression} + {shift}/x**2"
    return replace(spec, kind=USER_DEFINED, potential=potential, expression=expression,
                   pole_strength=spec.pole_strength + 0.25)


# ── Evaluation ────────────────────────────────────────────────────────────────

def eval_potential(spec: PotentialSpec, x: float) -> float:
    """V(x) with a domain check."""
    if not spec.contains(x):
        raise DomainError(f"x={x!r} is outside the {spec.domain} domain of {spec.kind}")
    value = spec.potential(x)
    if not np.isfinite(value):
        raise DomainError(f"V is not finite at x={x!r} for {spec.kind}")
    return float(value)
