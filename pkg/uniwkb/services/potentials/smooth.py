"""
smooth.py
---------
Scalar functions of one variable carrying derivatives up to fourth order.

Two construction routes:

* ``SmoothFunction.from_expression`` — a sympy expression (or a string sympy
  can parse) in the symbol ``x``; derivatives are exact and every order is
  lambdified for numpy, so real arrays and complex scalars both work.
* ``SmoothFunction.from_callable`` — a plain Python callable; missing
  derivatives come from central differences with one Richardson step.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
import sympy as sp

from uniwkb.core import config
from uniwkb.core.errors import ValidationError

X = sp.Symbol("x", real=True)
MAX_ORDER = 4

# Central-difference stencils: (offsets, weights, power of h in the denominator)
_STENCILS = {
    1: ((-1, 1), (-0.5, 0.5), 1),
    2: ((-1, 0, 1), (1.0, -2.0, 1.0), 2),
    3: ((-2, -1, 1, 2), (-0.5, 1.0, -1.0, 0.5), 3),
    4: ((-2, -1, 0, 1, 2), (1.0, -4.0, 6.0, -4.0, 1.0), 4),
}


def _call(func: Callable, x):
    """Evaluate ``func`` keeping the input's shape; scalars come back as Python numbers."""
    arr = np.asarray(x)
    with np.errstate(over="ignore", under="ignore"):
        try:
            out = np.asarray(func(arr))
        except (TypeError, ValueError):
            if arr.ndim == 0:
                raise
            out = np.array([func(v) for v in arr.ravel()]).reshape(arr.shape)
    if out.shape != arr.shape:
        out = np.broadcast_to(out, arr.shape).copy()
    if arr.ndim == 0:
        return out.item()
    return out


def _fd_step(x, order: int):
    base = (np.abs(np.real(x)) + 1.0) * config.FD_STEP_FACTOR
    return base * (10.0 if order >= 3 else 1.0)


def richardson_derivative(func: Callable, x, order: int):
    """Central-difference derivative of ``func`` with one Richardson extrapolation."""
    offsets, weights, power = _STENCILS[order]
    h = _fd_step(x, order)

    def estimate(step):
        total = 0.0
        for k, w in zip(offsets, weights):
            total = total + w * _call(func, x + k * step)
        return total / step**power

    coarse = estimate(h)
    fine = estimate(h / 2.0)
    return (4.0 * fine - coarse) / 3.0


@dataclass(frozen=True)
class SmoothFunction:
    """f(x) with ``derivative(x, order)`` for order 0..4."""

    evaluators: tuple
    expression: Optional[sp.Expr] = None
    label: str = ""

    # ── Constructors ─────────────────────────────────────────────────────────

    @classmethod
    def from_expression(cls, expr, label: str = "") -> "SmoothFunction":
        expr = parse_expression(expr)
        derivatives = [expr]
        for _ in range(MAX_ORDER):
            derivatives.append(sp.diff(derivatives[-1], X))
        evaluators = tuple(sp.lambdify(X, d, modules="numpy") for d in derivatives)
        return cls(evaluators=evaluators, expression=expr, label=label or str(expr))

    @classmethod
    def from_callable(cls, func: Callable, derivatives: Sequence[Callable] = (),
                      label: str = "") -> "SmoothFunction":
        if not callable(func):
            raise ValidationError(f"potential evaluator must be callable, got {func!r}")
        given = list(derivatives)[:MAX_ORDER]
        evaluators = tuple([func] + given + [None] * (MAX_ORDER - len(given)))
        return cls(evaluators=evaluators, expression=None, label=label or getattr(func, "__name__", "callable"))

    @classmethod
    def zero(cls) -> "SmoothFunction":
        return cls.from_expression(sp.Integer(0), label="0")

    # ── Evaluation ───────────────────────────────────────────────────────────

    @property
    def analytic(self) -> bool:
        return all(e is not None for e in self.evaluators)

    def __call__(self, x):
        return _call(self.evaluators[0], x)

    def derivative(self, x, order: int = 0):
        if not 0 <= order <= MAX_ORDER:
            raise ValidationError(f"derivative order must be in 0..{MAX_ORDER}, got {order!r}")
        fn = self.evaluators[order]
        if fn is not None:
            return _call(fn, x)
        return richardson_derivative(self.evaluators[0], x, order)


def parse_expression(expr) -> sp.Expr:
    """Parse ``expr`` into a sympy expression whose only free symbol is x."""
    if isinstance(expr, str):
        try:
            expr = sp.sympify(expr, locals={"x": X})
        except (sp.SympifyError, SyntaxError, TypeError) as exc:
            raise ValidationError(f"cannot parse potential expression {expr!r}: {exc}") from exc
    expr = sp.sympify(expr)
    stray = {s for s in expr.free_symbols if s != X}
    if stray:
        names = sorted(str(s) for s in stray)
        raise ValidationError(f"expression may only depend on x, found {names}")
    return expr
