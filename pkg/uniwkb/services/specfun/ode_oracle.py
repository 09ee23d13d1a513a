"""
ode_oracle.py
-------------
Direct high-order integration of the parabolic-cylinder comparison equations

    "u":  w'' = (z²/4 + a)·w        (U, V, Ū)
    "w":  w'' = (a − z²/4)·w        (W)

Used to validate the series/asymptotic evaluators independently.
"""
from __future__ import annotations

import math
from typing import Callable, Tuple

from scipy.integrate import solve_ivp

from uniwkb.core import config
from uniwkb.core.errors import ConvergenceError, ValidationError

EQUATIONS = ("u", "w")
MAX_SPAN = 50.0


def comparison_rhs(a: float, equation: str = "u") -> Callable:
    """Right-hand side of the first-order system for solve_ivp."""
    if equation not in EQUATIONS:
        raise ValidationError(f"equation must be one of {list(EQUATIONS)}, got {equation!r}")
    sign = 1.0 if equation == "u" else -1.0

    def rhs(z, y):
        return [y[1], (a + sign * z * z / 4.0) * y[0]]

    return rhs


def ode_comparison_oracle(a: float, z0: float, w0: float, w0p: float, z1: float,
                          equation: str = "u") -> Tuple[float, float]:
    """Propagate (w, w') from z0 to z1 with DOP853 at relative tolerance 1e-12."""
    for name, value in (("a", a), ("z0", z0), ("w0", w0), ("w0p", w0p), ("z1", z1)):
        if not math.isfinite(value):
            raise ValidationError(f"{name} must be finite, got {value!r}")
    if abs(z1 - z0) > MAX_SPAN:
        raise ValidationError(f"|z1 - z0| must be at most {MAX_SPAN}, got {abs(z1 - z0)!r}")
    if z1 == z0:
        return float(w0), float(w0p)
    scale = max(abs(w0), abs(w0p), 1e-300)
    sol = solve_ivp(comparison_rhs(a, equation), (z0, z1), [w0, w0p], method="DOP853",
                    rtol=config.ODE_RTOL, atol=config.ODE_ATOL * scale)
    if not sol.success:
        raise ConvergenceError(f"comparison-equation integration failed: {sol.message}")
    return float(sol.y[0, -1]), float(sol.y[1, -1])
