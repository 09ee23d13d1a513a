"""
values.py
---------
Container for special-function values with an error estimate and an
exponential scale:  true value = value · exp(log_scale).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from uniwkb.core.errors import SpecialFunctionOverflowError

SERIES = "series"
ASYMPTOTIC = "asymptotic"
ODE_CONTINUED = "ode-continued"
REGIMES = (SERIES, ASYMPTOTIC, ODE_CONTINUED)

# exp() overflows a double just above 709.78
_MAX_LOG = 700.0


@dataclass(frozen=True)
class SpecFunValue:
    value: float
    error: float
    regime: str
    log_scale: float = 0.0

    @property
    def scaled(self) -> bool:
        return self.log_scale != 0.0

    def unscaled(self) -> float:
        """value·exp(log_scale); raises SpecialFunctionOverflowError if that overflows."""
        if not self.scaled:
            return self.value
        if self.value == 0.0:
            return 0.0
        magnitude = math.log(abs(self.value)) + self.log_scale
        if magnitude > _MAX_LOG:
            raise SpecialFunctionOverflowError(
                f"value overflows a double (log|value| = {magnitude:.6g})",
                scaled_value=self.value, log_scale=self.log_scale, error=self.error,
            )
        return self.value * math.exp(self.log_scale)

    def rescaled(self, log_scale: float) -> "SpecFunValue":
        """Same quantity expressed with another exponent."""
        factor = math.exp(self.log_scale - log_scale)
        return replace(self, value=self.value * factor, error=self.error * factor, log_scale=log_scale)

    def normalized(self) -> "SpecFunValue":
        """Fold log_scale into value when that is representable."""
        if not self.scaled or self.value == 0.0:
            return self
        if abs(math.log(abs(self.value)) + self.log_scale) <= _MAX_LOG:
            return self.rescaled(0.0)
        return self


def relative_error_ok(v: SpecFunValue, bound: float = 1e-10) -> bool:
    return v.error <= bound * (abs(v.value) + 1.0)
