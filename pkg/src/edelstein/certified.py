"""Floating values carrying a rigorous absolute error bound."""

from __future__ import annotations

import math
from dataclasses import dataclass

# Relative slack applied whenever a bound itself is computed in floating point.
_BOUND_SLACK = 2.0**-48


def round_up(x: float) -> float:
    """Inflate a nonnegative floating bound so that rounding cannot undercut it."""
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return x
    return math.nextafter(x * (1.0 + _BOUND_SLACK), math.inf)


@dataclass(frozen=True)
class CertifiedValue:
    """A computed number whose true value lies in ``[value - error_bound, value + error_bound]``.

    ``error_bound`` may be ``math.inf`` to mark a quantity known only to be
    at least ``value`` (a divergent partial sum, for instance).
    """

    value: float
    error_bound: float = 0.0

    def __post_init__(self):
        if math.isnan(self.value) or math.isinf(self.value):
            raise ValueError(f"certified value must be finite, got {self.value!r}")
        if not self.error_bound >= 0.0:
            raise ValueError(f"error bound must be nonnegative, got {self.error_bound!r}")

    @classmethod
    def exact(cls, value) -> CertifiedValue:
        """Wrap a value computed by a single correctly rounded operation."""
        value = float(value)
        return cls(value, round_up(abs(value) * 2.0**-53))

    @property
    def lower(self) -> float:
        return self.value - self.error_bound

    @property
    def upper(self) -> float:
        return self.value + self.error_bound

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.error_bound)

    def contains(self, x: float) -> bool:
        return self.lower <= x <= self.upper

    def sqrt(self) -> CertifiedValue:
        """Square root of a certified nonnegative quantity."""
        lo = math.sqrt(max(self.lower, 0.0))
        hi = math.sqrt(self.upper) if self.is_finite else math.inf
        mid = math.sqrt(max(self.value, 0.0))
        return CertifiedValue(mid, round_up(max(mid - lo, hi - mid)))

    def scale(self, c: float) -> CertifiedValue:
        value = c * self.value
        return CertifiedValue(value, round_up(abs(c) * self.error_bound + abs(value) * 2.0**-53))

    def __add__(self, other: CertifiedValue) -> CertifiedValue:
        value = self.value + other.value
        return CertifiedValue(
            value, round_up(self.error_bound + other.error_bound + abs(value) * 2.0**-53)
        )

    def __str__(self):
        return f"{self.value!r} ± {self.error_bound:.3g}"
