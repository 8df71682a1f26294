"""Positive, nonincreasing scale schedules ``xi_k`` for the lifted operator."""

from __future__ import annotations

import math
from dataclasses import dataclass

KINDS = ("constant", "inverse_sqrt", "explicit", "geometric")


@dataclass(frozen=True)
class XiSchedule:
    """A schedule ``k -> xi_k`` for ``k >= 1``.

    Kinds:

    ``constant``      xi_k = value
    ``inverse_sqrt``  xi_k = 1 / sqrt(k)
    ``explicit``      xi_k = values[k-1] for the listed k, then ``value``
    ``geometric``     xi_k = value ** k with 0 < value < 1

    Only ``geometric`` is square-summable.
    """

    kind: str = "constant"
    value: float = 1.0
    values: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown schedule kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not math.isfinite(self.value):
            raise ValueError("schedule value must be finite")
        if self.kind == "geometric":
            if not 0.0 < self.value < 1.0:
                raise ValueError(f"geometric ratio must lie in (0, 1), got {self.value}")
        elif self.kind in ("constant", "explicit") and not self.value > 0.0:
            raise ValueError(f"schedule constant must be positive, got {self.value}")
        if self.kind == "explicit":
            seq = self.values + (self.value,)
            if any(not (math.isfinite(v) and v > 0.0) for v in seq):
                raise ValueError("explicit schedule entries must be positive and finite")
            if any(b > a for a, b in zip(seq, seq[1:])):
                raise ValueError("explicit schedule must be nonincreasing, tail included")
        elif self.values:
            raise ValueError(f"{self.kind} schedule takes no explicit values")

    @classmethod
    def constant(cls, c: float = 1.0) -> XiSchedule:
        return cls("constant", c)

    @classmethod
    def inverse_sqrt(cls) -> XiSchedule:
        return cls("inverse_sqrt", 1.0)

    @classmethod
    def explicit(cls, values, tail: float) -> XiSchedule:
        return cls("explicit", tail, tuple(values))

    @classmethod
    def geometric(cls, ratio: float) -> XiSchedule:
        return cls("geometric", ratio)

    @classmethod
    def parse(cls, spec: str) -> XiSchedule:
        """Parse ``constant:1.0``, ``invsqrt``, ``geometric:0.5`` or
        ``list:1.0,0.9,0.8;tail:0.8``."""
        text = spec.strip()
        head, _, rest = text.partition(":")
        try:
            if head == "constant":
                return cls.constant(float(rest) if rest else 1.0)
            if head in ("invsqrt", "inverse_sqrt") and not rest:
                return cls.inverse_sqrt()
            if head == "geometric":
                return cls.geometric(float(rest))
            if head == "list":
                listed, sep, tail = rest.partition(";")
                if not sep or not tail.startswith("tail:"):
                    raise ValueError("list schedule needs a ';tail:<value>' suffix")
                values = [float(v) for v in listed.split(",") if v.strip()]
                return cls.explicit(values, float(tail[len("tail:"):]))
        except ValueError as exc:
            raise ValueError(f"bad xi schedule {spec!r}: {exc}") from None
        raise ValueError(f"bad xi schedule {spec!r}")

    def __str__(self):
        if self.kind == "constant":
            return f"constant:{self.value!r}"
        if self.kind == "inverse_sqrt":
            return "invsqrt"
        if self.kind == "geometric":
            return f"geometric:{self.value!r}"
        listed = ",".join(repr(v) for v in self.values)
        return f"list:{listed};tail:{self.value!r}"

    def xi(self, k: int) -> float:
        if k < 1:
            raise ValueError(f"schedule index must be >= 1, got {k}")
        if self.kind == "constant":
            return self.value
        if self.kind == "inverse_sqrt":
            return 1.0 / math.sqrt(k)
        if self.kind == "geometric":
            return self.value**k
        if k <= len(self.values):
            return self.values[k - 1]
        return self.value

    def __call__(self, k: int) -> float:
        return self.xi(k)

    @property
    def summable(self) -> bool:
        """Whether ``sum_k xi_k^2`` is finite."""
        return self.kind == "geometric"

    def tail_sq_sum(self, K: int) -> float:
        """Upper bound on ``sum_{k > K} xi_k^2`` (``inf`` when divergent)."""
        if not self.summable:
            return math.inf
        r2 = self.value**2
        return r2 ** (K + 1) / (1.0 - r2)
