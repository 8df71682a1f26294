"""Exact suborbit index sequences and fractional parts of ``N / k!``.

Everything here is integer arithmetic on Python ints, so values such as
``e_6`` (828 decimal digits) are represented without rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


def _check_index(name: str, n, minimum: int) -> int:
    if isinstance(n, bool) or not isinstance(n, int):
        raise TypeError(f"{name} must be an int, got {type(n).__name__}")
    if n < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {n}")
    return n


@lru_cache(maxsize=4096)
def factorial(n: int) -> int:
    """Exact ``n!``."""
    return math.factorial(_check_index("n", n, 0))


def edelstein_index(n: int) -> int:
    """Edelstein's escaping index ``e_n = (1/2) * sum_{m=1}^{n} (n 2^m)!``.

    >>> [edelstein_index(n) for n in (1, 2)]
    [1, 20172]
    """
    _check_index("n", n, 1)
    total = sum(factorial(n * 2**m) for m in range(1, n + 1))
    # every term is (n 2^m)! with n 2^m >= 2, hence even
    assert total % 2 == 0, "factorial sum must be even"
    return total // 2


def s_index(n: int) -> int:
    """``s_n = 1 + sum_{m=1}^{n-1} ceil(m/2) (m+2)!``, evaluated literally.

    The first values are 1, 7, 31, 271, 1711, ...; see :func:`printed_s_index`
    for the list shifted by one.
    """
    _check_index("n", n, 1)
    value = 1 + sum(((m + 1) // 2) * factorial(m + 2) for m in range(1, n))
    if n >= 2:
        assert 2 * value < factorial(n + 2), "s_n < (n+2)!/2 violated"
    return value


def printed_s_index(n: int) -> int:
    """The published list ``(7, 31, 271, 1711, 16831, 137791, ...)``.

    This is ``s_index(n + 1)``: the list as printed starts one step later
    than the defining sum.
    """
    _check_index("n", n, 1)
    return s_index(n + 1)


def decimal_digits(N: int) -> int:
    """Number of decimal digits of a nonnegative integer, by exact conversion."""
    _check_index("N", N, 0)
    return len(str(N))


@dataclass(frozen=True)
class FractionalPart:
    """The fractional part ``{N / k!}`` as an exact rational plus its nearest double."""

    numerator: int
    denominator: int
    float_value: float

    def __post_init__(self):
        if not 0 <= self.numerator < self.denominator:
            raise ValueError("numerator must lie in [0, denominator)")

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)


def fractional_part(N: int, k: int) -> FractionalPart:
    """Exact ``{N / k!}``; ``float_value`` is correctly rounded.

    >>> fractional_part(7, 3)
    FractionalPart(numerator=1, denominator=6, float_value=0.16666666666666666)
    """
    _check_index("N", N, 0)
    _check_index("k", k, 1)
    d = factorial(k)
    r = N % d
    # int / int is correctly rounded in CPython for arbitrarily large operands
    return FractionalPart(r, d, r / d)
