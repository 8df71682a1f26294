"""Certificates for the vanishing and escaping suborbits of ``R^n 0``.

A :class:`BoundCertificate` compares certified intervals; it passes only
when the intervals sit on the required side of each other with no overlap.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from edelstein.certified import CertifiedValue, round_up
from edelstein.indices import edelstein_index, factorial, fractional_part, s_index
from edelstein.operator import (
    DEFAULT_REL_TOL,
    crossover_index,
    orbit_norm_sq,
    orbit_tail_bound,
)
from edelstein.schedules import XiSchedule

BLOWUP_MIN_N = 8
WINDOW_MIN_K = 10


class Claim(enum.Enum):
    VANISHING = "vanishing"
    VANISHING_RATE = "vanishing_rate"
    BLOWUP = "blowup"
    BLOWUP_LOWER_CHAIN = "blowup_lower_chain"
    BLOWUP_UPPER_CHAIN = "blowup_upper_chain"
    FRACTIONAL_WINDOW = "fractional_window"
    SIN_SQ_FLOOR = "sin_sq_floor"
    ORBIT_ENVELOPE = "orbit_envelope"


class Relation(enum.Enum):
    LE = "<="
    LT = "<"
    IN_HALF_OPEN = "in [a, b)"
    IN_OPEN = "in (a, b)"


@dataclass(frozen=True)
class BoundCertificate:
    """Outcome of checking ``lhs <relation> rhs``.

    For the interval relations ``lower`` is the left end and ``rhs`` the
    right end.  ``margin`` is the smallest gap between the certified
    intervals (negative on failure); ``links`` are side conditions that must
    also pass.
    """

    claim_id: Claim
    n: int
    lhs: CertifiedValue
    rhs: CertifiedValue
    relation: Relation
    passed: bool
    margin: float
    lower: CertifiedValue | None = None
    links: tuple[BoundCertificate, ...] = ()
    k: int | None = None

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def __bool__(self):
        return self.passed


def certify(claim, n, lhs, relation, rhs, lower=None, links=(), k=None) -> BoundCertificate:
    """Decide a relation between certified values by interval comparison."""
    upper_gap = rhs.lower - lhs.upper
    if relation is Relation.LE:
        margin, ok = upper_gap, upper_gap >= 0.0
    elif relation is Relation.LT:
        margin, ok = upper_gap, upper_gap > 0.0
    else:
        if lower is None:
            raise ValueError("interval relations need a lower end")
        lower_gap = lhs.lower - lower.upper
        margin = min(lower_gap, upper_gap)
        lower_ok = lower_gap > 0.0 if relation is Relation.IN_OPEN else lower_gap >= 0.0
        ok = lower_ok and upper_gap > 0.0
    for link in links:
        ok = ok and link.passed
        margin = min(margin, link.margin)
    return BoundCertificate(claim, n, lhs, rhs, relation, ok, margin, lower, tuple(links), k)


def _cv(x: float, roundings: int = 4) -> CertifiedValue:
    """A value produced by a handful of floating operations."""
    return CertifiedValue(x, round_up(abs(x) * roundings * 2.0**-53))


def _sum_cv(values) -> CertifiedValue:
    values = list(values)
    total = math.fsum(values)
    return CertifiedValue(total, round_up(math.fsum(abs(v) for v in values) * (len(values) + 2) * 2.0**-53))


def vanishing_bound(xs: XiSchedule, n: int) -> float:
    """``4 pi^2 xi_1^2 / (n (n + 2))``, the bound on ``||R^{n!} 0||^2``."""
    return 4.0 * math.pi**2 * xs.xi(1) ** 2 / (n * (n + 2))


def verify_vanishing_suborbit(xs: XiSchedule, n: int, rel_tol: float = DEFAULT_REL_TOL) -> BoundCertificate:
    """Certify ``||R^{n!} 0||^2 < 4 pi^2 xi_1^2 / (n(n+2))``.

    Linked: ``n ||R^{n!} 0|| <= 2 pi xi_1 sqrt(n / (n+2)) <= 2 pi xi_1``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    value = orbit_norm_sq(xs, factorial(n), rel_tol)
    xi1 = xs.xi(1)
    rate = value.sqrt().scale(float(n))
    rate_bound = _cv(2.0 * math.pi * xi1 * math.sqrt(n / (n + 2)), 6)
    rate_cap = _cv(2.0 * math.pi * xi1, 2)
    links = (
        certify(Claim.VANISHING_RATE, n, rate, Relation.LE, rate_bound),
        certify(Claim.VANISHING_RATE, n, rate_bound, Relation.LE, rate_cap),
    )
    return certify(Claim.VANISHING, n, value, Relation.LT, _cv(vanishing_bound(xs, n), 6), links=links)


def _xi_sq(xs: XiSchedule, k: int) -> Fraction:
    return Fraction(xs.xi(k)) ** 2


def _fraction_cv(x: Fraction) -> CertifiedValue:
    """Nearest double to an exact rational, with the exact rounding gap as bound."""
    value = float(x)
    gap = abs(Fraction(value) - x)
    return CertifiedValue(value, 0.0 if gap == 0 else math.nextafter(float(gap), math.inf))


def _blowup_sums(xs: XiSchedule, n: int):
    weakest = 3 * (n - 7) * _xi_sq(xs, n + 2)
    lower = 3 * sum(_xi_sq(xs, k) for k in range(WINDOW_MIN_K, n + 3))
    head = 4 * sum(_xi_sq(xs, k) for k in range(1, n + 3))
    loosest_head = 4 * (n + 2) * _xi_sq(xs, 1)
    tail = math.pi**2 * xs.xi(n + 3) ** 2 / ((n + 3) ** 2 - 1)
    return weakest, lower, head, loosest_head, tail


def blowup_envelope(xs: XiSchedule, n: int) -> tuple[float, float, float, float]:
    """The four theorem bounds around ``||R^{s_n} 0||^2``:

    ``3(n-7) xi_{n+2}^2``, ``3 sum_{k=10}^{n+2} xi_k^2``,
    ``4 sum_{k=1}^{n+2} xi_k^2 + tail`` and ``4(n+2) xi_1^2 + tail`` with
    ``tail = pi^2 xi_{n+3}^2 / ((n+3)^2 - 1)``.
    """
    weakest, lower, head, loosest_head, tail = _blowup_sums(xs, n)
    return float(weakest), float(lower), float(head) + tail, float(loosest_head) + tail


def _require_blowup_range(n: int):
    if n < BLOWUP_MIN_N:
        raise ValueError(
            f"the blow-up bounds on ||R^(s_n) 0||^2 hold only for n >= {BLOWUP_MIN_N}, got n={n}"
        )


def verify_blowup_suborbit(xs: XiSchedule, n: int, rel_tol: float = DEFAULT_REL_TOL) -> BoundCertificate:
    """Certify ``3(n-7) xi_{n+2}^2 <= 3 sum xi_k^2 <= ||R^{s_n} 0||^2 < upper <= loosest``.

    ``s_n`` is the value of the defining sum (:func:`~edelstein.indices.s_index`).
    Sums of ``xi_k^2`` are exact rationals in the schedule's doubles, so the
    outer links hold with zero margin when they are equalities.
    """
    _require_blowup_range(n)
    weakest, lower, head, loosest_head, tail = _blowup_sums(xs, n)
    value = orbit_norm_sq(xs, s_index(n), rel_tol)
    tail_cv = _cv(tail, 8)
    lower_cv = _fraction_cv(lower)
    upper_cv = _fraction_cv(head) + tail_cv
    links = (
        certify(Claim.BLOWUP_LOWER_CHAIN, n, _fraction_cv(weakest), Relation.LE, lower_cv),
        # the common tail term cancels from this link
        certify(Claim.BLOWUP_UPPER_CHAIN, n, _fraction_cv(head), Relation.LE, _fraction_cv(loosest_head)),
    )
    return certify(Claim.BLOWUP, n, value, Relation.IN_HALF_OPEN, upper_cv, lower=lower_cv, links=links)


def window_bounds(k: int) -> tuple[Fraction, Fraction]:
    """Exact ``(1/2 - 3/(2k), 1/2 + 13/(24k))``."""
    return Fraction(1, 2) - Fraction(3, 2 * k), Fraction(1, 2) + Fraction(13, 24 * k)


def window_holds_exactly(n: int, k: int) -> bool:
    """Exact rational test of ``1/2 - 3/(2k) < {s_n / k!} < 1/2 + 13/(24k)``."""
    lo, hi = window_bounds(k)
    q = fractional_part(s_index(n), k).as_fraction()
    return lo < q < hi


def verify_fractional_window(n: int) -> list[BoundCertificate]:
    """One certificate per ``k`` in ``[10, n+2]`` for the window around ``{s_n / k!}``.

    Each links the consequence ``sin^2(pi {s_n/k!}) > 3/4``.
    """
    _require_blowup_range(n)
    N = s_index(n)
    certs = []
    for k in range(WINDOW_MIN_K, n + 3):
        frac = fractional_part(N, k)
        lo, hi = window_bounds(k)
        q = CertifiedValue(frac.float_value, round_up(abs(frac.float_value) * 2.0**-53))
        s = math.sin(math.pi * frac.float_value)
        sin_sq = _cv(s * s, 8)
        floor = certify(Claim.SIN_SQ_FLOOR, n, CertifiedValue(0.75, 0.0), Relation.LT, sin_sq, k=k)
        cert = certify(
            Claim.FRACTIONAL_WINDOW, n, q, Relation.IN_OPEN, CertifiedValue.exact(hi),
            lower=CertifiedValue.exact(lo), links=(floor,), k=k,
        )
        exact = lo < frac.as_fraction() < hi
        if cert.passed and not exact:
            raise AssertionError(f"interval check passed but exact check failed at n={n}, k={k}")
        certs.append(cert)
    return certs


def orbit_envelope(xs: XiSchedule, N: int) -> CertifiedValue:
    """A finite upper bound on ``||R^N 0||^2``.

    Full ``4 xi_k^2`` below the crossover index, the geometric tail bound
    beyond it.
    """
    if N == 0:
        return CertifiedValue(0.0, 0.0)
    # N >= 1 gives a crossover index >= 2, so K >= 1
    K = crossover_index(N) - 1
    head = 4.0 * math.fsum(xs.xi(k) ** 2 for k in range(1, K + 1))
    return _sum_cv([head, orbit_tail_bound(xs, N, K)])


def verify_blowup_edelstein(xs: XiSchedule, n: int, rel_tol: float = DEFAULT_REL_TOL) -> BoundCertificate:
    """Evaluate ``||R^{e_n} 0||^2`` and check it against :func:`orbit_envelope`.

    Growth in ``n`` is left to the caller to inspect; only finiteness and the
    envelope are certified.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > 3:
        warnings.warn(f"e_{n} is astronomically large; evaluation may be slow", RuntimeWarning, stacklevel=2)
    N = edelstein_index(n)
    value = orbit_norm_sq(xs, N, rel_tol)
    return certify(Claim.ORBIT_ENVELOPE, n, value, Relation.LE, orbit_envelope(xs, N))


@dataclass(frozen=True)
class RateRow:
    n: int
    vanishing_norm: CertifiedValue
    vanishing_bound: float
    blowup_norm: CertifiedValue | None
    blowup_lower: float | None
    passed: bool


def rate_table(xs: XiSchedule, n_max: int, n_min: int = 1, rel_tol: float = DEFAULT_REL_TOL) -> list[RateRow]:
    """Rows comparing ``||R^{n!} 0||`` with ``2 pi xi_1 / sqrt(n(n+2))`` and,
    from ``n = 8`` on, ``||R^{s_n} 0||`` with ``sqrt(3(n-7)) xi_{n+2}``."""
    _require_blowup_range(n_max)
    rows = []
    for n in range(max(n_min, 1), n_max + 1):
        van = verify_vanishing_suborbit(xs, n, rel_tol)
        passed = van.passed
        blow_norm = blow_lower = None
        if n >= BLOWUP_MIN_N:
            blow = verify_blowup_suborbit(xs, n, rel_tol)
            passed = passed and blow.passed
            blow_norm = blow.lhs.sqrt()
            blow_lower = math.sqrt(3.0 * (n - 7)) * xs.xi(n + 2)
        rows.append(RateRow(n, van.lhs.sqrt(), math.sqrt(vanishing_bound(xs, n)), blow_norm, blow_lower, passed))
    return rows
