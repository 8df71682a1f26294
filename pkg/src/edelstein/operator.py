"""The lifted isometry acting blockwise on finitely supported sequences.

Block ``k`` is rotated by the Edelstein angle ``2 pi / k!`` about
``(xi_k, 0)``.  Orbit norms from the origin are infinite series; they are
returned as :class:`~edelstein.certified.CertifiedValue` with a rigorous
bound on the truncated tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from edelstein._validation import check_count, check_planar_blocks
from edelstein.certified import CertifiedValue, round_up
from edelstein.indices import factorial
from edelstein.plane import PlanePoint, _cos_sin_turns
from edelstein.schedules import XiSchedule

ABS_FLOOR = 1e-300
DEFAULT_REL_TOL = 1e-9
# per-term relative rounding error of 4 xi^2 sin^2(pi q), generously rounded up
_TERM_REL_ERR = 2.0**-48
_SMALLEST = 5e-324


class Ell2Vector:
    """A finitely supported element of the product of planes.

    Block ``k`` (1-based) is row ``k - 1`` of :attr:`coords`; every block past
    the stored ones is ``(0, 0)``.
    """

    __slots__ = ("coords",)

    def __init__(self, blocks=()):
        coords = np.array([tuple(b) for b in blocks], dtype=np.float64).reshape(-1, 2)
        if not np.all(np.isfinite(coords)):
            raise ValueError("vector coordinates must be finite")
        coords.setflags(write=False)
        self.coords = coords

    @classmethod
    def from_array(cls, coords) -> Ell2Vector:
        return cls(np.asarray(coords, dtype=np.float64).reshape(-1, 2))

    @classmethod
    def zeros(cls, m: int) -> Ell2Vector:
        return cls(np.zeros((m, 2)))

    @property
    def blocks(self) -> tuple[PlanePoint, ...]:
        return tuple(PlanePoint(a, b) for a, b in self.coords)

    def __len__(self):
        return self.coords.shape[0]

    def block(self, k: int) -> PlanePoint:
        if k < 1:
            raise IndexError("blocks are numbered from 1")
        if k > len(self):
            return PlanePoint(0.0, 0.0)
        return PlanePoint(*self.coords[k - 1])

    def padded(self, m: int) -> np.ndarray:
        out = np.zeros((max(m, len(self)), 2))
        out[: len(self)] = self.coords
        return out

    def __sub__(self, other: Ell2Vector) -> Ell2Vector:
        m = max(len(self), len(other))
        return Ell2Vector.from_array(self.padded(m) - other.padded(m))

    def norm_sq(self) -> float:
        return math.fsum((self.coords**2).ravel())

    def __eq__(self, other):
        if not isinstance(other, Ell2Vector):
            return NotImplemented
        m = max(len(self), len(other))
        return bool(np.array_equal(self.padded(m), other.padded(m)))

    def __repr__(self):
        return f"Ell2Vector({self.coords.tolist()!r})"


def _block_cos_sin(xs: XiSchedule, m: int, n: int):
    """Per-block cos/sin of ``n theta_k`` and the scales, for ``k = 1..m``."""
    cs = np.empty((m, 2))
    for k in range(1, m + 1):
        cs[k - 1] = _cos_sin_turns(n, factorial(k))
    xi = np.array([xs.xi(k) for k in range(1, m + 1)])
    return cs[:, 0], cs[:, 1], xi


def _iterate_blocks(xs: XiSchedule, coords: np.ndarray, n: int) -> np.ndarray:
    """Closed-form ``R^n`` on an ``(..., m, 2)`` array of blocks."""
    m = coords.shape[-2]
    c, s, xi = _block_cos_sin(xs, m, n)
    d1 = coords[..., 0] - xi
    d2 = coords[..., 1]
    out = np.empty_like(coords)
    out[..., 0] = xi + d1 * c - d2 * s
    out[..., 1] = d1 * s + d2 * c
    # full turns return the input untouched
    still = np.array([n % factorial(k) == 0 for k in range(1, m + 1)])
    out[..., still, :] = coords[..., still, :]
    return out


def apply_lifted(xs: XiSchedule, x: Ell2Vector, horizon: int = 0) -> Ell2Vector:
    """One application of the lifted map to blocks ``1..max(len(x), horizon)``."""
    m = max(len(x), check_count("horizon", horizon))
    return Ell2Vector.from_array(_iterate_blocks(xs, x.padded(m), 1))


def iterate_lifted(xs: XiSchedule, x: Ell2Vector, n: int, horizon: int = 0) -> Ell2Vector:
    """``R^n x`` on blocks ``1..max(len(x), horizon)`` by the per-block closed form."""
    n = check_count("n", n)
    m = max(len(x), check_count("horizon", horizon))
    if n == 0:
        return Ell2Vector.from_array(x.padded(m))
    return Ell2Vector.from_array(_iterate_blocks(xs, x.padded(m), n))


def _orbit_term(xs: XiSchedule, N: int, k: int) -> float:
    d = factorial(k)
    r = N % d
    r = min(r, d - r)
    if r == 0:
        return 0.0
    s = math.sin(math.pi * (r / d))
    return 4.0 * xs.xi(k) ** 2 * s * s


def orbit_tail_bound(xs: XiSchedule, N: int, K: int) -> float:
    """Upper bound on ``4 sum_{k > K} xi_k^2 sin^2(pi N / k!)``.

    Uses ``sin^2 x <= x^2``, monotone ``xi`` and ``k! >= (K+1)! (K+2)^(k-K-1)``,
    which gives ``4 pi^2 xi_{K+1}^2 (N / (K+1)!)^2 (K+2)^2 / ((K+2)^2 - 1)``.
    This is strictly below ``4 pi^2 xi_{K+1}^2 (N / K!)^2 / ((K+1)^2 - 1)``.
    """
    if N == 0:
        return 0.0
    ratio = N / factorial(K + 1)
    if ratio > 1e150:
        return math.inf
    q = (K + 2) ** 2
    bound = 4.0 * math.pi**2 * xs.xi(K + 1) ** 2 * ratio * ratio * (q / (q - 1))
    return max(round_up(bound), _SMALLEST)


def crossover_index(N: int, factor: int = 1) -> int:
    """Smallest ``K >= 1`` with ``K! > factor * N``."""
    target = factor * N
    K = 1
    while factorial(K) <= target:
        K += 1
    return K


def orbit_norm_sq(xs: XiSchedule, n: int, rel_tol: float = DEFAULT_REL_TOL, K: int | None = None) -> CertifiedValue:
    """Certified ``||R^n 0||^2 = 4 sum_k xi_k^2 sin^2(pi n / k!)``.

    Each ``n mod k!`` is taken in exact integer arithmetic.  With ``K`` given
    the series is cut after ``K`` terms; otherwise ``K`` starts at the first
    index with ``K! > 1000 n`` and grows until the certified error is at most
    ``rel_tol * value + 1e-300``.
    """
    n = check_count("n", n)
    if not rel_tol > 0.0:
        raise ValueError(f"rel_tol must be positive, got {rel_tol!r}")
    if n == 0:
        return CertifiedValue(0.0, 0.0)
    if K is not None:
        K = check_count("K", K, 1)
        terms = [_orbit_term(xs, n, k) for k in range(1, K + 1)]
        partial = math.fsum(terms)
        err = orbit_tail_bound(xs, n, K) + partial * _TERM_REL_ERR
        return CertifiedValue(partial, round_up(err))

    K = crossover_index(n, 1000)
    terms = [_orbit_term(xs, n, k) for k in range(1, K + 1)]
    while True:
        partial = math.fsum(terms)
        err = round_up(orbit_tail_bound(xs, n, K) + partial * _TERM_REL_ERR)
        if err <= rel_tol * partial + ABS_FLOOR:
            return CertifiedValue(partial, err)
        K += 1
        terms.append(_orbit_term(xs, n, K))


def translation_norm_sq(xs: XiSchedule, rel_tol: float = DEFAULT_REL_TOL, K: int | None = None) -> CertifiedValue:
    """Certified ``||v||^2 = 4 sum_k xi_k^2 sin^2(pi / k!)``, the one-step orbit norm."""
    return orbit_norm_sq(xs, 1, rel_tol, K)


def algebraic_fixed_point_norm_sq(xs: XiSchedule, K: int) -> CertifiedValue:
    """Partial sum ``sum_{k <= K} xi_k^2`` of ``||f||^2`` for ``f = (xi_1, 0, xi_2, 0, ...)``.

    The error bound is ``inf`` when the schedule is not square-summable,
    i.e. when ``f`` lies outside the sequence space and the lifted map has
    no fixed point.
    """
    K = check_count("K", K, 1)
    partial = math.fsum(xs.xi(k) ** 2 for k in range(1, K + 1))
    tail = xs.tail_sq_sum(K)
    if math.isinf(tail):
        return CertifiedValue(partial, math.inf)
    return CertifiedValue(partial, round_up(tail + partial * 2.0**-50))


def has_fixed_point(xs: XiSchedule) -> bool:
    return xs.summable


class EdelsteinIsometry(TransformerMixin, BaseEstimator):
    """Apply ``R^n_iter`` blockwise to rows of shape ``(n_samples, 2 m)``.

    Column pair ``(2k-2, 2k-1)`` is plane ``k``; planes past ``m`` are
    treated as zero and not materialised.

    Parameters
    ----------
    xi : str or XiSchedule
        Scale schedule, e.g. ``"constant:1.0"`` or ``"invsqrt"``.
    n_iter : int
        Number of applications.
    """

    def __init__(self, xi="constant:1.0", n_iter=1):
        self.xi = xi
        self.n_iter = n_iter

    def fit(self, X=None, y=None):
        self.schedule_ = self.xi if isinstance(self.xi, XiSchedule) else XiSchedule.parse(self.xi)
        check_count("n_iter", self.n_iter)
        if X is not None:
            self.n_features_in_ = check_planar_blocks(X).shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "schedule_")
        X = check_planar_blocks(X)
        n = check_count("n_iter", self.n_iter)
        if n == 0:
            return X.copy()
        blocks = X.reshape(X.shape[0], -1, 2)
        return _iterate_blocks(self.schedule_, blocks, n).reshape(X.shape)

    def orbit_norm_sq(self, n, rel_tol=DEFAULT_REL_TOL):
        """Certified ``||R^n 0||^2`` over the whole (untruncated) sequence space."""
        check_is_fitted(self, "schedule_")
        return orbit_norm_sq(self.schedule_, n, rel_tol)
