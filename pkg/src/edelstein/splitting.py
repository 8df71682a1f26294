"""Averaged rotation, Douglas-Rachford on two lines, and the monotone operator.

``T = (Id + R) / 2`` is firmly nonexpansive with ``T^n x = f + cos^n(theta/2)
L_{n theta/2}(x - f)``.  With ``U`` the horizontal axis and ``V`` the line
through ``f`` at angle ``theta/2``, the Douglas-Rachford operator
``Id - P_U + P_V(2 P_U - Id)`` coincides with ``T``.  The monotone operator
is ``M = T^{-1} - Id``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from edelstein._validation import check_count, check_points
from edelstein.certified import CertifiedValue, round_up
from edelstein.indices import factorial
from edelstein.operator import Ell2Vector, orbit_tail_bound
from edelstein.plane import (
    PlanePoint,
    RotationParams,
    _cos_sin_multiple,
    _resolve_params,
    _rotate,
    apply_R,
    fixed_point,
    fixed_point_is_unique,
)
from edelstein.schedules import XiSchedule

_UNIT_TOL = 4 * 2.0**-52


@dataclass(frozen=True)
class AffineLine:
    """The line ``base + R direction`` with ``|direction| = 1``."""

    base: PlanePoint
    direction: PlanePoint

    def __post_init__(self):
        if abs(self.direction.norm() - 1.0) > _UNIT_TOL:
            raise ValueError(f"direction must be a unit vector, got norm {self.direction.norm()!r}")

    @classmethod
    def through(cls, base: PlanePoint, direction: PlanePoint) -> AffineLine:
        """Build a line, normalising ``direction``."""
        length = direction.norm()
        if length == 0.0:
            raise ValueError("direction must be nonzero")
        return cls(base, PlanePoint(direction.x1 / length, direction.x2 / length))

    def project(self, p: PlanePoint) -> PlanePoint:
        return project_line(self, p)


HORIZONTAL_AXIS = AffineLine(PlanePoint(0.0, 0.0), PlanePoint(1.0, 0.0))


class MonotoneKind(enum.Enum):
    POINT = "point"
    WHOLE_PLANE = "whole_plane"
    EMPTY = "empty"


@dataclass(frozen=True)
class MonotoneValue:
    """The value of the set-valued ``M``: a single point, the whole plane, or nothing."""

    kind: MonotoneKind
    point: PlanePoint | None = None

    def __post_init__(self):
        if (self.kind is MonotoneKind.POINT) != (self.point is not None):
            raise ValueError("a point is required exactly for single-valued results")


def _half_cos_sin(params: RotationParams) -> tuple[float, float]:
    return _cos_sin_multiple(params, 1, half=True)


def _is_half_turn(params: RotationParams) -> bool:
    if params.k is not None:
        return params.k == 2
    return params.theta == math.pi


def apply_T(params: RotationParams, p: PlanePoint) -> PlanePoint:
    """``(p + R p) / 2``."""
    r = apply_R(params, p)
    return PlanePoint(0.5 * (p.x1 + r.x1), 0.5 * (p.x2 + r.x2))


def contraction_rate(params: RotationParams) -> float:
    """``cos(theta / 2)``; its absolute value is the exact per-step rate of ``T``."""
    return _half_cos_sin(params)[0]


def iterate_T(params: RotationParams, p: PlanePoint, n: int) -> PlanePoint:
    """``T^n p = f + cos^n(theta/2) L_{n theta/2}(p - f)``."""
    n = check_count("n", n)
    if n == 0 or not fixed_point_is_unique(params):
        # theta = 2 pi makes T the identity
        return p
    c = contraction_rate(params)
    f = fixed_point(params)
    if c == 0.0:
        return f
    cn, sn = _cos_sin_multiple(params, n, half=True)
    return f + _rotate(cn, sn, p - f) * c**n


def project_line(line: AffineLine, p: PlanePoint) -> PlanePoint:
    """Orthogonal projection onto ``line``."""
    d = line.direction
    t = (p - line.base).dot(d)
    return line.base + d * t


def edelstein_lines(params: RotationParams) -> tuple[AffineLine, AffineLine]:
    """``U`` = horizontal axis and ``V = f + R (cos(theta/2), sin(theta/2))``."""
    c, s = _half_cos_sin(params)
    return HORIZONTAL_AXIS, AffineLine.through(fixed_point(params), PlanePoint(c, s))


def apply_DR(lineU: AffineLine, lineV: AffineLine, p: PlanePoint) -> PlanePoint:
    """``p - P_U p + P_V(2 P_U p - p)``."""
    pu = project_line(lineU, p)
    reflected = PlanePoint(2.0 * pu.x1 - p.x1, 2.0 * pu.x2 - p.x2)
    pv = project_line(lineV, reflected)
    return PlanePoint(p.x1 - pu.x1 + pv.x1, p.x2 - pu.x2 + pv.x2)


def half_tan(params: RotationParams) -> float:
    """``tan(theta / 2)``; undefined for ``theta = pi``."""
    if _is_half_turn(params):
        raise ValueError("tan(theta/2) is undefined at theta = pi")
    c, s = _half_cos_sin(params)
    return s / c + 0.0


def apply_M(params: RotationParams, p: PlanePoint) -> MonotoneValue:
    """``M p = tan(theta/2) (p_2 - f_2, f_1 - p_1)``, or set-valued at ``theta = pi``.

    At ``theta = pi``, ``T`` is constant ``f`` so ``M f`` is the whole plane
    and ``M p`` is empty for any other ``p``.
    """
    f = fixed_point(params)
    if _is_half_turn(params):
        if p == f:
            return MonotoneValue(MonotoneKind.WHOLE_PLANE)
        return MonotoneValue(MonotoneKind.EMPTY)
    t = half_tan(params)
    d = p - f
    return MonotoneValue(MonotoneKind.POINT, PlanePoint(t * d.x2 + 0.0, -t * d.x1 + 0.0))


def verify_monotone_equality(params: RotationParams, p: PlanePoint, q: PlanePoint) -> float:
    """``<M p - M q, p - q>``, which vanishes because ``M`` is a skew map about ``f``."""
    if _is_half_turn(params):
        raise ValueError("M is set-valued at theta = pi; the inner product is not defined")
    mp = apply_M(params, p).point
    mq = apply_M(params, q).point
    return (mp - mq).dot(p - q)


# sum_{k >= 3} 1/(k!)^2, rounded up; terms past k = 20 are below 1e-36
_INV_FACTORIAL_SQ_FROM_3 = round_up(math.fsum(1.0 / factorial(k) ** 2 for k in range(3, 21)) + 1e-36)


def monotone_tail_bound(xs: XiSchedule, x: Ell2Vector) -> float:
    """Upper bound on ``sum_{k >= 3} |u_k|^2`` for ``u`` in ``M x``.

    ``2 (|x|^2 + xi_1^2) sum_{k >= 3} tan^2(pi/k!)`` with
    ``tan^2(pi/k!) <= (4 pi^2 / 3) / (k!)^2``.
    """
    return round_up(2.0 * (x.norm_sq() + xs.xi(1) ** 2) * (4.0 * math.pi**2 / 3.0) * _INV_FACTORIAL_SQ_FROM_3)


def product_domain_check(xs: XiSchedule, x: Ell2Vector) -> bool:
    """Whether the lifted monotone operator has a value at ``x``.

    Plane 1 rotates by ``2 pi`` (``M`` is zero there) and plane 2 by ``pi``,
    so ``M x`` is nonempty exactly when block 2 equals ``(xi_2, 0)``; the
    remaining planes contribute a finite amount by :func:`monotone_tail_bound`.
    """
    if x.block(2) != PlanePoint(xs.xi(2), 0.0):
        return False
    return math.isfinite(monotone_tail_bound(xs, x))


def lifted_monotone_blocks(xs: XiSchedule, x: Ell2Vector, horizon: int = 0) -> list[MonotoneValue]:
    """Blockwise values of the lifted ``M`` on planes ``1..max(len(x), horizon)``."""
    m = max(len(x), check_count("horizon", horizon))
    return [apply_M(RotationParams.edelstein(k, xs.xi(k)), x.block(k)) for k in range(1, m + 1)]


@dataclass(frozen=True)
class DRRow:
    n: int
    norm_sq: CertifiedValue
    shadow_norm_sq: CertifiedValue


def dr_trajectory(xs: XiSchedule, x0: Ell2Vector, n_values, horizon: int = 20) -> list[DRRow]:
    """Norms of ``D^n x0`` and of its shadow ``P_U D^n x0`` in the product space.

    ``D`` acts planewise as ``T``.  Planes past ``horizon`` start at zero
    and their contribution is bounded by ``4 pi^2 xi^2 n^2 / (k!)^2`` per
    plane; the certified values carry that tail.
    """
    horizon = check_count("horizon", horizon, 1)
    if len(x0) > horizon:
        raise ValueError(f"starting point has {len(x0)} planes, more than horizon={horizon}")
    X = x0.padded(horizon)
    params = [RotationParams.edelstein(k, xs.xi(k)) for k in range(1, horizon + 1)]
    rows = []
    for n in n_values:
        n = check_count("n", n)
        Y = np.array([tuple(iterate_T(p, PlanePoint(*X[k]), n)) for k, p in enumerate(params)])
        tail = orbit_tail_bound(xs, n, horizon)
        full = math.fsum((Y**2).ravel())
        shadow = math.fsum(Y[:, 0] ** 2)
        rows.append(DRRow(
            n,
            CertifiedValue(full, round_up(tail + full * 2.0**-50)),
            CertifiedValue(shadow, round_up(tail + shadow * 2.0**-50)),
        ))
    return rows


class _PlaneOperator(TransformerMixin, BaseEstimator):
    def __init__(self, theta=None, k=None, xi=1.0, n_iter=1):
        self.theta = theta
        self.k = k
        self.xi = xi
        self.n_iter = n_iter

    def fit(self, X=None, y=None):
        self.params_ = _resolve_params(self.theta, self.k, self.xi)
        check_count("n_iter", self.n_iter)
        self.fixed_point_ = np.array(tuple(fixed_point(self.params_)))
        self.rate_ = abs(contraction_rate(self.params_))
        if X is not None:
            self.n_features_in_ = check_points(X).shape[1]
        return self


class AveragedRotation(_PlaneOperator):
    """Apply ``T^n_iter = ((Id + R) / 2)^n_iter`` by the closed form.

    Attributes
    ----------
    params_ : RotationParams
    fixed_point_ : ndarray of shape (2,)
    rate_ : float
        ``|cos(theta/2)|``, the exact linear rate towards ``fixed_point_``.
    """

    def transform(self, X):
        check_is_fitted(self, "params_")
        X = check_points(X)
        n = check_count("n_iter", self.n_iter)
        if n == 0 or not fixed_point_is_unique(self.params_):
            return X.copy()
        f = self.fixed_point_
        c = contraction_rate(self.params_)
        if c == 0.0:
            return np.tile(f, (X.shape[0], 1))
        cn, sn = _cos_sin_multiple(self.params_, n, half=True)
        scale = c**n
        D = X - f
        out = np.empty_like(X)
        out[:, 0] = f[0] + scale * (D[:, 0] * cn - D[:, 1] * sn)
        out[:, 1] = f[1] + scale * (D[:, 0] * sn + D[:, 1] * cn)
        return out


class DouglasRachford(_PlaneOperator):
    """Iterate ``D = Id - P_U + P_V(2 P_U - Id)`` for the lines of :func:`edelstein_lines`.

    Unlike :class:`AveragedRotation` this runs the projections step by step.
    ``shadow`` returns ``P_U D^n_iter X``, which approaches ``U`` meet ``V``.
    """

    def fit(self, X=None, y=None):
        super().fit(X, y)
        self.lines_ = edelstein_lines(self.params_)
        return self

    @staticmethod
    def _project(line: AffineLine, X):
        b = np.array(tuple(line.base))
        d = np.array(tuple(line.direction))
        return b + np.outer((X - b) @ d, d)

    def transform(self, X):
        check_is_fitted(self, "lines_")
        X = check_points(X)
        U, V = self.lines_
        for _ in range(check_count("n_iter", self.n_iter)):
            pu = self._project(U, X)
            X = X - pu + self._project(V, 2.0 * pu - X)
        return X

    def shadow(self, X):
        return self._project(self.lines_[0], self.transform(X))
