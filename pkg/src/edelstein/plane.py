"""One planar affine rotation block ``R x = L_theta x + v``.

The translation is always ``v = xi * (1 - cos(theta), -sin(theta))`` so the
fixed point is ``(xi, 0)``.  When the angle is an Edelstein angle
``2 pi / k!`` the integer ``k`` is kept and iterate angles are reduced
modulo ``k!`` in integer arithmetic before any trigonometric call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from edelstein._validation import check_count, check_finite, check_points
from edelstein.indices import factorial

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class PlanePoint:
    x1: float
    x2: float

    def __post_init__(self):
        object.__setattr__(self, "x1", check_finite("x1", self.x1))
        object.__setattr__(self, "x2", check_finite("x2", self.x2))

    def __iter__(self):
        yield self.x1
        yield self.x2

    def __add__(self, other: PlanePoint) -> PlanePoint:
        return PlanePoint(self.x1 + other.x1, self.x2 + other.x2)

    def __sub__(self, other: PlanePoint) -> PlanePoint:
        return PlanePoint(self.x1 - other.x1, self.x2 - other.x2)

    def __mul__(self, c: float) -> PlanePoint:
        return PlanePoint(c * self.x1, c * self.x2)

    __rmul__ = __mul__

    def dot(self, other: PlanePoint) -> float:
        return self.x1 * other.x1 + self.x2 * other.x2

    def norm_sq(self) -> float:
        return self.x1 * self.x1 + self.x2 * self.x2

    def norm(self) -> float:
        return math.hypot(self.x1, self.x2)


ORIGIN = PlanePoint(0.0, 0.0)


def edelstein_angle(k: int) -> float:
    """``2 pi / k!`` as a double (0.0 once it underflows)."""
    return TWO_PI * (1 / factorial(k))


@dataclass(frozen=True)
class RotationParams:
    """Angle ``theta`` in ``(0, 2 pi]`` and scale ``xi > 0`` of one block.

    Build Edelstein blocks with :meth:`edelstein`, which records ``k`` so that
    angles ``n * theta`` are reduced exactly.
    """

    theta: float
    xi: float = 1.0
    k: int | None = None

    def __post_init__(self):
        theta = check_finite("theta", self.theta)
        xi = check_finite("xi", self.xi)
        if not xi > 0.0:
            raise ValueError(f"xi must be positive, got {xi!r}")
        if self.k is not None:
            check_count("k", self.k, 1)
            # for k > ~170 the float angle underflows to 0; k stays authoritative
            if theta != edelstein_angle(self.k):
                raise ValueError(f"theta={theta!r} is not 2*pi/{self.k}!")
        elif not 0.0 < theta <= TWO_PI:
            raise ValueError(f"theta must lie in (0, 2*pi], got {theta!r}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "xi", xi)

    @classmethod
    def edelstein(cls, k: int, xi: float = 1.0) -> RotationParams:
        k = check_count("k", k, 1)
        return cls(edelstein_angle(k), xi, k)

    @property
    def translation(self) -> PlanePoint:
        c, s = _cos_sin_multiple(self, 1)
        return PlanePoint(self.xi * (1.0 - c), -self.xi * s)


def _cos_sin_turns(num: int, den: int) -> tuple[float, float]:
    """cos and sin of ``2 pi * num / den`` with the quadrant split off exactly."""
    num %= den
    quadrant, rem = divmod(4 * num, den)
    if rem == 0:
        c, s = 1.0, 0.0
    else:
        phi = HALF_PI * (rem / den)
        c, s = math.cos(phi), math.sin(phi)
    return _rotate_quadrant(quadrant, c, s)


def _cos_sin_angle(angle: float) -> tuple[float, float]:
    t = math.fmod(angle, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    quadrant = min(int(t // HALF_PI), 3)
    phi = t - quadrant * HALF_PI
    if phi == 0.0:
        c, s = 1.0, 0.0
    else:
        c, s = math.cos(phi), math.sin(phi)
    return _rotate_quadrant(quadrant, c, s)


def _rotate_quadrant(quadrant: int, c: float, s: float) -> tuple[float, float]:
    if quadrant == 0:
        return c, s
    if quadrant == 1:
        return -s, c
    if quadrant == 2:
        return -c, -s
    return s, -c


def _cos_sin_multiple(params: RotationParams, n: int, half: bool = False) -> tuple[float, float]:
    """cos and sin of ``n * theta`` (or ``n * theta / 2`` when ``half``)."""
    if params.k is not None:
        den = factorial(params.k) * (2 if half else 1)
        return _cos_sin_turns(n, den)
    angle = params.theta * (0.5 if half else 1.0)
    return _cos_sin_angle(float(n) * angle)


def _is_full_turn(params: RotationParams, n: int) -> bool:
    if params.k is not None:
        return n % factorial(params.k) == 0
    return n == 0


def sin_sq_half_multiple(params: RotationParams, n: int) -> float:
    """``sin^2(n * theta / 2)`` with the argument folded into ``[0, pi/2]``."""
    if params.k is not None:
        d = factorial(params.k)
        r = n % d
        r = min(r, d - r)
        s = 0.0 if r == 0 else math.sin(math.pi * (r / d))
        return s * s
    c, s = _cos_sin_multiple(params, n, half=True)
    return s * s


def rotation_matrix_apply(theta: float, p: PlanePoint) -> PlanePoint:
    """``L_theta p``, the plain rotation by ``theta``."""
    theta = check_finite("theta", theta)
    c, s = _cos_sin_angle(theta)
    return PlanePoint(p.x1 * c - p.x2 * s, p.x1 * s + p.x2 * c)


def _rotate(c: float, s: float, p: PlanePoint) -> PlanePoint:
    return PlanePoint(p.x1 * c - p.x2 * s, p.x1 * s + p.x2 * c)


def apply_R(params: RotationParams, p: PlanePoint) -> PlanePoint:
    """One step ``L_theta p + v``."""
    c, s = _cos_sin_multiple(params, 1)
    xi = params.xi
    return PlanePoint(p.x1 * c - p.x2 * s + xi * (1.0 - c), p.x1 * s + p.x2 * c - xi * s)


def fixed_point(params: RotationParams) -> PlanePoint:
    """The canonical fixed point ``(xi, 0)``.

    For ``theta = 2 pi`` the block is the identity and every point is fixed;
    :func:`fixed_point_is_unique` tells the two cases apart.
    """
    return PlanePoint(params.xi, 0.0)


def fixed_point_is_unique(params: RotationParams) -> bool:
    if params.k is not None:
        return params.k != 1
    return params.theta < TWO_PI


def iterate_R(params: RotationParams, p: PlanePoint, n: int) -> PlanePoint:
    """``R^n p = f + L_{n theta}(p - f)``, exact return to ``p`` on full turns."""
    n = check_count("n", n)
    if _is_full_turn(params, n):
        return p
    c, s = _cos_sin_multiple(params, n)
    f = fixed_point(params)
    return f + _rotate(c, s, p - f)


def orbit_norm_sq_zero(params: RotationParams, n: int) -> float:
    """``||R^n 0||^2 = 4 xi^2 sin^2(n theta / 2)``."""
    n = check_count("n", n)
    return 4.0 * params.xi**2 * sin_sq_half_multiple(params, n)


def iterate_norm_sq_bounds(params: RotationParams, p: PlanePoint, n: int) -> tuple[float, float]:
    """Sandwich ``(-|p|^2 + 2 xi^2 s, 3 |p|^2 + 6 xi^2 s)`` with ``s = sin^2(n theta/2)``
    around ``||R^n p||^2``."""
    n = check_count("n", n)
    sq = sin_sq_half_multiple(params, n)
    p2 = p.norm_sq()
    xi2 = params.xi**2
    return -p2 + 2.0 * xi2 * sq, 3.0 * p2 + 6.0 * xi2 * sq


def _resolve_params(theta, k, xi) -> RotationParams:
    if k is not None:
        if theta is not None:
            raise ValueError("give either theta or k, not both")
        return RotationParams.edelstein(k, xi)
    if theta is None:
        raise ValueError("one of theta or k is required")
    return RotationParams(theta, xi)


class AffineRotation(TransformerMixin, BaseEstimator):
    """Apply ``R^n_iter`` to every row of a ``(n_samples, 2)`` array.

    Parameters
    ----------
    theta : float, optional
        Rotation angle in ``(0, 2 pi]``.
    k : int, optional
        Use the Edelstein angle ``2 pi / k!`` instead of ``theta``.
    xi : float
        Scale of the translation; the fixed point is ``(xi, 0)``.
    n_iter : int
        Number of applications of ``R``.

    Attributes
    ----------
    params_ : RotationParams
    fixed_point_ : ndarray of shape (2,)
    translation_ : ndarray of shape (2,)
    unique_fixed_point_ : bool
    """

    def __init__(self, theta=None, k=None, xi=1.0, n_iter=1):
        self.theta = theta
        self.k = k
        self.xi = xi
        self.n_iter = n_iter

    def fit(self, X=None, y=None):
        self.params_ = _resolve_params(self.theta, self.k, self.xi)
        check_count("n_iter", self.n_iter)
        self.fixed_point_ = np.array(tuple(fixed_point(self.params_)))
        self.translation_ = np.array(tuple(self.params_.translation))
        self.unique_fixed_point_ = fixed_point_is_unique(self.params_)
        if X is not None:
            self.n_features_in_ = check_points(X).shape[1]
        return self

    def _map(self, X, sign):
        check_is_fitted(self, "params_")
        X = check_points(X)
        n = check_count("n_iter", self.n_iter)
        if _is_full_turn(self.params_, n):
            return X.copy()
        c, s = _cos_sin_multiple(self.params_, n)
        s *= sign
        D = X - self.fixed_point_
        out = np.empty_like(X)
        out[:, 0] = self.fixed_point_[0] + D[:, 0] * c - D[:, 1] * s
        out[:, 1] = D[:, 0] * s + D[:, 1] * c
        return out

    def transform(self, X):
        return self._map(X, 1.0)

    def inverse_transform(self, X):
        return self._map(X, -1.0)
