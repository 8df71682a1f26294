"""Input validation shared by the functional API and the estimators."""

from __future__ import annotations

import math

import numpy as np
from sklearn.utils.validation import check_array


def check_finite(name: str, value) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def check_count(name: str, n, minimum: int = 0) -> int:
    """Iteration counts are exact ints (numpy integers accepted, floats rejected)."""
    if isinstance(n, (bool, np.bool_)) or not isinstance(n, (int, np.integer)):
        raise TypeError(f"{name} must be an integer, got {type(n).__name__}")
    n = int(n)
    if n < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {n}")
    return n


def check_points(X, n_features: int = 2) -> np.ndarray:
    """Validate a 2-D float array of points with ``n_features`` columns."""
    X = check_array(X, dtype=np.float64, ensure_all_finite=True)
    if X.shape[1] != n_features:
        raise ValueError(f"expected {n_features} columns, got {X.shape[1]}")
    return X


def check_planar_blocks(X) -> np.ndarray:
    """Validate an array whose columns pair up into planar blocks."""
    X = check_array(X, dtype=np.float64, ensure_all_finite=True)
    if X.shape[1] % 2:
        raise ValueError(f"expected an even number of columns, got {X.shape[1]}")
    return X
