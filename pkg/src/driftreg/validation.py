"""Input validation helpers shared by the estimators and the stream engine."""

from __future__ import annotations

import math

import numpy as np

from .exceptions import ArityMismatch, EmptyBatch, NonFiniteInput, RaggedRows


def as_float_matrix(X, name: str = "X") -> np.ndarray:
    """Coerce to a 2-D float64 array and reject non-finite entries."""
    try:
        arr = np.asarray(X, dtype=np.float64)
    except (TypeError, ValueError):
        raise RaggedRows(f"{name} is not a rectangular numeric array")
    if arr.ndim != 2:
        raise ArityMismatch(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.size == 0:
        raise EmptyBatch(f"{name} is empty")
    if not np.isfinite(arr).all():
        raise NonFiniteInput(f"{name} contains NaN or infinite values")
    return arr


def as_float_vector(y, name: str = "y") -> np.ndarray:
    """Coerce to a 1-D float64 array and reject non-finite entries."""
    arr = np.asarray(y, dtype=np.float64)
    if arr.ndim != 1:
        raise ArityMismatch(f"{name} must be 1-D, got shape {arr.shape}")
    if arr.size == 0:
        raise EmptyBatch(f"{name} is empty")
    if not np.isfinite(arr).all():
        raise NonFiniteInput(f"{name} contains NaN or infinite values")
    return arr


def as_feature_vector(x, expected_arity: int | None = None) -> np.ndarray:
    """Coerce a single feature vector, optionally enforcing its arity."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ArityMismatch(f"feature vector must be 1-D, got shape {arr.shape}")
    if expected_arity is not None and arr.shape[0] != expected_arity:
        raise ArityMismatch(
            f"feature vector has {arr.shape[0]} entries, expected {expected_arity}"
        )
    if not np.isfinite(arr).all():
        raise NonFiniteInput("feature vector contains NaN or infinite values")
    return arr


def check_finite_scalar(value, name: str = "value") -> float:
    """Validate one scalar; returns it as a plain float."""
    v = float(value)
    if not math.isfinite(v):
        raise NonFiniteInput(f"{name} must be finite, got {value!r}")
    return v
