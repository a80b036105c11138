"""Small input-validation helpers used across the package."""

from __future__ import annotations

import numbers

import numpy as np

from ._errors import DomainError, InputError


def as_float_vector(x, name="x", min_length=1) -> np.ndarray:
    """Return ``x`` as a 1-D contiguous float64 array with finite entries."""
    try:
        arr = np.ascontiguousarray(np.asarray(x, dtype=np.float64))
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name} must be numeric: {exc}") from None
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise InputError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.shape[0] < min_length:
        raise DomainError(f"{name} needs at least {min_length} entries, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite values")
    return arr


def check_strictly_increasing(x: np.ndarray, name="knots") -> None:
    if x.shape[0] > 1 and not np.all(np.diff(x) > 0):
        raise InputError(f"{name} must be strictly increasing")


def check_positive(value, name, strict=True) -> float:
    if not isinstance(value, numbers.Real) or not np.isfinite(value):
        raise InputError(f"{name} must be a finite real number, got {value!r}")
    if strict and value <= 0:
        raise DomainError(f"{name} must be > 0, got {value}")
    if not strict and value < 0:
        raise DomainError(f"{name} must be >= 0, got {value}")
    return float(value)


def check_int(value, name, minimum=None) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise InputError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {value}")
    return value


def as_generator(seed) -> np.random.Generator:
    """Turn ``seed`` into a numpy Generator.

    ``None`` is rejected on purpose: every random draw in gcmlab is tied to an
    explicit seed so that results are reproducible.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        raise InputError("an explicit seed (int, SeedSequence or Generator) is required")
    if isinstance(seed, np.random.SeedSequence):
        return np.random.default_rng(seed)
    if isinstance(seed, numbers.Integral) and not isinstance(seed, bool) and seed >= 0:
        return np.random.default_rng(int(seed))
    raise InputError(f"invalid seed {seed!r}")
