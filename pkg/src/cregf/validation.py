"""Input validation helpers and the validated sample container."""

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    EmptySampleError,
    InvalidProbabilityError,
    NegativeValueError,
    OrderOutOfRangeError,
)

__all__ = ["Sample", "sort_validate", "as_sample", "check_lifetimes", "check_order"]


def check_lifetimes(X) -> np.ndarray:
    """Coerce ``X`` to a 1-d float array.

    Accepts any 1-d array-like or a single-column 2-d array (so the
    estimators compose with column-oriented pipelines).
    """
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValueError(
            f"expected a 1-d array or a single column, got shape {arr.shape}"
        )
    return arr


@dataclass(frozen=True)
class Sample:
    """Sorted, validated, non-negative lifetime observations.

    Construction goes through :func:`sort_validate`; the original
    observation order is not retained.
    """

    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.size

    def mean(self) -> float:
        return float(self.values.mean())

    def __len__(self) -> int:
        return self.values.size


def sort_validate(raw) -> Sample:
    """Validate raw observations and return them as a sorted :class:`Sample`.

    Raises
    ------
    EmptySampleError
        If no observations are supplied.
    NegativeValueError
        If any observation is negative (reports original position and value).
    ValueError
        If any observation is NaN or infinite.
    """
    arr = check_lifetimes(raw)
    if arr.size == 0:
        raise EmptySampleError("need at least one observation")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise ValueError(f"non-finite value {arr[bad]!r} at position {bad}")
    negative = np.flatnonzero(arr < 0)
    if negative.size:
        idx = int(negative[0])
        raise NegativeValueError(idx, float(arr[idx]))
    ordered = np.sort(arr)
    ordered.flags.writeable = False
    return Sample(ordered)


def as_sample(data) -> Sample:
    """Pass a :class:`Sample` through, or validate anything else into one."""
    if isinstance(data, Sample):
        return data
    return sort_validate(data)


def check_order(s, n) -> int:
    """Validate the subset order ``1 <= s <= n`` and return it as an int."""
    if not float(s).is_integer():
        raise OrderOutOfRangeError(f"order s must be an integer, got {s!r}")
    s = int(s)
    if s < 1 or s > n:
        raise OrderOutOfRangeError(f"order s={s} outside [1, {n}] for sample size {n}")
    return s


def check_probability(u, name="u"):
    """Validate that all entries of ``u`` lie strictly inside (0, 1)."""
    arr = np.asarray(u, dtype=float)
    if arr.size == 0 or np.any(~np.isfinite(arr)) or np.any(arr <= 0) or np.any(arr >= 1):
        raise InvalidProbabilityError(f"{name} must lie strictly in (0, 1)")
    return arr
