"""U-statistic estimation of survival-power functionals from lifetime data.

The target functional of order ``s`` equals the expected minimum of ``s``
independent copies, so its unbiased U-statistic averages the minimum over
every size-``s`` subset of the sample.  Written through the order
statistics the estimator is a fixed weighted sum, computed here without
enumerating subsets; a brute-force enumerator is kept as a reference
oracle.
"""

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .exceptions import (
    DegenerateSampleWarning,
    InsufficientSurvivorsError,
    OrderOutOfRangeError,
    TooManySubsetsError,
)
from .validation import Sample, as_sample, check_order, sort_validate

__all__ = [
    "CregfEstimate",
    "ustat_weights",
    "cregf_estimate",
    "cregf_bruteforce",
    "cregf_stderr",
    "dcregf_estimate",
    "CregfEstimator",
]

_SUBSET_BUDGET = 10_000_000


@dataclass(frozen=True)
class CregfEstimate:
    """Point estimate of the order-``s`` functional with optional plug-in SE.

    ``n`` is the size of the sample actually used; for residual (dynamic)
    estimates that is the number of survivors past ``t`` and the standard
    error, when present, is based on that count.
    """

    value: float
    s: int
    n: int
    std_error: float | None = None
    t: float = 0.0


def ustat_weights(n, s) -> np.ndarray:
    """Order-statistic weights C(n-i, s-1)/C(n, s) for i = 1..n.

    Computed by a multiplicative recurrence (no large binomials): the
    first weight is s/n and successive ratios are (n-i-s+1)/(n-i).
    Weights are non-negative, non-increasing, sum to one, and vanish for
    i > n-s+1.
    """
    n = int(n)
    if n < 1:
        raise OrderOutOfRangeError(f"sample size must be >= 1, got {n}")
    s = check_order(s, n)
    if n == 1:
        return np.ones(1)
    i = np.arange(1, n, dtype=float)
    ratios = np.maximum(n - i - s + 1.0, 0.0) / (n - i)
    w = np.empty(n)
    w[0] = s / n
    w[1:] = w[0] * np.cumprod(ratios)
    return w


def cregf_estimate(data, s, want_se=False) -> CregfEstimate:
    """Weighted-order-statistic estimate of the order-``s`` functional.

    ``s = 1`` gives the sample mean.  When ``want_se`` is set and
    ``n > s``, the plug-in standard error from the asymptotic variance of
    the U-statistic is attached.
    """
    sample = as_sample(data)
    s = check_order(s, sample.n)
    w = ustat_weights(sample.n, s)
    value = float(w @ sample.values)
    se = None
    if want_se and sample.n > s:
        se = cregf_stderr(sample, s)
    return CregfEstimate(value=value, s=s, n=sample.n, std_error=se)


def cregf_bruteforce(data, s) -> float:
    """Mean subset minimum by explicit enumeration.  Reference oracle only."""
    sample = as_sample(data)
    s = check_order(s, sample.n)
    n_subsets = math.comb(sample.n, s)
    if n_subsets > _SUBSET_BUDGET:
        raise TooManySubsetsError(
            f"C({sample.n}, {s}) = {n_subsets} subsets exceeds budget {_SUBSET_BUDGET}"
        )
    values = sample.values.tolist()
    total = sum(min(combo) for combo in itertools.combinations(values, s))
    return total / n_subsets


def empirical_survival(values) -> tuple[np.ndarray, np.ndarray]:
    """Counts <= x_i and Fbar_n(x_i) under the strictly-greater convention.

    ``Fbar_n(x) = #{j : x_j > x}/n``, so the largest observation gets 0;
    note 0**0 == 1 keeps exponent-zero powers exact under ties.
    """
    n = values.size
    count_le = np.searchsorted(values, values, side="right")
    return count_le, (n - count_le) / n


def _prefix_mean(values, weights_per_obs, count_le):
    """(1/n) * sum over {j : x_j <= x_i} of x_j * weight_j, per i."""
    prefix = np.cumsum(values * weights_per_obs)
    return prefix[count_le - 1] / values.size


def cregf_stderr(data, s) -> float:
    """Plug-in standard error s * sd(psi)/sqrt(n) of the order-``s`` estimate.

    ``psi`` is the estimated conditional-expectation (influence) function
    of the subset-minimum kernel, evaluated with the empirical survival
    function under the strictly-greater convention.  Requires ``n > s``.
    A degenerate all-equal sample yields 0 with a warning.
    """
    sample = as_sample(data)
    s = check_order(s, sample.n)
    n = sample.n
    if n <= s:
        raise OrderOutOfRangeError(f"standard error needs n > s; got n={n}, s={s}")
    x = sample.values
    if x[0] == x[-1]:
        warnings.warn(
            "all observations equal; standard error is 0", DegenerateSampleWarning
        )
        return 0.0
    if s == 1:
        psi = x
    else:
        count_le, fbar = empirical_survival(x)
        psi = x * np.power(fbar, s - 1)
        psi = psi + (s - 1) * _prefix_mean(x, np.power(fbar, s - 2), count_le)
    return s * float(np.std(psi, ddof=1)) / math.sqrt(n)


def dcregf_estimate(data, s, t, want_se=False) -> CregfEstimate:
    """Estimate of the functional for the residual lifetime past age ``t``.

    Applies the static estimator to the residual sample
    ``{x_i - t : x_i > t}``; at ``t = 0`` this is exactly the static
    estimate on the full sample.
    """
    sample = as_sample(data)
    t = float(t)
    if t < 0:
        raise ValueError(f"age t must be >= 0, got {t}")
    if t == 0.0:
        residual = sample
    else:
        surviving = sample.values[sample.values > t] - t
        if surviving.size < max(int(s), 1):
            raise InsufficientSurvivorsError(surviving.size, int(s), t)
        residual = sort_validate(surviving)
    est = cregf_estimate(residual, s, want_se=want_se)
    return CregfEstimate(value=est.value, s=est.s, n=est.n, std_error=est.std_error, t=t)


class CregfEstimator(BaseEstimator):
    """Scikit-learn style wrapper around the order-``s`` functional estimate.

    Parameters
    ----------
    s : int
        Subset order; 1 estimates the mean residual value at ``t``.
    t : float or None
        Conditioning age.  ``None`` (default) estimates the static
        functional on the full sample.
    compute_se : bool
        Attach the plug-in standard error when possible.

    Attributes (after ``fit``)
    --------------------------
    value_, std_error_, n_, estimate_
    """

    def __init__(self, s=1, t=None, compute_se=False):
        self.s = s
        self.t = t
        self.compute_se = compute_se

    def fit(self, X, y=None):
        sample = sort_validate(X)
        if self.t is None:
            est = cregf_estimate(sample, self.s, want_se=self.compute_se)
        else:
            est = dcregf_estimate(sample, self.s, self.t, want_se=self.compute_se)
        self.estimate_ = est
        self.value_ = est.value
        self.std_error_ = est.std_error
        self.n_ = est.n
        return self
