"""Test of exponentiality against residual-dispersion decay.

The departure functional ``(s+1) E(min of s+1 copies) - s E(min of s
copies)`` is zero for exponential lifetimes and positive whenever the
residual survival-power functional decreases with age.  Its plug-in
U-statistic, divided by the sample mean for scale invariance and
standardized by the known null variance ``s/(4 s^2 - 1)``, is compared
against standard normal quantiles.
"""

import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .estimation import _prefix_mean, cregf_estimate, empirical_survival
from .exceptions import (
    DegenerateSampleWarning,
    InvalidParameterError,
    OrderOutOfRangeError,
    ZeroMeanError,
)
from .validation import as_sample, sort_validate

__all__ = [
    "TestReport",
    "delta_hat",
    "delta_star",
    "test_statistic",
    "run_test",
    "alt_variance_plugin",
    "null_variance",
    "ExponentialityTest",
]

TWO_SIDED = "two-sided"
GREATER = "greater"
_SQRT2 = math.sqrt(2.0)


def normal_sf(x) -> float:
    """P(Z > x) for standard normal Z via the complementary error function.

    ``erfc`` from the C math library is accurate to a few ulp, far inside
    the 1e-12 absolute error this module requires of p-values.
    """
    return 0.5 * math.erfc(x / _SQRT2)


def null_variance(s) -> float:
    """Asymptotic variance s/(4s^2 - 1) of sqrt(n) times the scaled departure
    under exponentiality."""
    s = int(s)
    return s / (4.0 * s * s - 1.0)


@dataclass(frozen=True)
class TestReport:
    """Everything produced by one run of the exponentiality test."""

    s: int
    n: int
    delta_hat: float
    delta_star: float
    statistic: float
    p_value: float
    alpha: float
    alternative: str
    reject: bool
    alt_se: float | None = None
    degenerate: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


def _check_alternative(alternative):
    if alternative not in (TWO_SIDED, GREATER):
        raise InvalidParameterError(
            f"alternative must be {TWO_SIDED!r} or {GREATER!r}, got {alternative!r}"
        )
    return alternative


def delta_hat(data, s) -> float:
    """Departure estimate (s+1)*C_{s+1} - s*C_s from the sample.

    By linearity this equals the U-statistic of the symmetric
    subset-minimum contrast kernel of order s+1.
    """
    sample = as_sample(data)
    s = int(s)
    if s < 1 or sample.n < s + 1:
        raise OrderOutOfRangeError(
            f"departure estimate needs 1 <= s <= n-1; got s={s}, n={sample.n}"
        )
    c_s = cregf_estimate(sample, s).value
    c_s1 = cregf_estimate(sample, s + 1).value
    return (s + 1) * c_s1 - s * c_s


def delta_star(data, s) -> float:
    """Scale-invariant departure: the departure estimate over the sample mean."""
    sample = as_sample(data)
    mean = sample.mean()
    if mean <= 0.0:
        raise ZeroMeanError("sample mean is zero; scale-free departure undefined")
    return delta_hat(sample, s) / mean


def _standardization_factor(n, s) -> float:
    return math.sqrt(n * (4.0 * s * s - 1.0) / s)


def test_statistic(data, s, alternative=TWO_SIDED) -> float:
    """Standardized statistic sqrt(n (4s^2-1)/s) * |delta*| (or signed)."""
    _check_alternative(alternative)
    sample = as_sample(data)
    ds = delta_star(sample, s)
    if sample.values[0] == sample.values[-1]:
        warnings.warn(
            "all observations equal; the statistic is degenerate",
            DegenerateSampleWarning,
        )
    factor = _standardization_factor(sample.n, int(s))
    return factor * (abs(ds) if alternative == TWO_SIDED else ds)


def run_test(data, s=1, alpha=0.05, alternative=TWO_SIDED, with_alt_se=False) -> TestReport:
    """Run the full exponentiality test and assemble a report.

    The default sided-ness compares the absolute scaled departure against
    the upper alpha/2 normal quantile; ``alternative='greater'`` uses the
    signed statistic against the upper alpha quantile.
    """
    _check_alternative(alternative)
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise InvalidParameterError(f"alpha must lie in (0, 1), got {alpha}")
    sample = as_sample(data)
    s = int(s)
    dh = delta_hat(sample, s)
    ds = delta_star(sample, s)
    degenerate = bool(sample.values[0] == sample.values[-1])
    factor = _standardization_factor(sample.n, s)
    stat = factor * (abs(ds) if alternative == TWO_SIDED else ds)
    if alternative == TWO_SIDED:
        p = 2.0 * normal_sf(abs(ds) * factor)
    else:
        p = normal_sf(stat)
    p = min(p, 1.0)
    alt_se = alt_variance_plugin(sample, s) if with_alt_se else None
    if degenerate:
        warnings.warn(
            "all observations equal; report flagged degenerate",
            DegenerateSampleWarning,
        )
    return TestReport(
        s=s,
        n=sample.n,
        delta_hat=dh,
        delta_star=ds,
        statistic=stat,
        p_value=p,
        alpha=alpha,
        alternative=alternative,
        reject=bool(p < alpha),
        alt_se=alt_se,
        degenerate=degenerate,
    )


def alt_variance_plugin(data, s) -> float:
    """Estimated asymptotic standard deviation of sqrt(n) times the departure.

    Plug-in of the influence function of the contrast kernel under the
    empirical survival function (strictly-greater convention); returned
    as (s+1) * sd(psi).  Diagnostic only; the decision rule always uses
    the null variance.
    """
    sample = as_sample(data)
    s = int(s)
    if s < 1 or sample.n < s + 2:
        raise OrderOutOfRangeError(
            f"variance plug-in needs 1 <= s <= n-2; got s={s}, n={sample.n}"
        )
    x = sample.values
    n = sample.n
    if x[0] == x[-1]:
        warnings.warn(
            "all observations equal; plug-in variance is 0", DegenerateSampleWarning
        )
        return 0.0
    count_le, fbar = empirical_survival(x)
    psi = (s + 1.0) * x * np.power(fbar, s)
    psi += s * (s + 1.0) * _prefix_mean(x, np.power(fbar, s - 1), count_le)
    psi -= (s * s / (s + 1.0)) * x * np.power(fbar, s - 1)
    if s > 1:
        psi -= ((s - 1.0) * s * s / (s + 1.0)) * _prefix_mean(
            x, np.power(fbar, s - 2), count_le
        )
    return (s + 1.0) * float(np.std(psi, ddof=1))


class ExponentialityTest(BaseEstimator):
    """Scikit-learn style wrapper around the exponentiality test.

    Parameters
    ----------
    s : int
        Order of the departure contrast; ``s = 1`` tests for decreasing
        mean residual life.
    alpha : float
        Significance level.
    alternative : str
        ``"two-sided"`` (default) or ``"greater"``.

    Attributes (after ``fit``)
    --------------------------
    statistic_, p_value_, reject_, delta_, delta_star_, report_
    """

    def __init__(self, s=1, alpha=0.05, alternative=TWO_SIDED):
        self.s = s
        self.alpha = alpha
        self.alternative = alternative

    def fit(self, X, y=None):
        sample = sort_validate(X)
        report = run_test(sample, s=self.s, alpha=self.alpha, alternative=self.alternative)
        self.report_ = report
        self.statistic_ = report.statistic
        self.p_value_ = report.p_value
        self.reject_ = report.reject
        self.delta_ = report.delta_hat
        self.delta_star_ = report.delta_star
        self.n_ = report.n
        return self
