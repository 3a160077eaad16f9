"""Parametric lifetime models.

Every family exposes the survival function, hazard rate, mean, quantile
function and seeded inverse-transform sampling.  Families with a known
expression also provide closed forms for the survival-power integrals
used by :mod:`cregf.analytic`.

Parameter conventions (first to last positional parameter):

================  =======================================================
``exp:rate``      survival ``exp(-rate*x)``
``uniform:a``     survival ``1 - x/a`` on ``[0, a]``
``gpd:a,b``       survival ``(1 + a*x/b)**-(1 + 1/a)``; ``a > -1``,
                  ``a != 0`` (the ``a -> 0`` limit is ``exp:1/b``),
                  ``b > 0``; support ``[0, -b/a]`` when ``a < 0``
``pareto1:k,alpha``  survival ``(k/x)**alpha`` on ``[k, inf)``
``pareto2:a,b``   survival ``(1 + x/a)**-b``
``gamma:shape,rate``     regularized upper incomplete gamma survival
``weibull:shape,scale``  survival ``exp(-(x/scale)**shape)``
``lognormal:mu,sigma``   log-mean and log-standard-deviation
``makeham:a,b``   hazard ``a + b*(1 - exp(-t))``
``lfr:theta``     hazard ``1 + theta*t``
================  =======================================================

Models are immutable after construction and safe to share across
threads.  Sampling takes an explicit seed and owns its generator state.
"""

import inspect
import math

import numpy as np
from scipy import integrate, special

from .exceptions import (
    InvalidParameterError,
    NonFiniteMeanError,
    OutsideSupportError,
)
from .validation import Sample, check_probability, sort_validate

__all__ = [
    "LifetimeModel",
    "Exponential",
    "Uniform",
    "GPD",
    "ParetoI",
    "ParetoII",
    "Gamma",
    "Weibull",
    "Lognormal",
    "Makeham",
    "LFR",
    "make_model",
    "parse_model",
    "FAMILIES",
]

_BISECT_ITERATIONS = 200


def _as_float_array(x):
    return np.asarray(x, dtype=float)


def _scalar_or_array(out, scalar_input):
    if scalar_input:
        return float(out)
    return out


class LifetimeModel:
    """Base class: shared quantile bisection, sampling and bookkeeping."""

    family = "abstract"
    support_lower = 0.0
    support_upper = math.inf

    # -- core functions -------------------------------------------------

    def _sf(self, x):
        raise NotImplementedError

    def _hazard(self, x):
        raise NotImplementedError

    def survival(self, x):
        """P(X > x); equals 1 for x at or below the lower support bound."""
        arr = _as_float_array(x)
        return _scalar_or_array(self._sf(arr), arr.ndim == 0)

    def cdf(self, x):
        arr = _as_float_array(x)
        return _scalar_or_array(1.0 - self._sf(arr), arr.ndim == 0)

    def hazard(self, x):
        """Instantaneous failure rate f(x)/P(X > x) on the interior of the support."""
        arr = _as_float_array(x)
        if np.any(arr < self.support_lower) or np.any(self._sf(arr) <= 0.0):
            raise OutsideSupportError(
                f"hazard of {self.family} defined on [{self.support_lower}, "
                f"{self.support_upper}) only"
            )
        return _scalar_or_array(self._hazard(arr), arr.ndim == 0)

    def mean(self):
        """E(X).  Numeric fallback integrates the survival function."""
        value, _ = integrate.quad(
            lambda x: float(self._sf(np.asarray(x))),
            self.support_lower,
            self.support_upper,
            epsabs=1e-12,
            epsrel=1e-12,
            limit=200,
        )
        # survival is identically 1 below the lower support bound
        return self.support_lower + value

    # -- quantiles and sampling -----------------------------------------

    def _ppf(self, u):
        """Inverse CDF for u in [0, 1).  Default: vectorized bisection."""
        return self._bisect_ppf(u)

    def _bisect_ppf(self, u):
        lo = np.full_like(u, self.support_lower)
        if math.isfinite(self.support_upper):
            hi = np.full_like(u, self.support_upper)
        else:
            top = max(self.support_lower, 0.0) + 1.0
            u_max = float(u.max())
            while 1.0 - float(self._sf(np.asarray(top))) <= u_max:
                top *= 2.0
            hi = np.full_like(u, top)
        for _ in range(_BISECT_ITERATIONS):
            mid = 0.5 * (lo + hi)
            below = (1.0 - self._sf(mid)) < u
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
            if float(np.max(hi - lo)) <= 1e-14 * max(1.0, float(np.max(hi))):
                break
        return 0.5 * (lo + hi)

    def quantile(self, u):
        """Smallest q with CDF(q) = u, for u strictly inside (0, 1)."""
        arr = check_probability(np.asarray(u, dtype=float), name="u")
        return _scalar_or_array(self._ppf(arr), np.asarray(u).ndim == 0)

    def draw(self, n, rng) -> np.ndarray:
        """n inverse-transform draws from an existing generator (unsorted)."""
        return self._ppf(rng.random(int(n)))

    def sample(self, n, seed) -> Sample:
        """n i.i.d. draws via inverse transform on a seeded uniform stream.

        The same seed always yields a bit-identical sample.
        """
        n = int(n)
        if n < 1:
            raise InvalidParameterError("sample size must be >= 1")
        rng = np.random.default_rng(seed)
        return sort_validate(self.draw(n, rng))

    # -- hooks for the analytic layer ------------------------------------

    def tail_power(self, s):
        """Polynomial decay exponent of survival**s, inf if super-polynomial."""
        return math.inf

    def cregf_convergent(self, s) -> bool:
        return math.isfinite(self.support_upper) or self.tail_power(s) > 1.0

    def tail_integral(self, s, T):
        """Exact integral of survival**s over [T, inf) for polynomial tails."""
        raise NotImplementedError

    # -- plumbing ---------------------------------------------------------

    def spec_string(self) -> str:
        return f"{self.family}:{','.join(repr(float(p)) for p in self.params)}"

    def __repr__(self):
        args = ", ".join(f"{p:g}" for p in self.params)
        return f"{type(self).__name__}({args})"

    def __eq__(self, other):
        return type(self) is type(other) and self.params == other.params

    def __hash__(self):
        return hash((type(self).__name__, self.params))


def _require(condition, message):
    if not condition:
        raise InvalidParameterError(message)


class Exponential(LifetimeModel):
    family = "exp"

    def __init__(self, rate):
        _require(rate > 0, "exp: rate must be > 0")
        self.rate = float(rate)
        self.params = (self.rate,)

    def _sf(self, x):
        return np.where(x <= 0, 1.0, np.exp(-self.rate * np.maximum(x, 0.0)))

    def _hazard(self, x):
        return np.full_like(x, self.rate)

    def mean(self):
        return 1.0 / self.rate

    def _ppf(self, u):
        return -np.log1p(-u) / self.rate

    def cregf_closed(self, s):
        return 1.0 / (self.rate * s)

    def dcregf_closed(self, s, t):
        return 1.0 / (self.rate * s)


class Uniform(LifetimeModel):
    family = "uniform"

    def __init__(self, a):
        _require(a > 0, "uniform: a must be > 0")
        self.a = float(a)
        self.params = (self.a,)
        self.support_upper = self.a

    def _sf(self, x):
        return np.clip(1.0 - x / self.a, 0.0, 1.0)

    def _hazard(self, x):
        return 1.0 / (self.a - x)

    def mean(self):
        return self.a / 2.0

    def _ppf(self, u):
        return self.a * u

    def cregf_closed(self, s):
        return self.a / (s + 1.0)


class GPD(LifetimeModel):
    """Generalized Pareto; the unique family with survival-power integrals
    affine in the conditioning age."""

    family = "gpd"

    def __init__(self, a, b):
        _require(a > -1, "gpd: require a > -1")
        _require(a != 0, "gpd: a = 0 degenerates to exp:1/b; use exp instead")
        _require(b > 0, "gpd: require b > 0")
        self.a = float(a)
        self.b = float(b)
        self.params = (self.a, self.b)
        if self.a < 0:
            self.support_upper = -self.b / self.a

    def _sf(self, x):
        z = 1.0 + self.a * np.maximum(x, 0.0) / self.b
        out = np.where(z > 0, np.maximum(z, 1e-300) ** (-(1.0 + 1.0 / self.a)), 0.0)
        return np.where(x <= 0, 1.0, out)

    def _hazard(self, x):
        return (self.a + 1.0) / (self.b + self.a * x)

    def mean(self):
        return self.b

    def _ppf(self, u):
        expo = -self.a / (self.a + 1.0)
        return (self.b / self.a) * ((1.0 - u) ** expo - 1.0)

    def _denominator(self, s):
        return (self.a + 1.0) * s - self.a

    def cregf_closed(self, s):
        from .exceptions import DivergentIntegralError

        if self._denominator(s) <= 0:
            raise DivergentIntegralError(
                f"gpd survival**s integrable only for s > a/(a+1); got s={s}"
            )
        return self.b / self._denominator(s)

    def dcregf_closed(self, s, t):
        from .exceptions import DivergentIntegralError

        if self._denominator(s) <= 0:
            raise DivergentIntegralError(
                f"gpd residual survival**s integrable only for s > a/(a+1)"
            )
        return (self.b + self.a * t) / self._denominator(s)

    def tail_power(self, s):
        if self.a < 0:
            return math.inf
        return s * (self.a + 1.0) / self.a

    def tail_integral(self, s, T):
        p = s * (1.0 + 1.0 / self.a)
        return (self.b / self.a) * (1.0 + self.a * T / self.b) ** (1.0 - p) / (p - 1.0)


class ParetoI(LifetimeModel):
    family = "pareto1"

    def __init__(self, k, alpha):
        _require(k > 0, "pareto1: require k > 0")
        _require(alpha > 0, "pareto1: require alpha > 0")
        self.k = float(k)
        self.alpha = float(alpha)
        self.params = (self.k, self.alpha)
        self.support_lower = self.k

    def _sf(self, x):
        return np.where(x <= self.k, 1.0, (self.k / np.maximum(x, self.k)) ** self.alpha)

    def _hazard(self, x):
        return self.alpha / x

    def hazard(self, x):
        arr = _as_float_array(x)
        # density is zero on [0, k]; only the open interval (k, inf) is interior
        if np.any(arr <= self.k):
            raise OutsideSupportError(f"pareto1 hazard defined on ({self.k}, inf) only")
        return _scalar_or_array(self._hazard(arr), arr.ndim == 0)

    def mean(self):
        if self.alpha <= 1:
            raise NonFiniteMeanError(f"pareto1 mean infinite for alpha={self.alpha} <= 1")
        return self.k * self.alpha / (self.alpha - 1.0)

    def _ppf(self, u):
        return self.k * (1.0 - u) ** (-1.0 / self.alpha)

    def cregf_closed(self, s):
        # integral of survival**s over [0, inf): k (survival is 1 below k)
        # plus k/(alpha*s - 1) from the power tail
        from .exceptions import DivergentIntegralError

        if self.alpha * s <= 1:
            raise DivergentIntegralError(
                f"pareto1 survival**s integrable only for alpha*s > 1; got {self.alpha * s}"
            )
        return self.k * self.alpha * s / (self.alpha * s - 1.0)

    def tail_power(self, s):
        return self.alpha * s

    def tail_integral(self, s, T):
        p = self.alpha * s
        T = max(T, self.k)
        return self.k**p * T ** (1.0 - p) / (p - 1.0)


class ParetoII(LifetimeModel):
    family = "pareto2"

    def __init__(self, a, b):
        _require(a > 0, "pareto2: require a > 0")
        _require(b > 0, "pareto2: require b > 0")
        self.a = float(a)
        self.b = float(b)
        self.params = (self.a, self.b)

    def _sf(self, x):
        return np.where(x <= 0, 1.0, (1.0 + np.maximum(x, 0.0) / self.a) ** (-self.b))

    def _hazard(self, x):
        return self.b / (self.a + x)

    def mean(self):
        if self.b <= 1:
            raise NonFiniteMeanError(f"pareto2 mean infinite for b={self.b} <= 1")
        return self.a / (self.b - 1.0)

    def _ppf(self, u):
        return self.a * ((1.0 - u) ** (-1.0 / self.b) - 1.0)

    def cregf_closed(self, s):
        from .exceptions import DivergentIntegralError

        if self.b * s <= 1:
            raise DivergentIntegralError(
                f"pareto2 survival**s integrable only for b*s > 1; got {self.b * s}"
            )
        return self.a / (self.b * s - 1.0)

    def tail_power(self, s):
        return self.b * s

    def tail_integral(self, s, T):
        p = self.b * s
        return self.a * (1.0 + T / self.a) ** (1.0 - p) / (p - 1.0)


class Gamma(LifetimeModel):
    family = "gamma"

    def __init__(self, shape, rate):
        _require(shape > 0, "gamma: require shape > 0")
        _require(rate > 0, "gamma: require rate > 0")
        self.shape = float(shape)
        self.rate = float(rate)
        self.params = (self.shape, self.rate)

    def _sf(self, x):
        return np.where(x <= 0, 1.0, special.gammaincc(self.shape, self.rate * np.maximum(x, 0.0)))

    def _logpdf(self, x):
        return (
            self.shape * math.log(self.rate)
            + (self.shape - 1.0) * np.log(x)
            - self.rate * x
            - math.lgamma(self.shape)
        )

    def _hazard(self, x):
        return np.exp(self._logpdf(x)) / self._sf(x)

    def hazard(self, x):
        arr = _as_float_array(x)
        if np.any(arr <= 0):
            raise OutsideSupportError("gamma hazard defined on (0, inf) only")
        return _scalar_or_array(self._hazard(arr), arr.ndim == 0)

    def mean(self):
        return self.shape / self.rate

    def _ppf(self, u):
        return special.gammainccinv(self.shape, 1.0 - u) / self.rate


class Weibull(LifetimeModel):
    family = "weibull"

    def __init__(self, shape, scale):
        _require(shape > 0, "weibull: require shape > 0")
        _require(scale > 0, "weibull: require scale > 0")
        self.shape = float(shape)
        self.scale = float(scale)
        self.params = (self.shape, self.scale)

    def _sf(self, x):
        return np.where(x <= 0, 1.0, np.exp(-((np.maximum(x, 0.0) / self.scale) ** self.shape)))

    def _hazard(self, x):
        return (self.shape / self.scale) * (x / self.scale) ** (self.shape - 1.0)

    def hazard(self, x):
        arr = _as_float_array(x)
        if np.any(arr < 0) or (self.shape < 1.0 and np.any(arr == 0)):
            raise OutsideSupportError("weibull hazard undefined there")
        return _scalar_or_array(self._hazard(arr), arr.ndim == 0)

    def mean(self):
        return self.scale * math.gamma(1.0 + 1.0 / self.shape)

    def _ppf(self, u):
        return self.scale * (-np.log1p(-u)) ** (1.0 / self.shape)


class Lognormal(LifetimeModel):
    family = "lognormal"

    def __init__(self, mu, sigma):
        _require(sigma > 0, "lognormal: require sigma > 0")
        self.mu = float(mu)
        self.sigma = float(sigma)
        self.params = (self.mu, self.sigma)

    def _sf(self, x):
        with np.errstate(divide="ignore"):
            z = (np.log(np.maximum(x, 1e-300)) - self.mu) / self.sigma
        return np.where(x <= 0, 1.0, special.ndtr(-z))

    def _hazard(self, x):
        z = (np.log(x) - self.mu) / self.sigma
        pdf = np.exp(-0.5 * z * z) / (x * self.sigma * math.sqrt(2.0 * math.pi))
        return pdf / special.ndtr(-z)

    def hazard(self, x):
        arr = _as_float_array(x)
        if np.any(arr <= 0):
            raise OutsideSupportError("lognormal hazard defined on (0, inf) only")
        return _scalar_or_array(self._hazard(arr), arr.ndim == 0)

    def mean(self):
        return math.exp(self.mu + 0.5 * self.sigma**2)

    def _ppf(self, u):
        return np.exp(self.mu + self.sigma * special.ndtri(u))


class Makeham(LifetimeModel):
    """Hazard a + b*(1 - exp(-t)): increasing from a to a + b."""

    family = "makeham"

    def __init__(self, a, b):
        _require(a > 0, "makeham: require a > 0")
        _require(b > 0, "makeham: require b > 0")
        self.a = float(a)
        self.b = float(b)
        self.params = (self.a, self.b)

    def _sf(self, x):
        t = np.maximum(x, 0.0)
        return np.where(x <= 0, 1.0, np.exp(-self.a * t - self.b * (t + np.expm1(-t))))

    def _hazard(self, x):
        return self.a - self.b * np.expm1(-x)


class LFR(LifetimeModel):
    """Linear failure rate: hazard 1 + theta*t."""

    family = "lfr"

    def __init__(self, theta):
        _require(theta > 0, "lfr: require theta > 0")
        self.theta = float(theta)
        self.params = (self.theta,)

    def _sf(self, x):
        t = np.maximum(x, 0.0)
        return np.where(x <= 0, 1.0, np.exp(-t - 0.5 * self.theta * t * t))

    def _hazard(self, x):
        return 1.0 + self.theta * x

    def _ppf(self, u):
        # solve t + theta*t^2/2 = -log(1-u); stable positive quadratic root
        v = -np.log1p(-u)
        return 2.0 * v / (1.0 + np.sqrt(1.0 + 2.0 * self.theta * v))


FAMILIES = {
    "exp": Exponential,
    "exponential": Exponential,
    "uniform": Uniform,
    "gpd": GPD,
    "pareto1": ParetoI,
    "pareto2": ParetoII,
    "gamma": Gamma,
    "weibull": Weibull,
    "lognormal": Lognormal,
    "makeham": Makeham,
    "lfr": LFR,
}


def make_model(family, params) -> LifetimeModel:
    """Construct a model from a family name and a parameter list."""
    key = str(family).strip().lower()
    if key not in FAMILIES:
        known = ", ".join(sorted(set(FAMILIES) - {"exponential"}))
        raise InvalidParameterError(f"unknown family {family!r}; known: {known}")
    cls = FAMILIES[key]
    try:
        params = [float(p) for p in params]
    except (TypeError, ValueError) as exc:
        raise InvalidParameterError(f"non-numeric parameter for {key}: {params!r}") from exc
    arity = len(inspect.signature(cls.__init__).parameters) - 1
    if len(params) != arity:
        raise InvalidParameterError(
            f"{key} takes {arity} parameter(s), got {len(params)}"
        )
    return cls(*params)


def parse_model(spec: str) -> LifetimeModel:
    """Parse a compact spec string such as ``exp:1`` or ``gamma:2,1``."""
    text = str(spec).strip()
    if ":" not in text:
        raise InvalidParameterError(
            f"model spec {spec!r} must look like 'family:p1,p2,...'"
        )
    family, _, tail = text.partition(":")
    try:
        params = [float(tok) for tok in tail.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise InvalidParameterError(f"bad parameter in model spec {spec!r}") from exc
    return make_model(family, params)
