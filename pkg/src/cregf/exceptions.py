"""Exception and warning types shared across the package."""


class CregfError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(CregfError, ValueError):
    """A family received a malformed or out-of-range parameter vector."""


class InvalidProbabilityError(CregfError, ValueError):
    """A probability argument lies outside the open interval (0, 1)."""


class OutsideSupportError(CregfError, ValueError):
    """A pointwise evaluation was requested outside the distribution support."""


class NonFiniteMeanError(CregfError, ArithmeticError):
    """The distribution mean does not exist for the given parameters."""


class NoClosedFormError(CregfError, ValueError):
    """The family has no closed-form expression for the requested quantity."""


class DivergentIntegralError(CregfError, ArithmeticError):
    """The requested survival-power integral does not converge."""


class ZeroSurvivalError(CregfError, ValueError):
    """The conditioning age carries zero survival probability."""


class EmptySampleError(CregfError, ValueError):
    """An empty data vector was supplied."""


class NegativeValueError(CregfError, ValueError):
    """A lifetime observation was negative; lifetimes must be >= 0."""

    def __init__(self, index, value):
        super().__init__(f"negative value {value!r} at position {index}")
        self.index = index
        self.value = value


class OrderOutOfRangeError(CregfError, ValueError):
    """The subset order s is outside the valid range for the sample."""


class TooManySubsetsError(CregfError, ValueError):
    """Brute-force enumeration would exceed the subset budget."""


class InsufficientSurvivorsError(CregfError, ValueError):
    """Fewer than s observations strictly exceed the conditioning age."""

    def __init__(self, survivors, s, t):
        super().__init__(
            f"only {survivors} observation(s) exceed t={t!r}, need at least {s}"
        )
        self.survivors = survivors
        self.s = s
        self.t = t


class ZeroMeanError(CregfError, ValueError):
    """The sample mean is zero, so scale-free statistics are undefined."""


class DegenerateSampleWarning(UserWarning):
    """All observations are equal; variance-based quantities collapse to zero."""
