"""Exception hierarchy shared by the library and the command-line front end."""


class DudecapError(Exception):
    """Base class for all errors raised by dudecap."""


class ConfigError(DudecapError, ValueError):
    """Malformed or inconsistent configuration (unknown key, bad value)."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class DegenerateConditioningError(DudecapError, ValueError):
    """Conditioning on small-cell association when P(SC) = 0."""


class ApproximationDomainError(DudecapError, ValueError):
    """The saturated-integral approximation was requested outside its domain."""

    def __init__(self, message, saturation_arg):
        super().__init__(message)
        self.saturation_arg = saturation_arg


class InvalidPolicyError(DudecapError, ValueError):
    """The association policy is not meaningful for the requested operation."""


class UnreachableTargetError(DudecapError):
    """The target rate is not met anywhere in the density bracket."""

    def __init__(self, message, bound_at_upper):
        super().__init__(message)
        self.bound_at_upper = bound_at_upper


class NonMonotoneError(DudecapError):
    """The bound decreases somewhere on the density bracket pre-scan grid."""

    def __init__(self, message, pair):
        super().__init__(message)
        self.pair = pair


class SamplingInconsistencyError(DudecapError):
    """The two Monte Carlo sampling modes disagree beyond statistical noise."""
