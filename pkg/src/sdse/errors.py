"""Exception hierarchy.

Validation problems (bad shapes, bad input files, unsupported job
combinations) derive from :class:`ValidationError`; numerical failures
(singular Stein operators, repeated eigenvalues where a simple spectrum is
required, uncontrollable pairs) derive from :class:`NumericalError`.  The CLI
maps the two families onto different exit codes.
"""


class SDSEError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(SDSEError, ValueError):
    pass


class DimensionError(ValidationError):
    pass


class CapacityError(ValidationError):
    """Problem size exceeds a hard cap of the requested algorithm."""


class ScopeError(ValidationError):
    """Request falls outside what the decomposition is defined for."""


class NumericalError(SDSEError, ArithmeticError):
    pass


class SolvabilityError(NumericalError):
    """The Stein operator is (numerically) singular: lambda_i * conj(lambda_j) ~ 1."""

    def __init__(self, message, pair=None, magnitude=None):
        super().__init__(message)
        self.pair = pair
        self.magnitude = magnitude


class MultipleSpectrumError(NumericalError):
    """A simple spectrum was required but eigenvalues coincide."""


class SpectralError(NumericalError):
    """Declared multiplicities are inconsistent with the matrix."""


class SingularityError(NumericalError):
    pass


class ControllabilityError(NumericalError):
    def __init__(self, message, rank=None):
        super().__init__(message)
        self.rank = rank


class IllConditionedError(NumericalError):
    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class HorizonError(NumericalError):
    """Finite-horizon Gramian (or its normalization matrix) is not invertible."""


class ConditioningWarning(UserWarning):
    pass
