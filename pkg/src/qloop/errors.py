"""Exception hierarchy shared by all qloop modules."""


class QloopError(Exception):
    """Base class for every error raised by qloop."""


class DimensionError(QloopError, ValueError):
    """Shapes or partitions do not fit together."""


class ValidationError(QloopError, ValueError):
    """An input violates a stated hypothesis (unitarity, unit modulus, ...)."""


class SingularityError(QloopError, ArithmeticError):
    """A resolvent or closed-form denominator is (numerically) singular.

    ``value`` carries the offending quantity, e.g. the smallest singular
    value of ``1 - U11 W11`` or the modulus of a scalar denominator.
    """

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class NumericalError(QloopError, ArithmeticError):
    """A numerical routine failed or a built-in cross-check disagreed."""
