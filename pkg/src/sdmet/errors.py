"""Exception hierarchy shared by all modules."""


class SdmetError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SdmetError, ValueError):
    """A point lies outside a chart's coordinate domain."""


class SingularPoint(SdmetError, ValueError):
    """A closed-form field was queried at (or numerically at) one of its poles."""


class ArgumentError(SdmetError, ValueError):
    """An argument is outside the supported range (e.g. n = 0 for Joyce data)."""


class InvalidData(SdmetError, ValueError):
    """Stabilizer data failed validation."""


class DegenerateTorusAction(SdmetError, ArithmeticError):
    """The phi-matrix determinant vanishes numerically."""


class SingularMetric(SdmetError, ArithmeticError):
    """A metric matrix is numerically non-invertible."""
