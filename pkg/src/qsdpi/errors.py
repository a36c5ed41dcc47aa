"""Exception types raised across the package."""


class QsdpiError(ValueError):
    """Base class for all validation and numerical errors."""


class NotHermitian(QsdpiError):
    pass


class DimMismatch(QsdpiError):
    pass


class DomainError(QsdpiError):
    pass


class ParamError(QsdpiError):
    pass


class NotAState(QsdpiError):
    pass


class InvalidPovm(QsdpiError):
    pass


class BasisNotOrthonormal(QsdpiError):
    pass


class NotAChannel(QsdpiError):
    pass


class FullRankRequired(QsdpiError):
    pass


class NumericalInstability(QsdpiError):
    pass


class ZeroDirection(QsdpiError):
    pass


class NotTraceless(QsdpiError):
    pass


class DegenerateMeasurement(QsdpiError):
    pass


class DimensionBudgetExceeded(QsdpiError):
    pass


class ParseError(QsdpiError):
    """Malformed input file; ``path`` locates the offending field."""

    def __init__(self, message, path=""):
        super().__init__(message)
        self.path = path
