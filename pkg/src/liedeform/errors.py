"""Exception hierarchy shared by every module."""


class LieDeformError(Exception):
    pass


class DenominatorVanishes(LieDeformError, ZeroDivisionError):
    pass


class MissingAssignment(LieDeformError, KeyError):
    pass


class OutOfRange(LieDeformError, IndexError):
    pass


class TooLarge(LieDeformError, ValueError):
    pass


class ArityMismatch(LieDeformError, ValueError):
    pass


class DimensionMismatch(LieDeformError, ValueError):
    pass


class NotCertified(LieDeformError, ValueError):
    """Raised when a structure fails the Jacobi identity."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class Singular(LieDeformError, ValueError):
    pass


class BothZero(LieDeformError, ValueError):
    pass


class BadLabel(LieDeformError, KeyError):
    pass


class BadPrebasis(LieDeformError, ValueError):
    pass


class SplitNotSpanning(LieDeformError, ValueError):
    pass


class TruncationTooSmall(LieDeformError, ValueError):
    pass


class RelationViolated(LieDeformError, ValueError):
    pass


class ParseError(LieDeformError, ValueError):
    pass


class UnsupportedDim(LieDeformError, ValueError):
    pass
