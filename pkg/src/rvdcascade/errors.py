"""Exception hierarchy shared by all modules."""


class RvDError(Exception):
    """Base class for every error raised by this package."""


class InvalidModulus(RvDError, ValueError):
    pass


class TruncationExceeded(RvDError, ArithmeticError):
    pass


class OutsideStrip(RvDError, ValueError):
    """Argument lies outside the strip where truncation bounds are tracked."""


class CoefficientPole(RvDError, ZeroDivisionError):
    pass


class PoleAtShift(RvDError, ZeroDivisionError):
    pass


class DimensionMismatch(RvDError, ValueError):
    pass


class UnsupportedGauge(RvDError, ValueError):
    pass


class MuDenominatorZero(RvDError, ZeroDivisionError):
    pass


class StageArityMismatch(RvDError, ValueError):
    pass


class CountertermPole(RvDError, ValueError):
    """The stage-1 counterterm has a pole at exp(pi a_-) = 1."""


class NumericalOverflow(RvDError, ArithmeticError):
    pass


class ResonantExponents(RvDError, ArithmeticError):
    pass


class NoPolynomialSector(RvDError, ValueError):
    pass


class SingularPoint(RvDError, ValueError):
    pass


class ConfluentSingularities(RvDError, ValueError):
    pass


class ConstraintViolated(RvDError, ValueError):
    pass
