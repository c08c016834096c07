"""Exception hierarchy shared by every module."""


class DensityError(Exception):
    """Base class for all errors raised by ratdensity."""


class SingularSystem(DensityError):
    pass


class NotStochastic(DensityError):
    pass


class NotPrimitive(DensityError):
    pass


class RegexSyntaxError(DensityError, SyntaxError):
    """Malformed regular expression; ``position`` is the 0-based offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class LimitExceeded(DensityError):
    pass


class MonoidTooLarge(DensityError):
    pass


class NotIrreducible(DensityError):
    pass


class UndecidedAtHorizon(DensityError):
    """A horizon-bounded search found no witness.

    ``horizon`` is the length of the expansion that was searched.
    """

    def __init__(self, message, horizon):
        super().__init__(message)
        self.horizon = horizon


class Unsupported(DensityError):
    pass


class InvalidMeasure(DensityError):
    pass


class NotSofic(DensityError):
    pass


class NotRightIdeal(DensityError):
    pass


class NotLeftIdeal(DensityError):
    pass


class NotTwoSidedIdeal(DensityError):
    pass


class NotACode(DensityError):
    pass


class NotAperiodic(DensityError):
    pass


class ElementNotInJClass(DensityError):
    pass


class NoUsableRClass(DensityError):
    pass


class InvarianceViolation(DensityError):
    def __init__(self, message, cylinder=None):
        super().__init__(message)
        self.cylinder = cylinder


class ConfigError(DensityError):
    pass
