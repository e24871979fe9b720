"""Exception hierarchy shared by every module of the package."""


class ScatteringError(Exception):
    """Base class for all errors raised by lowscat."""


class ConfigError(ScatteringError, ValueError):
    """Invalid user input (parameters, flags, files)."""


class DomainError(ScatteringError, ValueError):
    """Function evaluated outside its domain (pole, divergence, r <= 0...)."""


class UnsupportedOrderError(DomainError):
    pass


class DivergenceError(DomainError):
    """A closed-form expression sits on (or within 1e-9 of) a pole.

    ``pole`` carries the nearest pole location in the argument that was
    being checked.
    """

    def __init__(self, message, pole=None):
        super().__init__(message)
        self.pole = pole


class RangeNotFoundError(ScatteringError):
    pass


class StepFailureError(ScatteringError):
    """Numerov denominator vanished; use a smaller step."""


class InstabilityError(ScatteringError):
    """Wave function overflowed or became non-finite."""


class DegenerateDerivativeError(ScatteringError):
    pass


class MatchingError(ScatteringError):
    """u vanished at the matching radius."""


class EffectiveRangeUndefinedError(ScatteringError):
    pass


class ContractError(ScatteringError):
    """An operation received data violating its precondition."""


class NoBoundStateError(ScatteringError):
    pass


class FiniteRangeInvalidError(ScatteringError):
    pass


class NoBracketError(ScatteringError):
    def __init__(self, message, value_range=None):
        super().__init__(message)
        self.value_range = value_range


class ConvergenceError(ScatteringError):
    def __init__(self, message, last=None):
        super().__init__(message)
        self.last = last
