"""Exception hierarchy shared by every chainlp module."""


class ChainLPError(Exception):
    """Base class for all chainlp errors."""


class InvalidInstance(ChainLPError, ValueError):
    """Raised when instance data violates the problem's constraints."""


class EmptyInstance(InvalidInstance):
    pass


class DimensionMismatch(InvalidInstance):
    pass


class NonPositiveBound(InvalidInstance):
    pass


class UnsortedBounds(InvalidInstance):
    pass


class NonPositiveWeight(InvalidInstance):
    pass


class NegativeBudget(InvalidInstance):
    pass


class NonFiniteValue(InvalidInstance):
    pass


class IndexOutOfRange(ChainLPError, IndexError):
    pass


class NoCandidate(ChainLPError):
    """Every index is already in the full set; nothing left to select."""


class BudgetExceeded(ChainLPError, ValueError):
    pass


class NonMonotoneProfile(ChainLPError, ValueError):
    pass


class TooLarge(ChainLPError, ValueError):
    """The exact oracle refuses instances beyond its combinatorial limit."""


class NotInterior(ChainLPError):
    """The two-agent closed form lands outside the agents' capability bounds."""


class DidNotConverge(ChainLPError):
    def __init__(self, message, profile=None):
        super().__init__(message)
        self.profile = profile
