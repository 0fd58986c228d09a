"""Exception types shared across the package."""


class SlopeboundError(Exception):
    """Base class for domain errors."""


class PrecisionExhausted(SlopeboundError):
    """A certified comparison stayed undecided at the maximum precision.

    ``lo``/``hi`` carry a bracket for the quantity being computed when one
    is available.
    """

    def __init__(self, message: str, lo=None, hi=None):
        super().__init__(message)
        self.lo = lo
        self.hi = hi


class DegenerateBasis(SlopeboundError):
    pass


class ZeroVector(SlopeboundError):
    pass


class InvalidTopology(SlopeboundError):
    pass


class NonpositiveArea(SlopeboundError):
    pass


class ZeroU(SlopeboundError):
    pass


class Inconsistent(SlopeboundError):
    pass
